// Known closed-form solutions checked against the solver.

use std::f64::consts::PI;

use fgv::deconv::{solve, Mode, TargetSpec};
use fgv::oracle;
use fgv::{Param, ThetaFunction};

pub fn run_example() -> fgv::Result<()> {
    let (re, im) = oracle::smooth_exponents(2.0)?;
    println!("smooth(2): homogeneous exponents {re} ± {im:.6} i");
    let f = |y: f64| oracle::smooth_ode_solution(2.0, 2.0, 1.0, 0.5, y).unwrap();
    println!("  ODE residual at y=3: {:.2e}", oracle::smooth_ode_operator(2.0, f, 3.0, 1e-4) - 3f64.powi(-2));

    let lin = ThetaFunction::linear(Param::ratio(1, 2), Param::int(1))?;
    let run = solve(&lin, &TargetSpec::Recip, 20_000, Mode::Float)?;
    let n = 20_000.0;
    println!(
        "linear(1/2,1): A(n) sqrt(pi n)/2 = {:.5}, asymptotic {:.5}",
        run.big_a.get_f64(20_000) * (PI * n).sqrt() / 2.0,
        oracle::linear_theta_asymptotic(0.5, n)? * (PI * n).sqrt() / 2.0
    );

    println!("v23: F(1) = {}, F(10) = {:.6}, s1 = {:.9}", oracle::v23_f(1.0)?, oracle::v23_f(10.0)?, oracle::v23_root_s1());
    println!(
        "  residual at y=10: printed {:.3e}, shifted {:.3e}",
        oracle::v23_residual(10.0)?,
        oracle::v23_residual_shifted(10.0)?
    );

    let u = oracle::dirac_u_table(0.75, &TargetSpec::Zero, 33)?;
    println!("dirac(0.75), f = 0: U(3), U(5), U(9), U(17), U(33) = {} {} {} {} {}", u[2], u[4], u[8], u[16], u[32]);

    let ap = oracle::pow2_aprime(20)?;
    println!("pow2 a': {:?}", ap.to_f64_vec());
    println!("  printed constant 1/2 - 2 lambda sqrt 2 = {:.6}", oracle::pow2_aprime_constant());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
