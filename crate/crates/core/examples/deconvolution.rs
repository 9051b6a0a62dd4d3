// Solving `f(n) = Σ_{k≤n} a_k θ(n/k)` exactly and in floating point.

use fgv::arith;
use fgv::deconv::{solve, solve_with, Mode, SolveOptions, TargetSpec};
use fgv::ThetaFunction;

pub fn run_example() -> fgv::Result<()> {
    let floor = ThetaFunction::floor();
    let exact = solve(&floor, &TargetSpec::Recip, 2000, Mode::Exact)?;
    let mu = arith::mobius_sieve(2000)?;
    let matches = (1..=2000).all(|k| {
        exact.a.get_exact(k).map(|q| q * fgv::Exact::from_integer(k.into()))
            == mu.get_exact(k).cloned()
    });
    println!("exact floor/recip gives mu(k)/k: {matches} ({:?}, {:?})", exact.path, exact.elapsed);

    let big = solve(&floor, &TargetSpec::Recip, 1_000_000, Mode::Float)?;
    println!("float N=10^6 in {:?}; A(N) sqrt N = {:.4}", big.elapsed, big.big_a.get_f64(1_000_000) * 1000.0);

    let generic = solve_with(&floor, &TargetSpec::Recip, 3000, Mode::Float, SolveOptions::generic())?;
    let gap = (1..=3000)
        .map(|k| (generic.a.get_f64(k) - big.a.get_f64(k)).abs())
        .fold(0.0, f64::max);
    println!("generic and divisor-step paths differ by at most {gap:.2e} on 1..3000");

    let pow2 = solve(&ThetaFunction::pow2(), &TargetSpec::Recip, 4096, Mode::Exact)?;
    println!("pow2: A(1000) = {} (2^-9 = {})", pow2.big_a.get_f64(1000), 2f64.powi(-9));

    for (n, v) in big.scaled_trace(0.5, 8) {
        println!("  A({n}) n^1/2 = {v:+.5}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
