// Index estimates and type classes from dyadic envelopes.

use fgv::deconv::{solve, Mode, TargetSpec};
use fgv::diagnostics::{classify_type, estimate_index, slow_variation_check};
use fgv::{Sequence, ThetaFunction};

pub fn run_example() -> fgv::Result<()> {
    let synth = Sequence::float((1..=1 << 16).map(|n| (n as f64).powf(-0.5)).collect(), "n^-1/2")?;
    let e = estimate_index(&synth)?;
    println!("n^-1/2: alpha_hat {:.4}, slowly varying {}", e.alpha_hat, e.slowly_varying_flag);

    let run = solve(&ThetaFunction::floor(), &TargetSpec::Recip, 100_000, Mode::Float)?;
    let e = estimate_index(&run.big_a)?;
    println!("floor/recip N=10^5: alpha_hat {:.4} ({})", e.alpha_hat, e.confidence_note);

    let pow2 = solve(&ThetaFunction::pow2(), &TargetSpec::Recip, 1 << 16, Mode::Float)?;
    println!("pow2 at alpha = 1: {:?}", classify_type(&pow2.big_a, 1.0)?);
    println!("pow2 at alpha = 0.8: {:?}", classify_type(&pow2.big_a, 0.8)?);

    let samples: Vec<(f64, f64)> = (0..12).map(|i| {
        let n = 10.0 * 2f64.powi(i);
        (n, n.ln())
    }).collect();
    println!("log is slowly varying: {}", slow_variation_check(&samples)?.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
