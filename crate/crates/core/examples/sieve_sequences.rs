// Arithmetic sequences and the Liouville identity `Σ λ(k)⌊n/k⌋ = ⌊√n⌋`.

use fgv::arith;
use fgv::deconv::{forward, KernelForm};
use fgv::ThetaFunction;

pub fn run_example() -> fgv::Result<()> {
    let n = 10_000;
    let mu = arith::mobius_sieve(n)?;
    let mertens = arith::summatory(&mu);
    println!("M(10^4) = {}", mertens.get_f64(n));

    let lambda = arith::liouville_sieve(n)?;
    let g = forward(&ThetaFunction::floor(), &lambda, n, KernelForm::Raw)?;
    let bad = (1..=n)
        .filter(|&k| g.get_f64(k) != (k as f64).sqrt().floor())
        .count();
    println!("sum lambda(k) floor(n/k) = floor(sqrt n) fails at {bad} of {n} indices");

    let tau = arith::ramanujan_tau(12)?;
    println!("tau(1..12): {:?}", tau.to_f64_vec());
    println!("chi4(1..8): {:?}", arith::chi4(8)?.to_f64_vec());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
