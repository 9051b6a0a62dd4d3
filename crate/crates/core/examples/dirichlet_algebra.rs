// Dirichlet convolution, inversion and the floor-sum identity
// `Σ_k x_k G(t/k) = Σ_k (x⋆z)_k ⌊t/k⌋`.

use fgv::arith;
use fgv::dirichlet::{convolve, invert, lemma1_check};

pub fn run_example() -> fgv::Result<()> {
    let n = 60;
    let ones = arith::ones(n)?;
    let mu = invert(&ones, n)?;
    println!("1/zeta coefficients: {:?}", &mu.to_f64_vec()[..12]);
    let unit = convolve(&mu, &ones, n)?;
    println!("mu * 1 = e1: {}", (2..=n).all(|k| unit.get_f64(k) == 0.0) && unit.get_f64(1) == 1.0);

    for (name, z) in [("ones", arith::ones(500)?), ("chi4", arith::chi4(500)?), ("alt", arith::alternating_unit(500)?)] {
        let x = invert(&z, 500)?;
        let c = lemma1_check(&x, &z, 500)?;
        println!("{name:5} t=500 lhs {} rhs {} equal {}", c.lhs, c.rhs, c.equal);
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
