// Kernel specs, the diagram `θ◇(t) = θ(1/t)` and its breakpoints.

use fgv::parse_theta;

pub fn run_example() -> fgv::Result<()> {
    for spec in ["floor", "frac:r=0.8", "smooth:lambda=2", "linear:r=1/2,s=1", "v23", "pow2", "m:4", "coeffs:chi4"] {
        let theta = parse_theta(spec)?;
        let bps = theta.breakpoints(0.05)?;
        let samples: Vec<String> = [0.1, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&t| Ok(format!("{:.4}", theta.diamond(t)?)))
            .collect::<fgv::Result<_>>()?;
        println!(
            "{:20} bound {:.3}  breakpoints above 0.05: {:2}  θ◇ at 0.1,0.25,0.5,0.75,1: {}",
            theta.spec_string(),
            theta.bound(),
            bps.len(),
            samples.join(" ")
        );
    }
    let vd = parse_theta("v23")?.vd_sample(5, 0.2)?;
    println!("v23 samples: {vd:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
