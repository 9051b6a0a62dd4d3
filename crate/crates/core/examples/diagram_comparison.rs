// Comparing diagrams: grid checks for continuous kernels, the floor
// comparison and areas under `θ◇`.

use fgv::conjecture::{area_vd, check_comparison_smooth, check_section7};
use fgv::parse_theta;

pub fn run_example() -> fgv::Result<()> {
    let r = check_comparison_smooth(&parse_theta("smooth:lambda=2.2")?, &parse_theta("smooth:lambda=2")?, 1000)?;
    println!("smooth(2.2) vs smooth(2): pass {}", r.pass);
    let r = check_comparison_smooth(&parse_theta("smooth:lambda=2")?, &parse_theta("linear:r=1,s=1")?, 1000)?;
    println!("smooth(2) vs linear(1,1): same variations {} (first failure {:?})", r.same_variations, r.first_pattern_failure);

    let s7 = check_section7(1000)?;
    println!(
        "floor vs t/2 + 1/2: max {} / {}, min {} / {}, areas {:.9} and {}, pass {}",
        s7.max_theta2, s7.max_theta1, s7.min_theta2, s7.min_theta1, s7.area_theta2, s7.area_theta1, s7.pass
    );
    for spec in ["smooth:lambda=2", "linear:r=0.3,s=0.9", "v23", "frac:r=1/2", "coeffs:chi4"] {
        println!("area {spec:20} {:.10}", area_vd(&parse_theta(spec)?)?);
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
