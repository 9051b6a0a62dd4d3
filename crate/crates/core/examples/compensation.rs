// Breakpoint profiles `(I_n, J_n)` and the seven compensation conditions.

use fgv::conjecture::{check_compensation, extract_ij};
use fgv::parse_theta;

pub fn run_example() -> fgv::Result<()> {
    for spec in ["floor", "coeffs:chi4", "coeffs:alt", "coeffs:dh"] {
        let profile = extract_ij(&parse_theta(spec)?, 1000)?;
        let report = check_compensation(&profile)?;
        println!(
            "{spec}: I_2 = {:.6}, J_2 = {:.6}, all pass {}, predicted index {:?}",
            profile.i[1], profile.j[1], report.all_pass, report.predicted_index
        );
        for c in report.conditions.iter().filter(|c| !c.verdict.passes()) {
            println!("    {} -> {:?}: {}", c.name, c.verdict, c.evidence);
        }
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
