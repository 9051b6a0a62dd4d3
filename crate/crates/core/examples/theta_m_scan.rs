// `θ_{2m}` runs against `θ₂`: domination of `|A_{2m}|` by `A₂` and the
// growth of `A₂(n)√n`. Pass `N` as the first argument for a larger run.

use fgv::diagnostics::conjecture_abc_scan;

pub fn run_with(n: usize) -> fgv::Result<()> {
    let report = conjecture_abc_scan(&[1, 2, 3, 4, 5], n, 6)?;
    println!("N = {n}, slope of A2 sqrt n against log n: {:.4}", report.a2_slope.unwrap_or(f64::NAN));
    for d in &report.domination {
        println!("  {}: {} violations, first {:?}", d.theta, d.violations, d.first_violation);
    }
    for (k, row) in &report.overlay {
        let cols: Vec<String> = row.iter().map(|v| format!("{v:+.4}")).collect();
        println!("  n = {k:7}: {}", cols.join(" "));
    }
    Ok(())
}

pub fn run_example() -> fgv::Result<()> {
    run_with(1 << 14)
}

#[allow(dead_code)]
fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1 << 17);
    if let Err(e) = run_with(n) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
