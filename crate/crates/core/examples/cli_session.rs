// Driving the command-line front end in-process; outputs land in a
// temporary directory with their JSON sidecars.

use fgv::cli;

pub fn run_example() -> fgv::Result<()> {
    let dir = std::env::temp_dir().join(format!("fgv-cli-session-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let out = dir.join("mu.csv");
    let out = out.to_string_lossy();
    let runs: [&[&str]; 4] = [
        &["fgv", "--quiet", "deconv", "--theta", "floor", "--target", "recip", "--n", "30", "--mode", "exact", "--out", &out],
        &["fgv", "check", "--suite", "lemma1", "--z", "chi4", "--t", "500"],
        &["fgv", "check", "--suite", "compensation", "--theta", "coeffs:dh", "--depth", "64"],
        &["fgv", "vd", "--theta", "nonsense"],
    ];
    for argv in runs {
        let code = cli::run(argv.iter().copied());
        println!("{} -> exit {code}", argv[1..].join(" "));
    }
    println!("{}", std::fs::read_to_string(format!("{out}.json"))?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
