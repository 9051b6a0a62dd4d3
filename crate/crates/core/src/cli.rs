//! Command-line front end: `sieve`, `deconv`, `vd`, `oracle`, `scan` and
//! `check`.
//!
//! Exit codes are 0 on success or PASS, 1 on a FAIL verdict and 2 on usage
//! or input errors. CSV outputs written to a file get a JSON sidecar
//! `<out>.json` holding the resolved arguments, the tool version and the
//! SHA-256 of the file, which is enough to reproduce the run.
//!
//! `--config PATH` reads flat `key = value` lines and appends `--key value`
//! for every key not already given on the command line. Without `--out`,
//! files go to `$FGV_OUT_DIR` when it is set and to standard output
//! otherwise.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::{self, Sequence};
use crate::conjecture;
use crate::deconv::{self, Mode, SolveOptions, TargetSpec};
use crate::diagnostics;
use crate::dirichlet;
use crate::error::{Error, Result};
use crate::io::format_f64;
use crate::oracle;
use crate::theta::parse_theta;

pub const OUT_DIR_ENV: &str = "FGV_OUT_DIR";

const BOOL_FLAGS: &[&str] = &["quiet", "summatory", "generic", "shifted", "json"];

#[derive(Parser, Debug)]
#[command(name = "fgv", version, about = "Summatory recurrences and kernels of good variation")]
struct Cli {
    /// Suppress progress lines on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    /// Flat key = value file mirroring the flags; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for `scan` (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic sequences as `n,value` CSV.
    Sieve(SieveArgs),
    /// Solve `f(n) = Σ a_k θ(n/k)` for `a`.
    Deconv(DeconvArgs),
    /// Sample the variational diagram `θ◇(t) = θ(1/t)`.
    Vd(VdArgs),
    /// Tabulate a closed-form solution.
    Oracle(OracleArgs),
    /// Index estimates and type scans, or the θ_m domination scan.
    Scan(ScanArgs),
    /// Identity and conjecture checks with a PASS/FAIL verdict.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SieveKind {
    Mobius,
    Liouville,
    Tau,
    Chi4,
    Dh,
    Alt,
    Ones,
}

#[derive(Args, Debug)]
struct SieveArgs {
    #[arg(long, value_enum)]
    kind: SieveKind,
    #[arg(long)]
    n: usize,
    /// Emit partial sums instead.
    #[arg(long)]
    summatory: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Float,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Emit {
    #[value(name = "a")]
    Coeffs,
    #[value(name = "A")]
    Partial,
    #[value(name = "scaled")]
    Scaled,
}

#[derive(Args, Debug)]
struct DeconvArgs {
    #[arg(long)]
    theta: String,
    #[arg(long, default_value = "recip")]
    target: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "a")]
    emit: Emit,
    /// Exponent of `A(n) n^α` for `--emit scaled`.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Row limit for `--emit scaled`.
    #[arg(long, default_value_t = 2000)]
    max_rows: usize,
    /// Force the O(N²) solver and lift its size cap.
    #[arg(long)]
    generic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VdArgs {
    #[arg(long)]
    theta: String,
    #[arg(long, default_value_t = 1000)]
    points: usize,
    #[arg(long, default_value_t = 1e-3)]
    tmin: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleCase {
    Smooth,
    Linear,
    V23,
    V23root,
    Dirac,
    Pow2,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long = "case", value_enum)]
    case: OracleCase,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// Target exponent; for `linear` without it the asymptotic `A(n)` is tabulated.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    c1: f64,
    #[arg(long, default_value_t = 0.0)]
    c2: f64,
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    #[arg(long, default_value = "zero")]
    target: String,
    #[arg(long, default_value_t = 1025)]
    n: usize,
    #[arg(long, default_value_t = 100.0)]
    ymax: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// For `v23`: the measure with densities moved to `(n+1) log 2`.
    #[arg(long)]
    shifted: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanSuite {
    Abc,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_enum)]
    suite: Option<ScanSuite>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    ms: Vec<u64>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long, default_value = "recip")]
    target: String,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    /// `lo:hi:step`
    #[arg(long, default_value = "0.3:0.7:0.01")]
    alphas: String,
    #[arg(long, default_value_t = 200)]
    rows: usize,
    /// CSV of the thinned trace `A(n) n^{1/2}`.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckSuite {
    Lemma1,
    Compensation,
    Section7,
    Comparison,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LemmaZ {
    Ones,
    Chi4,
    Alt,
    Dh,
    Tau,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: CheckSuite,
    #[arg(long, value_enum, default_value = "chi4")]
    z: LemmaZ,
    #[arg(long, default_value_t = 500)]
    t: usize,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long, default_value_t = 1000)]
    depth: usize,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    #[arg(long)]
    theta1: Option<String>,
    #[arg(long)]
    theta2: Option<String>,
    /// Print the JSON report instead of the verdict lines.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Ctx {
    quiet: bool,
    threads: usize,
    args: Vec<String>,
}

impl Ctx {
    fn progress(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    args: &'a [String],
    theta: Option<&'a str>,
    target: Option<String>,
    n: Option<usize>,
    mode: Option<String>,
    elapsed_secs: f64,
    output: String,
    sha256: String,
    extra: Value,
}

struct Meta<'a> {
    command: &'a str,
    theta: Option<&'a str>,
    target: Option<String>,
    n: Option<usize>,
    mode: Option<String>,
    elapsed_secs: f64,
    extra: Value,
}

impl<'a> Meta<'a> {
    fn new(command: &'a str) -> Self {
        Meta {
            command,
            theta: None,
            target: None,
            n: None,
            mode: None,
            elapsed_secs: 0.0,
            extra: Value::Null,
        }
    }
}

fn resolve_out(explicit: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    explicit
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Writes `bytes` to the resolved output (plus sidecar) or to stdout.
fn emit(ctx: &Ctx, out: Option<PathBuf>, bytes: &[u8], meta: Meta) -> Result<()> {
    let Some(path) = out else {
        std::io::stdout().write_all(bytes)?;
        return Ok(());
    };
    write_file(&path, bytes)?;
    let sidecar = Sidecar {
        tool: "fgv",
        version: env!("CARGO_PKG_VERSION"),
        command: meta.command,
        args: &ctx.args,
        theta: meta.theta,
        target: meta.target,
        n: meta.n,
        mode: meta.mode,
        elapsed_secs: meta.elapsed_secs,
        output: path.display().to_string(),
        sha256: format!("{:x}", Sha256::digest(bytes)),
        extra: meta.extra,
    };
    let mut side = path.clone().into_os_string();
    side.push(".json");
    write_file(Path::new(&side), &serde_json::to_vec_pretty(&sidecar)?)?;
    ctx.progress(format!("wrote {}", path.display()));
    Ok(())
}

fn csv_bytes<I>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn sequence_bytes(s: &Sequence) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    crate::io::write_sequence(&mut buf, s)?;
    Ok(buf)
}

fn float_rows(rows: &[(f64, f64)]) -> impl Iterator<Item = Vec<String>> + '_ {
    rows.iter().map(|(a, b)| vec![format_f64(*a), format_f64(*b)])
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn report_bytes<T: Serialize>(report: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(report)?;
    v.push(b'\n');
    Ok(v)
}

fn sieve(ctx: &Ctx, a: &SieveArgs) -> Result<i32> {
    let start = Instant::now();
    let s = match a.kind {
        SieveKind::Mobius => arith::mobius_sieve(a.n)?,
        SieveKind::Liouville => arith::liouville_sieve(a.n)?,
        SieveKind::Tau => arith::ramanujan_tau(a.n)?,
        SieveKind::Chi4 => arith::chi4(a.n)?,
        SieveKind::Dh => arith::dh_sequence(a.n)?,
        SieveKind::Alt => arith::alternating_unit(a.n)?,
        SieveKind::Ones => arith::ones(a.n)?,
    };
    let s = if a.summatory { arith::summatory(&s) } else { s };
    let kind = format!("{:?}", a.kind).to_lowercase();
    let mut meta = Meta::new("sieve");
    meta.n = Some(a.n);
    meta.elapsed_secs = start.elapsed().as_secs_f64();
    meta.extra = json!({ "kind": kind, "summatory": a.summatory });
    let out = resolve_out(&a.out, &format!("sieve-{kind}-{}.csv", a.n));
    emit(ctx, out, &sequence_bytes(&s)?, meta)?;
    Ok(0)
}

fn deconv_cmd(ctx: &Ctx, a: &DeconvArgs) -> Result<i32> {
    let theta = parse_theta(&a.theta)?;
    let target = TargetSpec::parse(&a.target)?;
    let mode = Mode::from(a.mode);
    let opts = if a.generic {
        SolveOptions::generic().uncapped()
    } else {
        SolveOptions::default()
    };
    let run = deconv::solve_with(&theta, &target, a.n, mode, opts)?;
    ctx.progress(format!(
        "deconv: {} N={} {} via {:?} in {:.3} s",
        theta.spec_string(),
        a.n,
        mode,
        run.path,
        run.elapsed.as_secs_f64()
    ));
    let (bytes, name) = match a.emit {
        Emit::Coeffs => (sequence_bytes(&run.a)?, "a"),
        Emit::Partial => (sequence_bytes(&run.big_a)?, "A"),
        Emit::Scaled => {
            let rows = run.scaled_trace(a.alpha, a.max_rows);
            (
                csv_bytes(
                    &["n", "value"],
                    rows.iter().map(|(n, v)| vec![n.to_string(), format_f64(*v)]),
                )?,
                "scaled",
            )
        }
    };
    let mut meta = Meta::new("deconv");
    meta.theta = Some(&a.theta);
    meta.target = Some(target.to_string());
    meta.n = Some(a.n);
    meta.mode = Some(mode.to_string());
    meta.elapsed_secs = run.elapsed.as_secs_f64();
    meta.extra = json!({
        "emit": name,
        "alpha": a.alpha,
        "path": format!("{:?}", run.path),
        "kernel_form": format!("{:?}", run.kernel_form),
    });
    let out = resolve_out(&a.out, &format!("deconv-{name}-{}.csv", a.n));
    emit(ctx, out, &bytes, meta)?;
    Ok(0)
}

fn vd(ctx: &Ctx, a: &VdArgs) -> Result<i32> {
    let start = Instant::now();
    let theta = parse_theta(&a.theta)?;
    let rows = theta.vd_sample(a.points, a.tmin)?;
    let mut meta = Meta::new("vd");
    meta.theta = Some(&a.theta);
    meta.elapsed_secs = start.elapsed().as_secs_f64();
    meta.extra = json!({ "points": a.points, "tmin": a.tmin });
    let bytes = csv_bytes(&["t", "theta_diamond"], float_rows(&rows))?;
    emit(ctx, resolve_out(&a.out, "vd.csv"), &bytes, meta)?;
    Ok(0)
}

fn oracle_cmd(ctx: &Ctx, a: &OracleArgs) -> Result<i32> {
    let start = Instant::now();
    let ys = || grid(1.0, a.ymax, a.points);
    let table = |f: &dyn Fn(f64) -> Result<f64>| -> Result<Vec<(f64, f64)>> {
        ys().into_iter().map(|y| Ok((y, f(y)?))).collect()
    };
    let mut extra = json!({});
    let bytes = match a.case {
        OracleCase::Smooth => {
            let beta = a.beta.unwrap_or(2.0);
            let rows = table(&|y| oracle::smooth_ode_solution(a.lambda, beta, a.c1, a.c2, y))?;
            extra = json!({ "lambda": a.lambda, "beta": beta, "c1": a.c1, "c2": a.c2 });
            csv_bytes(&["y", "value"], float_rows(&rows))?
        }
        OracleCase::Linear => match a.beta {
            Some(beta) => {
                let rows = table(&|y| oracle::linear_theta_solution(a.r, a.s, beta, a.a, a.c, y))?;
                extra = json!({ "r": a.r, "s": a.s, "beta": beta, "a": a.a, "c": a.c });
                csv_bytes(&["y", "value"], float_rows(&rows))?
            }
            None => {
                let rows = (1..=a.n)
                    .map(|n| Ok(vec![n.to_string(), format_f64(oracle::linear_theta_asymptotic(a.r, n as f64)?)]))
                    .collect::<Result<Vec<_>>>()?;
                extra = json!({ "r": a.r, "asymptotic": true });
                csv_bytes(&["n", "value"], rows)?
            }
        },
        OracleCase::V23 => {
            let rows = if a.shifted {
                table(&oracle::v23_f_shifted)?
            } else {
                table(&oracle::v23_f)?
            };
            extra = json!({ "shifted": a.shifted });
            csv_bytes(&["y", "value"], float_rows(&rows))?
        }
        OracleCase::V23root => {
            let s1 = oracle::v23_root_s1();
            csv_bytes(&["name", "value"], [vec!["s1".to_string(), format_f64(s1)]])?
        }
        OracleCase::Dirac => {
            let f = TargetSpec::parse(&a.target)?;
            let u = oracle::dirac_u_table(a.r, &f, a.n)?;
            extra = json!({ "r": a.r, "target": f.to_string() });
            csv_bytes(
                &["n", "value"],
                u.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), format_f64(*v)]),
            )?
        }
        OracleCase::Pow2 => {
            let s = oracle::pow2_aprime(a.n)?;
            extra = json!({ "constant": oracle::pow2_aprime_constant() });
            sequence_bytes(&s)?
        }
    };
    let name = format!("{:?}", a.case).to_lowercase();
    let mut meta = Meta::new("oracle");
    meta.elapsed_secs = start.elapsed().as_secs_f64();
    meta.extra = json!({ "case": name, "params": extra });
    emit(ctx, resolve_out(&a.out, &format!("oracle-{name}.csv")), &bytes, meta)?;
    Ok(0)
}

fn parse_alphas(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("alphas must be lo:hi:step, got {s:?}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || hi < lo {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + step * i as f64).collect())
}

fn pool(ctx: &Ctx) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}

fn scan(ctx: &Ctx, a: &ScanArgs) -> Result<i32> {
    let pool = pool(ctx)?;
    if let Some(ScanSuite::Abc) = a.suite {
        let report = pool.install(|| diagnostics::conjecture_abc_scan(&a.ms, a.n, a.rows))?;
        let violations: usize = report.domination.iter().map(|d| d.violations).sum();
        ctx.progress(format!(
            "scan abc: N={} ms={:?} violations={violations} in {:.2} s",
            a.n, a.ms, report.elapsed_secs
        ));
        for d in &report.domination {
            if let Some(w) = d.first_violation {
                ctx.progress(format!("  m={} first violation at n={w}", d.m));
            }
        }
        let out = resolve_out(&a.out, &format!("scan-abc-{}.json", a.n));
        let mut meta = Meta::new("scan");
        meta.n = Some(a.n);
        meta.elapsed_secs = report.elapsed_secs;
        emit(ctx, out, &report_bytes(&report)?, meta)?;
        let slope_ok = report.a2_slope.is_none_or(|s| s > 0.0);
        return Ok(if violations == 0 && slope_ok { 0 } else { 1 });
    }
    let spec = a
        .theta
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("scan needs --theta or --suite abc".into()))?;
    let theta = parse_theta(spec)?;
    let target = TargetSpec::parse(&a.target)?;
    let mode = Mode::from(a.mode);
    let alphas = parse_alphas(&a.alphas)?;
    let run = deconv::solve(&theta, &target, a.n, mode)?;
    ctx.progress(format!(
        "scan: solved {} N={} in {:.3} s",
        theta.spec_string(),
        a.n,
        run.elapsed.as_secs_f64()
    ));
    let trace = run.big_a.to_float();
    let index = diagnostics::estimate_index(&trace)?;
    let types = pool.install(|| {
        alphas
            .par_iter()
            .map(|&al| diagnostics::classify_type_report(&trace, al))
            .collect::<Result<Vec<_>>>()
    })?;
    if let Some(path) = &a.trace {
        let rows = run.scaled_trace(0.5, a.rows);
        let bytes = csv_bytes(
            &["n", "value"],
            rows.iter().map(|(n, v)| vec![n.to_string(), format_f64(*v)]),
        )?;
        let mut meta = Meta::new("scan");
        meta.theta = Some(spec);
        meta.target = Some(target.to_string());
        meta.n = Some(a.n);
        meta.mode = Some(mode.to_string());
        meta.extra = json!({ "alpha": 0.5 });
        emit(ctx, Some(path.clone()), &bytes, meta)?;
    }
    let report = json!({
        "theta": theta.spec_string(),
        "target": target.to_string(),
        "n": a.n,
        "mode": mode.to_string(),
        "solve_secs": run.elapsed.as_secs_f64(),
        "index": index,
        "types": types.iter().map(|t| json!({
            "alpha": t.alpha,
            "class": t.class,
            "slope": t.slope,
        })).collect::<Vec<_>>(),
    });
    let mut meta = Meta::new("scan");
    meta.theta = Some(spec);
    meta.n = Some(a.n);
    emit(ctx, resolve_out(&a.out, &format!("scan-{}.json", a.n)), &report_bytes(&report)?, meta)?;
    Ok(0)
}

fn lemma_z(kind: LemmaZ, t: usize) -> Result<Sequence> {
    match kind {
        LemmaZ::Ones => arith::ones(t),
        LemmaZ::Chi4 => arith::chi4(t),
        LemmaZ::Alt => arith::alternating_unit(t),
        LemmaZ::Dh => arith::dh_sequence(t),
        LemmaZ::Tau => arith::ramanujan_tau(t),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check(ctx: &Ctx, a: &CheckArgs) -> Result<i32> {
    let need = |o: &Option<String>, flag: &str| {
        o.clone()
            .ok_or_else(|| Error::InvalidParameter(format!("this suite needs {flag}")))
    };
    let (report, pass, lines): (Value, bool, Vec<String>) = match a.suite {
        CheckSuite::Lemma1 => {
            let z = lemma_z(a.z, a.t)?;
            let x = dirichlet::invert(&z, a.t)?;
            let c = dirichlet::lemma1_check(&x, &z, a.t)?;
            let show = |e: &Option<crate::Exact>, f: f64| e.as_ref().map_or(format_f64(f), |q| q.to_string());
            let (l, r) = (show(&c.lhs_exact, c.lhs), show(&c.rhs_exact, c.rhs));
            let z_name = format!("{:?}", a.z).to_lowercase();
            (
                json!({ "suite": "lemma1", "z": z_name, "t": a.t, "exact": c.exact, "lhs": l, "rhs": r, "pass": c.equal }),
                c.equal,
                vec![format!("lhs = {l}"), format!("rhs = {r}")],
            )
        }
        CheckSuite::Compensation => {
            let theta = parse_theta(&need(&a.theta, "--theta")?)?;
            let r = conjecture::check_compensation(&conjecture::extract_ij(&theta, a.depth)?)?;
            let lines = r
                .conditions
                .iter()
                .map(|c| format!("{:28} {:?}  {}", c.name, c.verdict, c.evidence))
                .chain(r.predicted_index.map(|i| format!("predicted index {i}")))
                .collect();
            (serde_json::to_value(&r)?, r.all_pass, lines)
        }
        CheckSuite::Section7 => {
            let r = conjecture::check_section7(a.grid)?;
            let lines = vec![
                format!("max {} = {} ({})", r.max_theta1, r.max_theta2, verdict(r.max_equal)),
                format!("min {} = {} ({})", r.min_theta1, r.min_theta2, verdict(r.min_equal)),
                format!(
                    "area floor {:.12} (expected {:.12}), area theta1 {:.12} ({})",
                    r.area_theta2,
                    r.area_theta2_expected,
                    r.area_theta1,
                    verdict(r.areas_ok)
                ),
                format!(
                    "{} jumps checked, largest {:.3e} ({})",
                    r.jumps_checked,
                    r.max_jump,
                    verdict(r.negative_jumps)
                ),
            ];
            (serde_json::to_value(&r)?, r.pass, lines)
        }
        CheckSuite::Comparison => {
            let t1 = parse_theta(&need(&a.theta1, "--theta1")?)?;
            let t2 = parse_theta(&need(&a.theta2, "--theta2")?)?;
            let r = conjecture::check_comparison_smooth(&t1, &t2, a.grid)?;
            let lines = vec![
                format!("dominated: {} {:?}", r.dominated, r.first_domination_failure),
                format!("same variations: {} {:?}", r.same_variations, r.first_pattern_failure),
            ];
            (serde_json::to_value(&r)?, r.pass, lines)
        }
    };
    let suite = format!("{:?}", a.suite).to_lowercase();
    if a.json {
        std::io::stdout().write_all(&report_bytes(&report)?)?;
    } else {
        let mut stdout = std::io::stdout().lock();
        for l in &lines {
            writeln!(stdout, "{l}")?;
        }
        writeln!(stdout, "{} {suite}", verdict(pass))?;
    }
    if let Some(path) = resolve_out(&a.out, &format!("check-{suite}.json")) {
        let mut meta = Meta::new("check");
        meta.theta = a.theta.as_deref();
        meta.extra = json!({ "suite": suite, "pass": pass });
        emit(ctx, Some(path), &report_bytes(&report)?, meta)?;
    }
    Ok(if pass { 0 } else { 1 })
}

fn flag_given(args: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| *a == long || a.starts_with(&eq))
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Appends `--key value` for config entries whose flag is absent.
fn merge_config(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)?;
    let mut extra = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{path}:{}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        if k == "config" || flag_given(&args, &k) {
            continue;
        }
        if BOOL_FLAGS.contains(&k.as_str()) {
            match v {
                "true" => extra.push(format!("--{k}")),
                "false" => {}
                _ => return Err(Error::Parse(format!("{path}:{}: {k} must be true or false", i + 1))),
            }
        } else {
            extra.push(format!("--{k}"));
            extra.push(v.to_string());
        }
    }
    args.extend(extra);
    Ok(args)
}

/// Arguments recorded in sidecars: the merged command line without the
/// program name and the config path.
fn recorded_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            it.next();
        } else if !a.starts_with("--config=") {
            out.push(a.clone());
        }
    }
    out
}

/// Parses `argv` (program name first) and runs the subcommand; returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let raw: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let args = match merge_config(raw) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let ctx = Ctx {
        quiet: cli.quiet,
        threads: cli.threads,
        args: recorded_args(&args),
    };
    let result = match &cli.command {
        Command::Sieve(a) => sieve(&ctx, a),
        Command::Deconv(a) => deconv_cmd(&ctx, a),
        Command::Vd(a) => vd(&ctx, a),
        Command::Oracle(a) => oracle_cmd(&ctx, a),
        Command::Scan(a) => scan(&ctx, a),
        Command::Check(a) => check(&ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_grid() {
        let a = parse_alphas("0.3:0.7:0.01").unwrap();
        assert_eq!(a.len(), 41);
        assert!((a[40] - 0.7).abs() < 1e-12);
        assert!(parse_alphas("0.3:0.7").is_err());
        assert!(parse_alphas("0.3:0.7:0").is_err());
    }

    #[test]
    fn config_merge_respects_flags() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.conf");
        fs::write(&p, "# test\nn = 50\nmode = exact\nquiet = true\nsummatory=false\n").unwrap();
        let args: Vec<String> = ["fgv", "deconv", "--theta", "floor", "--n", "10", "--config"]
            .iter()
            .map(|s| s.to_string())
            .chain([p.display().to_string()])
            .collect();
        let merged = merge_config(args).unwrap();
        assert!(!merged.contains(&"50".to_string()));
        assert!(merged.ends_with(&["--mode".into(), "exact".into(), "--quiet".into()]));
        assert_eq!(recorded_args(&merged)[..5], ["deconv", "--theta", "floor", "--n", "10"]);
    }
}
