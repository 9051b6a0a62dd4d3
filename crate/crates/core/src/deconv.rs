//! Solving `f(n) = Σ_{k≤n} a_k θ(n/k)` for `a`, and the forward sums.
//!
//! Three solvers share one contract:
//!
//! * divisor-step kernels (`θ(x) = G(⌊x⌋)/x`) run in `O(N log N)` from
//!   `D(n) − D(n−1) = Σ_{k|n} k a_k w(n/k)` with `D(n) = n f(n)`;
//! * kernels whose diagram is polynomial on finitely many `t`-intervals
//!   run in `O(N · pieces)` from prefix power sums `Σ a_k k^j`;
//! * everything else goes through the `O(N²)` triangular recurrence.
//!
//! The raw form `f(n) = Σ a′_k g(n/k)` with `g(x) = xθ(x)` is solved as the
//! normalized problem with target `f(n)/n`, then `a′_k = k a_k`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_integer::Roots;
use serde::Serialize;

use crate::arith::{self, Sequence};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Param, Scalar};
use crate::theta::ThetaFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Parse(format!("mode must be exact or float, got {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// Whether sums use `θ(n/k)` or `g(n/k) = (n/k) θ(n/k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelForm {
    Normalized,
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolvePath {
    DivisorStep,
    Piecewise,
    Generic,
}

/// Which solver to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PathChoice {
    #[default]
    Auto,
    /// The `O(N²)` recurrence, whatever the kernel.
    Generic,
}

#[derive(Clone, Debug)]
pub enum TargetSpec {
    /// `1/n`
    Recip,
    /// `n^{−β}`
    Power(Param),
    /// `⌊√n⌋ / n`
    FloorSqrtOverN,
    /// `⌊√n⌋` against the raw kernel
    FloorSqrt,
    Const(Param),
    Zero,
    /// Explicit values `f(1..=len)` for the normalized form.
    Table { values: Sequence, path: Option<PathBuf> },
}

impl TargetSpec {
    /// `recip`, `power:beta=B`, `floorsqrt`, `floorsqrt_over_n`,
    /// `const:c=C`, `zero` or `file=PATH`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown target {s:?}"));
        if let Some(path) = s.strip_prefix("file=") {
            let path = PathBuf::from(path);
            let values = crate::io::read_sequence_file(&path)?;
            return Ok(TargetSpec::Table {
                values,
                path: Some(path),
            });
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let arg = |key: &str| -> Result<Param> {
            let v = args
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(bad)?;
            Param::parse(v)
        };
        let plain = |t: TargetSpec| if args.is_empty() { Ok(t) } else { Err(bad()) };
        match name {
            "recip" => plain(TargetSpec::Recip),
            "floorsqrt" => plain(TargetSpec::FloorSqrt),
            "floorsqrt_over_n" => plain(TargetSpec::FloorSqrtOverN),
            "zero" => plain(TargetSpec::Zero),
            "power" => Ok(TargetSpec::Power(arg("beta")?)),
            "const" => Ok(TargetSpec::Const(arg("c")?)),
            _ => Err(bad()),
        }
    }

    pub fn table(values: Sequence) -> Self {
        TargetSpec::Table { values, path: None }
    }

    pub fn kernel_form(&self) -> KernelForm {
        match self {
            TargetSpec::FloorSqrt => KernelForm::Raw,
            _ => KernelForm::Normalized,
        }
    }

    /// `n · f(n)` of the equivalent normalized problem.
    pub fn scaled<T: Scalar>(&self, n: usize) -> Result<T> {
        Ok(match self {
            TargetSpec::Recip => T::one(),
            TargetSpec::Zero => T::zero(),
            TargetSpec::FloorSqrt | TargetSpec::FloorSqrtOverN => T::from_int(n.sqrt() as i64),
            TargetSpec::Const(c) => T::from_param(c)?.mul_ref(&T::from_int(n as i64)),
            TargetSpec::Power(beta) => {
                // n^{1−β}
                if T::EXACT {
                    let q = beta.exact().expect("exact parameter");
                    if !q.is_integer() {
                        return Err(Error::NotExact(format!(
                            "n^(-{beta}) is irrational for non-integer beta"
                        )));
                    }
                    let e = 1 - i64::try_from(q.to_integer())
                        .map_err(|_| Error::InvalidParameter(format!("beta {beta} too large")))?;
                    let base = Exact::from_int(n as i64);
                    let p = num_traits::pow(base, e.unsigned_abs() as usize);
                    let v = if e >= 0 { p } else { Exact::from_int(1) / p };
                    T::from_exact(&v)
                } else {
                    T::from_f64((n as f64).powf(1.0 - beta.value()))
                }
            }
            TargetSpec::Table { values, .. } => {
                if n > values.len() {
                    return Err(Error::TooShort {
                        needed: n,
                        have: values.len(),
                    });
                }
                let v = if T::EXACT {
                    T::from_exact(values.get_exact(n).ok_or_else(|| {
                        Error::NotExact(format!("target '{}' holds floats", values.label()))
                    })?)
                } else {
                    T::from_f64(values.get_f64(n))
                };
                v.mul_ref(&T::from_int(n as i64))
            }
        })
    }

    /// `f(n)` in the target's own kernel form.
    pub fn value<T: Scalar>(&self, n: usize) -> Result<T> {
        let s = self.scaled::<T>(n)?;
        Ok(match self.kernel_form() {
            KernelForm::Raw => s,
            KernelForm::Normalized => s / T::from_int(n as i64),
        })
    }

    /// The target as a sequence `f(1..=n)`.
    pub fn sequence(&self, n: usize, mode: Mode) -> Result<Sequence> {
        let label = self.to_string();
        match mode {
            Mode::Exact => Sequence::exact(
                (1..=n).map(|m| self.value::<Exact>(m)).collect::<Result<_>>()?,
                label,
            ),
            Mode::Float => Sequence::float(
                (1..=n).map(|m| self.value::<f64>(m)).collect::<Result<_>>()?,
                label,
            ),
        }
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Recip => f.write_str("recip"),
            TargetSpec::Power(b) => write!(f, "power:beta={b}"),
            TargetSpec::FloorSqrtOverN => f.write_str("floorsqrt_over_n"),
            TargetSpec::FloorSqrt => f.write_str("floorsqrt"),
            TargetSpec::Const(c) => write!(f, "const:c={c}"),
            TargetSpec::Zero => f.write_str("zero"),
            TargetSpec::Table { path: Some(p), .. } => write!(f, "file={}", p.display()),
            TargetSpec::Table { values, .. } => write!(f, "table({})", values.label()),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub path: PathChoice,
    /// Largest `N` for the `O(N²)` solver.
    pub generic_cap: usize,
    /// Largest `N` in exact mode.
    pub exact_cap: usize,
}

pub const DEFAULT_GENERIC_CAP: usize = 20_000;
pub const DEFAULT_EXACT_CAP: usize = 10_000;

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            path: PathChoice::Auto,
            generic_cap: DEFAULT_GENERIC_CAP,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

impl SolveOptions {
    pub fn generic() -> Self {
        SolveOptions {
            path: PathChoice::Generic,
            ..SolveOptions::default()
        }
    }

    /// Lifts both caps.
    pub fn uncapped(mut self) -> Self {
        self.generic_cap = usize::MAX;
        self.exact_cap = usize::MAX;
        self
    }
}

/// A solved recurrence.
#[derive(Clone, Debug)]
pub struct DeconvRun {
    pub theta: ThetaFunction,
    pub target: TargetSpec,
    pub n: usize,
    /// Coefficients in the run's kernel form (`a′` for raw targets).
    pub a: Sequence,
    /// `A(n) = Σ_{k≤n} a_k`.
    pub big_a: Sequence,
    pub mode: Mode,
    pub kernel_form: KernelForm,
    pub path: SolvePath,
    pub elapsed: Duration,
}

impl DeconvRun {
    /// `(n, A(n) n^α)` on a dyadic-geometric subset of at most `max_rows`
    /// indices (every index when `N ≤ max_rows`).
    pub fn scaled_trace(&self, alpha: f64, max_rows: usize) -> Vec<(usize, f64)> {
        scaled_trace(&self.big_a, alpha, max_rows)
    }

    pub fn forward_check(&self) -> Result<Sequence> {
        forward(&self.theta, &self.a, self.n, self.kernel_form)
    }
}

/// Thinned `(n, A(n) n^α)` table; see [`DeconvRun::scaled_trace`].
pub fn scaled_trace(big_a: &Sequence, alpha: f64, max_rows: usize) -> Vec<(usize, f64)> {
    let n = big_a.len();
    let row = |m: usize| (m, big_a.get_f64(m) * (m as f64).powf(alpha));
    if n <= max_rows {
        return (1..=n).map(row).collect();
    }
    if max_rows < 2 {
        return (n + 1 - max_rows..=n).map(row).collect();
    }
    let ln = (n as f64).ln();
    let mut idx: Vec<usize> = (0..max_rows)
        .map(|i| ((ln * i as f64 / (max_rows - 1) as f64).exp().round() as usize).clamp(1, n))
        .collect();
    idx.dedup();
    idx.into_iter().map(row).collect()
}

/// Solves the recurrence on `1..=n`.
pub fn solve(theta: &ThetaFunction, target: &TargetSpec, n: usize, mode: Mode) -> Result<DeconvRun> {
    solve_with(theta, target, n, mode, SolveOptions::default())
}

pub fn solve_with(
    theta: &ThetaFunction,
    target: &TargetSpec,
    n: usize,
    mode: Mode,
    opts: SolveOptions,
) -> Result<DeconvRun> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if mode == Mode::Exact && n > opts.exact_cap {
        return Err(Error::CapExceeded {
            what: "exact mode",
            cap: opts.exact_cap,
            requested: n,
        });
    }
    let path = match opts.path {
        PathChoice::Generic => SolvePath::Generic,
        PathChoice::Auto if theta.is_divisor_step() => SolvePath::DivisorStep,
        PathChoice::Auto if theta.polynomial_pieces::<f64>()?.is_some() => SolvePath::Piecewise,
        PathChoice::Auto => SolvePath::Generic,
    };
    if path == SolvePath::Generic && n > opts.generic_cap {
        return Err(Error::CapExceeded {
            what: "the generic O(N^2) solver",
            cap: opts.generic_cap,
            requested: n,
        });
    }
    let start = Instant::now();
    let form = target.kernel_form();
    let label = format!("a[{}; {}]", theta.spec_string(), target);
    let a = match mode {
        Mode::Exact => {
            let a = solve_in::<Exact>(theta, target, n, path, form)?;
            Sequence::exact(a, label)?
        }
        Mode::Float => {
            let a = solve_in::<f64>(theta, target, n, path, form)?;
            Sequence::float(a, label)?
        }
    };
    let big_a = arith::summatory(&a);
    Ok(DeconvRun {
        theta: theta.clone(),
        target: target.clone(),
        n,
        a,
        big_a,
        mode,
        kernel_form: form,
        path,
        elapsed: start.elapsed(),
    })
}

fn solve_in<T: Scalar>(
    theta: &ThetaFunction,
    target: &TargetSpec,
    n: usize,
    path: SolvePath,
    form: KernelForm,
) -> Result<Vec<T>> {
    let mut a = match path {
        SolvePath::DivisorStep => solve_divisor_step::<T>(theta, target, n)?,
        SolvePath::Piecewise => solve_piecewise::<T>(theta, target, n)?,
        SolvePath::Generic => solve_generic::<T>(theta, target, n)?,
    };
    if form == KernelForm::Raw {
        for (k, v) in a.iter_mut().enumerate() {
            *v *= &T::from_int(k as i64 + 1);
        }
    }
    Ok(a)
}

fn solve_generic<T: Scalar>(theta: &ThetaFunction, target: &TargetSpec, n: usize) -> Result<Vec<T>> {
    let ev = theta.evaluator_upto::<T>(n)?;
    let pivot = ev.at(1, 1)?;
    let mut a: Vec<T> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut s = target.scaled::<T>(m)? / T::from_int(m as i64);
        for (k, ak) in a.iter().enumerate() {
            if !ak.is_zero() {
                s -= &ak.mul_ref(&ev.at(m as u64, k as u64 + 1)?);
            }
        }
        s /= &pivot;
        a.push(s);
    }
    Ok(a)
}

fn solve_divisor_step<T: Scalar>(
    theta: &ThetaFunction,
    target: &TargetSpec,
    n: usize,
) -> Result<Vec<T>> {
    let w = theta
        .step_weights::<T>(n)?
        .ok_or_else(|| Error::Unsupported(format!("{} is not divisor-step", theta.spec_string())))?;
    let w1 = match w.first() {
        Some((1, v)) => v.clone(),
        _ => return Err(Error::ZeroPivot),
    };
    let higher = &w[1..];
    let mut acc: Vec<T> = vec![T::zero(); n + 1];
    let mut a: Vec<T> = Vec::with_capacity(n);
    let mut d_prev = T::zero();
    for m in 1..=n {
        let d = target.scaled::<T>(m)?;
        let mut b = d.clone();
        b -= &d_prev;
        b -= &acc[m];
        b /= &w1;
        d_prev = d;
        if !b.is_zero() {
            for (q, wq) in higher {
                let Some(idx) = q.checked_mul(m).filter(|&i| i <= n) else {
                    break;
                };
                acc[idx] += &b.mul_ref(wq);
            }
        }
        a.push(b / T::from_int(m as i64));
    }
    Ok(a)
}

fn solve_piecewise<T: Scalar>(theta: &ThetaFunction, target: &TargetSpec, n: usize) -> Result<Vec<T>> {
    let pieces = theta
        .polynomial_pieces::<T>()?
        .ok_or_else(|| Error::Unsupported(format!("{} has no polynomial pieces", theta.spec_string())))?;
    let pivot = theta.evaluator::<T>()?.at(1, 1)?;
    let degree = pieces.iter().map(|p| p.poly.len()).max().unwrap_or(1);
    // sums[j][K] = Σ_{k≤K} a_k k^j
    let mut sums: Vec<Vec<T>> = vec![vec![T::zero()]; degree];
    let mut a: Vec<T> = Vec::with_capacity(n);
    for m in 1..=n {
        let inv_m = T::from_ratio(1, m as i128);
        let mut s = T::zero();
        for piece in &pieces {
            let (lo, hi) = piece.k_range(m as u64);
            let hi = hi.min(m as u64 - 1);
            if lo > hi {
                continue;
            }
            let mut scale = T::one();
            for (j, c) in piece.poly.iter().enumerate() {
                if !c.is_zero() {
                    let mut part = sums[j][hi as usize].clone();
                    part -= &sums[j][lo as usize - 1];
                    s += &part.mul_ref(c).mul_ref(&scale);
                }
                scale *= &inv_m;
            }
        }
        let mut am = target.scaled::<T>(m)?.mul_ref(&inv_m);
        am -= &s;
        am /= &pivot;
        let mut kj = T::one();
        let mk = T::from_int(m as i64);
        for row in sums.iter_mut() {
            let next = row[m - 1].clone() + am.mul_ref(&kj);
            row.push(next);
            kj *= &mk;
        }
        a.push(am);
    }
    Ok(a)
}

/// `f(n) = Σ_{k≤n} a_k θ(n/k)` (normalized) or `Σ a_k g(n/k)` (raw) on
/// `1..=n`; exact when `a` is exact and the kernel admits it.
pub fn forward(theta: &ThetaFunction, a: &Sequence, n: usize, form: KernelForm) -> Result<Sequence> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if a.len() < n {
        return Err(Error::TooShort {
            needed: n,
            have: a.len(),
        });
    }
    let label = format!("forward[{}; {}]", theta.spec_string(), a.label());
    if a.is_exact() {
        match forward_in::<Exact>(theta, &a.scalars::<Exact>()?[..n], n, form) {
            Ok(f) => return Sequence::exact(f, label),
            Err(Error::NotExact(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let f = forward_in::<f64>(theta, &a.to_f64_vec()[..n], n, form)?;
    Sequence::float(f, label)
}

fn forward_in<T: Scalar>(theta: &ThetaFunction, a: &[T], n: usize, form: KernelForm) -> Result<Vec<T>> {
    let raw = form == KernelForm::Raw;
    // normalized coefficients b with Σ a_k g(n/k) = n Σ b_k θ(n/k)
    if let Some(w) = theta.step_weights::<T>(n)? {
        // D(n) = Σ_{m≤n} (c ⋆ w)(m) with c_k = k a_k (normalized) or a_k (raw)
        let mut conv = vec![T::zero(); n + 1];
        for (k, ak) in a.iter().enumerate() {
            let k = k + 1;
            if ak.is_zero() {
                continue;
            }
            let c = if raw {
                ak.clone()
            } else {
                ak.mul_ref(&T::from_int(k as i64))
            };
            for (q, wq) in &w {
                let Some(idx) = q.checked_mul(k).filter(|&i| i <= n) else {
                    break;
                };
                conv[idx] += &c.mul_ref(wq);
            }
        }
        let mut acc = T::zero();
        let mut out = Vec::with_capacity(n);
        for (m, v) in conv.iter().enumerate().skip(1) {
            acc += v;
            out.push(if raw {
                acc.clone()
            } else {
                acc.clone() / T::from_int(m as i64)
            });
        }
        return Ok(out);
    }
    let ev = theta.evaluator::<T>()?;
    let mut out = Vec::with_capacity(n);
    for m in 1..=n {
        let mut s = T::zero();
        for (k, ak) in a.iter().enumerate().take(m) {
            if !ak.is_zero() {
                let k = k as u64 + 1;
                let mut v = ak.mul_ref(&ev.at(m as u64, k)?);
                if raw {
                    v *= &T::from_ratio(m as i128, k as i128);
                }
                s += &v;
            }
        }
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::CoeffKernel;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n as i128, d as i128)
    }

    #[test]
    fn mobius_over_k_from_floor() {
        let run = solve(&ThetaFunction::floor(), &TargetSpec::Recip, 6, Mode::Exact).unwrap();
        let want = [q(1, 1), q(-1, 2), q(-1, 3), q(0, 1), q(-1, 5), q(1, 6)];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(run.a.get_exact(k + 1).unwrap(), w);
        }
        assert_eq!(run.path, SolvePath::DivisorStep);
    }

    #[test]
    fn pow2_partial_sums_are_dyadic() {
        let n = 1 << 10;
        let run = solve(&ThetaFunction::pow2(), &TargetSpec::Recip, n, Mode::Exact).unwrap();
        for m in 1..=n {
            let p = 1u64 << (63 - (m as u64).leading_zeros());
            assert_eq!(run.big_a.get_exact(m).unwrap(), &q(1, p as i64));
        }
    }

    #[test]
    fn constant_kernel_telescopes() {
        let th = ThetaFunction::linear(Param::int(1), Param::int(1)).unwrap();
        let run = solve(&th, &TargetSpec::Recip, 40, Mode::Exact).unwrap();
        assert_eq!(run.a.get_exact(1).unwrap(), &q(1, 1));
        for m in 2..=40i64 {
            assert_eq!(run.a.get_exact(m as usize).unwrap(), &(q(1, m) - q(1, m - 1)));
            assert_eq!(run.big_a.get_exact(m as usize).unwrap(), &q(1, m));
        }
    }

    #[test]
    fn forward_examples() {
        let n = 100;
        let f = forward(&ThetaFunction::floor(), &arith::liouville_sieve(n).unwrap(), n, KernelForm::Raw).unwrap();
        for m in 1..=n {
            assert_eq!(f.get_exact(m).unwrap(), &Exact::from_int(m.sqrt() as i64));
        }
        let f = forward(&ThetaFunction::floor(), &arith::mobius_sieve(n).unwrap(), n, KernelForm::Raw).unwrap();
        assert!((1..=n).all(|m| f.get_exact(m).unwrap() == &Exact::from_int(1)));
        for th in [ThetaFunction::v23(), ThetaFunction::sqrt_floor(), ThetaFunction::pow2()] {
            let f = forward(&th, &arith::zeros(n).unwrap(), n, KernelForm::Normalized).unwrap();
            assert!(f.to_f64_vec().iter().all(|v| *v == 0.0));
        }
    }

    fn exact_kernels() -> Vec<ThetaFunction> {
        vec![
            ThetaFunction::floor(),
            ThetaFunction::pow2(),
            ThetaFunction::v23(),
            ThetaFunction::pw32(),
            ThetaFunction::m(3).unwrap(),
            ThetaFunction::frac(Param::parse("0.8").unwrap()).unwrap(),
            ThetaFunction::smooth(Param::parse("2").unwrap()).unwrap(),
            ThetaFunction::linear(Param::parse("0.5").unwrap(), Param::int(1)).unwrap(),
            ThetaFunction::dirac(Param::parse("0.75").unwrap()).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::chi4()).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::alternating()).unwrap(),
        ]
    }

    // exact denominators grow quickly for kernels that are not divisor-step
    fn exact_size(th: &ThetaFunction) -> usize {
        if th.is_divisor_step() {
            2000
        } else {
            120
        }
    }

    #[test]
    fn round_trip_is_exact() {
        for th in exact_kernels() {
            let n = exact_size(&th);
            for target in [TargetSpec::Recip, TargetSpec::FloorSqrt, TargetSpec::Const(Param::ratio(2, 3))] {
                let run = solve(&th, &target, n, Mode::Exact).unwrap();
                let f = run.forward_check().unwrap();
                let want = target.sequence(n, Mode::Exact).unwrap();
                assert_eq!(f.values(), want.values(), "{} {}", th.spec_string(), target);
            }
        }
    }

    #[test]
    fn fast_paths_match_generic_exactly() {
        for th in exact_kernels() {
            let n = exact_size(&th) / 2;
            let fast = solve(&th, &TargetSpec::Recip, n, Mode::Exact).unwrap();
            let slow = solve_with(&th, &TargetSpec::Recip, n, Mode::Exact, SolveOptions::generic()).unwrap();
            assert_eq!(fast.a.values(), slow.a.values(), "{}", th.spec_string());
        }
    }

    #[test]
    fn float_paths_agree() {
        let n = 3000;
        for th in exact_kernels() {
            let fast = solve(&th, &TargetSpec::Recip, n, Mode::Float).unwrap();
            let slow = solve_with(&th, &TargetSpec::Recip, n, Mode::Float, SolveOptions::generic()).unwrap();
            for m in 1..=n {
                let (x, y) = (fast.big_a.get_f64(m), slow.big_a.get_f64(m));
                assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()), "{} at {m}: {x} vs {y}", th.spec_string());
            }
        }
    }

    #[test]
    fn linearity() {
        let n = 200;
        let th = ThetaFunction::v23();
        let f1 = TargetSpec::Recip.sequence(n, Mode::Exact).unwrap();
        let f2 = TargetSpec::FloorSqrtOverN.sequence(n, Mode::Exact).unwrap();
        let sum: Vec<Exact> = (1..=n)
            .map(|m| f1.get_exact(m).unwrap() + f2.get_exact(m).unwrap())
            .collect();
        let sum = TargetSpec::table(Sequence::exact(sum, "f1+f2").unwrap());
        let a = solve(&th, &sum, n, Mode::Exact).unwrap().a;
        let a1 = solve(&th, &TargetSpec::Recip, n, Mode::Exact).unwrap().a;
        let a2 = solve(&th, &TargetSpec::FloorSqrtOverN, n, Mode::Exact).unwrap().a;
        for m in 1..=n {
            assert_eq!(a.get_exact(m).unwrap(), &(a1.get_exact(m).unwrap() + a2.get_exact(m).unwrap()));
        }
    }

    #[test]
    fn sqrtfloor_refuses_exact_mode() {
        let r = solve(&ThetaFunction::sqrt_floor(), &TargetSpec::Recip, 10, Mode::Exact);
        assert!(matches!(r, Err(Error::NotExact(_))));
        let run = solve(&ThetaFunction::sqrt_floor(), &TargetSpec::Recip, 500, Mode::Float).unwrap();
        let f = run.forward_check().unwrap();
        for m in 1..=500 {
            assert!((f.get_f64(m) - 1.0 / m as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn caps_and_pivots() {
        let th = ThetaFunction::sqrt_floor();
        assert!(matches!(
            solve(&th, &TargetSpec::Recip, DEFAULT_GENERIC_CAP + 1, Mode::Float),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            solve(&ThetaFunction::floor(), &TargetSpec::Recip, DEFAULT_EXACT_CAP + 1, Mode::Exact),
            Err(Error::CapExceeded { .. })
        ));
        let th = ThetaFunction::frac(0.8).unwrap();
        assert!(solve(&th, &TargetSpec::Recip, 10, Mode::Exact).is_err());
        assert!(solve(&ThetaFunction::floor(), &TargetSpec::Power(Param::parse("0.5").unwrap()), 10, Mode::Exact).is_err());
    }

    #[test]
    fn targets_parse_and_print() {
        for s in ["recip", "power:beta=0.5", "floorsqrt", "floorsqrt_over_n", "const:c=2", "zero"] {
            assert_eq!(TargetSpec::parse(s).unwrap().to_string(), s);
        }
        assert!(TargetSpec::parse("power").is_err());
        assert!(TargetSpec::parse("recip:x=1").is_err());
        let t = TargetSpec::Power(Param::int(2));
        assert_eq!(t.value::<Exact>(3).unwrap(), q(1, 9));
        assert_eq!(t.value::<f64>(4).unwrap(), 1.0 / 16.0);
    }

    #[test]
    fn scaled_trace_examples() {
        let run = solve(&ThetaFunction::pow2(), &TargetSpec::Recip, 5000, Mode::Float).unwrap();
        let tr = run.scaled_trace(1.0, 200);
        assert!(tr.len() <= 200 && tr.len() > 100);
        assert!(tr.iter().all(|(_, v)| (1.0..2.0).contains(v)));
        let raw = run.scaled_trace(0.0, 10_000);
        assert_eq!(raw.len(), 5000);
        assert!(raw.iter().all(|(m, v)| *v == run.big_a.get_f64(*m)));
    }

    #[test]
    fn float_drift_against_exact() {
        let n = 2000;
        let ex = solve(&ThetaFunction::floor(), &TargetSpec::Recip, n, Mode::Exact).unwrap();
        let fl = solve(&ThetaFunction::floor(), &TargetSpec::Recip, n, Mode::Float).unwrap();
        for m in 1..=n {
            let (x, y) = (ex.a.get_f64(m), fl.a.get_f64(m));
            assert!((x - y).abs() <= 1e-6 * x.abs().max(1e-300));
        }
    }
}
