//! Index estimation, slow-variation tests and type classification for
//! partial-sum traces `A(n)`.
//!
//! `A(n)` changes sign, so everything works on dyadic envelopes
//! `E_j = max{|A(n)| : 2^j ≤ n < 2^{j+1}}` over complete windows, and fits
//! only the upper half of them.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Sequence;
use crate::deconv::{self, Mode, TargetSpec};
use crate::error::{Error, Result};
use crate::thresholds::{self, Thresholds, THRESHOLDS};
use crate::theta::ThetaFunction;

#[derive(Clone, Debug, Serialize)]
pub struct IndexEstimate {
    pub alpha_hat: f64,
    /// `(j, local slope of ln E per octave)` between windows `j` and `j+1`.
    pub window_slopes: Vec<(u32, f64)>,
    pub slowly_varying_flag: bool,
    pub confidence_note: String,
    pub thresholds: Thresholds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FgvType {
    Type1,
    Type2,
    Type3,
    Inconclusive,
}

fn check_len(a: &Sequence) -> Result<()> {
    if a.len() < thresholds::MIN_TRACE_LEN {
        return Err(Error::TooShort {
            needed: thresholds::MIN_TRACE_LEN,
            have: a.len(),
        });
    }
    Ok(())
}

/// `max |A(n)| n^α` over each complete window `[2^j, 2^{j+1})`.
pub fn dyadic_envelope(a: &Sequence, alpha: f64) -> Vec<(u32, f64)> {
    let n = a.len();
    let mut out = Vec::new();
    let mut j = 0u32;
    while (1usize << (j + 1)) - 1 <= n {
        let lo = 1usize << j;
        let hi = (1usize << (j + 1)) - 1;
        let m = (lo..=hi)
            .map(|k| a.get_f64(k).abs() * (k as f64).powf(alpha))
            .fold(0.0, f64::max);
        out.push((j, m));
        j += 1;
    }
    out
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Upper half of the windows with a positive envelope, as `(j, ln E_j)`.
fn upper_half_logs(env: &[(u32, f64)]) -> Vec<(f64, f64)> {
    let start = env.len() / 2;
    env[start..]
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(j, e)| (*j as f64, e.ln()))
        .collect()
}

/// Slope per octave of `ln E_j` over the fitted windows.
fn octave_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    ls_slope(&xs, &ys)
}

pub fn estimate_index(a: &Sequence) -> Result<IndexEstimate> {
    check_len(a)?;
    let env = dyadic_envelope(a, 0.0);
    let pts = upper_half_logs(&env);
    if pts.len() < 2 {
        return Ok(IndexEstimate {
            alpha_hat: 0.0,
            window_slopes: vec![(0, 0.0)],
            slowly_varying_flag: false,
            confidence_note: "degenerate: envelope vanishes on the fitted windows".into(),
            thresholds: THRESHOLDS,
        });
    }
    let slope = octave_slope(&pts) / LN_2;
    let window_slopes: Vec<(u32, f64)> = env
        .windows(2)
        .filter(|w| w[0].1 > 0.0 && w[1].1 > 0.0)
        .map(|w| (w[0].0, (w[1].1.ln() - w[0].1.ln()) / LN_2))
        .collect();
    let half = pts.len() / 2;
    let (lower, upper) = pts.split_at(half);
    let drift = if lower.len() >= 2 && upper.len() >= 2 {
        (octave_slope(upper) - octave_slope(lower)) / LN_2
    } else {
        0.0
    };
    let flag = drift.abs() > thresholds::SLOW_DRIFT;
    let note = format!(
        "fit over windows j = {}..={} ({} windows); slope drift between halves {:+.4}{}",
        pts[0].0,
        pts[pts.len() - 1].0,
        pts.len(),
        drift,
        if pts.len() < 4 { "; few windows, low confidence" } else { "" }
    );
    Ok(IndexEstimate {
        alpha_hat: -slope,
        window_slopes,
        slowly_varying_flag: flag,
        confidence_note: note,
        thresholds: THRESHOLDS,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeReport {
    pub alpha: f64,
    pub class: FgvType,
    /// Slope of `ln S_j` per octave over the fitted windows.
    pub slope: f64,
    pub envelope: Vec<(u32, f64)>,
}

pub fn classify_type(a: &Sequence, alpha: f64) -> Result<FgvType> {
    Ok(classify_type_report(a, alpha)?.class)
}

/// Type 1 when `S_j` neither grows nor decays by more than
/// [`thresholds::TYPE_SLOPE`] per octave, type 2 when it grows, type 3 when
/// it decays.
pub fn classify_type_report(a: &Sequence, alpha: f64) -> Result<TypeReport> {
    check_len(a)?;
    let env = dyadic_envelope(a, alpha);
    let pts = upper_half_logs(&env);
    if pts.len() < 2 {
        return Ok(TypeReport {
            alpha,
            class: FgvType::Inconclusive,
            slope: 0.0,
            envelope: env,
        });
    }
    let slope = octave_slope(&pts);
    let class = if slope > thresholds::TYPE_SLOPE {
        FgvType::Type2
    } else if slope < -thresholds::TYPE_SLOPE {
        FgvType::Type3
    } else {
        FgvType::Type1
    };
    Ok(TypeReport {
        alpha,
        class,
        slope,
        envelope: env,
    })
}

/// `classify_type` over a grid of exponents.
pub fn alpha_scan(a: &Sequence, alphas: &[f64]) -> Result<Vec<TypeReport>> {
    alphas.iter().map(|&al| classify_type_report(a, al)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub x: f64,
    pub n: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SlowVariationReport {
    pub pass: bool,
    pub rows: Vec<RatioRow>,
    /// `(x, mean |ratio − 1| in the first octave, same in the last octave)`
    pub drift: Vec<(f64, f64, f64)>,
    pub note: String,
}

/// Tests `L(xn)/L(n) → 1` for `x ∈ {2, 4}` on samples `(n, L(n))`.
pub fn slow_variation_check(samples: &[(f64, f64)]) -> Result<SlowVariationReport> {
    let mut s: Vec<(f64, f64)> = samples.to_vec();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = match (s.first(), s.last()) {
        (Some(a), Some(b)) if a.0 > 0.0 && b.0 >= 8.0 * a.0 => (a.0, b.0),
        _ => {
            return Err(Error::InvalidParameter(
                "samples must span at least 3 octaves of positive n".into(),
            ))
        }
    };
    let nonpositive = s.iter().any(|p| p.1 <= 0.0);
    let lookup = |n: f64| -> Option<f64> {
        let i = s.partition_point(|p| p.0 < n * (1.0 - 1e-12));
        s.get(i).filter(|p| (p.0 - n).abs() <= 1e-9 * n).map(|p| p.1.abs())
    };
    let mut rows = Vec::new();
    let mut drift = Vec::new();
    let mut pass = true;
    for x in [2.0, 4.0] {
        let mine: Vec<RatioRow> = s
            .iter()
            .filter_map(|&(n, l)| {
                let up = lookup(n * x)?;
                (l != 0.0).then(|| RatioRow {
                    x,
                    n,
                    ratio: up / l.abs(),
                })
            })
            .collect();
        if mine.is_empty() {
            return Err(Error::InvalidParameter(format!("no sample pairs (n, {x}n)")));
        }
        let last_n = mine.last().unwrap().n;
        let dev = |r: &&RatioRow| (r.ratio - 1.0).abs();
        let first: Vec<f64> = mine.iter().filter(|r| r.n < 2.0 * lo).map(|r| dev(&r)).collect();
        let last: Vec<f64> = mine.iter().filter(|r| r.n > last_n / 2.0).map(|r| dev(&r)).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (d0, d1) = (mean(&first), mean(&last));
        let ok = d1 <= 1e-12 || d1 < d0;
        pass &= ok;
        drift.push((x, d0, d1));
        rows.extend(mine);
    }
    let note = format!(
        "n in [{lo}, {hi}]; pass when the last-octave deviation of L(xn)/L(n) from 1 is \
         below the first-octave deviation{}",
        if nonpositive { "; nonpositive L values, ratios use |L|" } else { "" }
    );
    Ok(SlowVariationReport {
        pass,
        rows,
        drift,
        note,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Domination {
    pub m: u64,
    /// `θ_{2m}`
    pub theta: String,
    pub violations: usize,
    pub first_violation: Option<usize>,
    pub max_excess: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbcReport {
    pub n: usize,
    pub n0: usize,
    pub ms: Vec<u64>,
    /// Slope of `A₂(n)√n` against `log n` over `[n0, N]`.
    pub a2_slope: Option<f64>,
    pub domination: Vec<Domination>,
    /// `(n, A_{2m}(n)√n for each m in ms)`.
    pub overlay: Vec<(usize, Vec<f64>)>,
    pub elapsed_secs: f64,
    pub thresholds: Thresholds,
}

/// Solves `θ_{2m}` with target `1/n` for every `m` and compares each
/// `|A_{2m}|` with `A₂` on `[n0, N]`.
pub fn conjecture_abc_scan(ms: &[u64], n: usize, overlay_rows: usize) -> Result<AbcReport> {
    let start = std::time::Instant::now();
    if ms.is_empty() {
        return Ok(AbcReport {
            n,
            n0: thresholds::ABC_N0,
            ms: Vec::new(),
            a2_slope: None,
            domination: Vec::new(),
            overlay: Vec::new(),
            elapsed_secs: 0.0,
            thresholds: THRESHOLDS,
        });
    }
    if n < thresholds::ABC_MIN_N {
        return Err(Error::TooShort {
            needed: thresholds::ABC_MIN_N,
            have: n,
        });
    }
    if let Some(m) = ms.iter().find(|&&m| m == 0) {
        return Err(Error::InvalidParameter(format!("m must be >= 1, got {m}")));
    }
    let mut all: Vec<u64> = ms.to_vec();
    if !all.contains(&1) {
        all.push(1);
    }
    let runs: Vec<(u64, Sequence)> = all
        .par_iter()
        .map(|&m| {
            let th = ThetaFunction::m(2 * m)?;
            let run = deconv::solve(&th, &TargetSpec::Recip, n, Mode::Float)?;
            Ok((m, run.big_a))
        })
        .collect::<Result<_>>()?;
    let a2 = &runs.iter().find(|r| r.0 == 1).expect("baseline").1;
    let n0 = thresholds::ABC_N0.min(n);
    let xs: Vec<f64> = (n0..=n).map(|k| (k as f64).ln()).collect();
    let ys: Vec<f64> = (n0..=n).map(|k| a2.get_f64(k) * (k as f64).sqrt()).collect();
    let a2_slope = Some(ls_slope(&xs, &ys));
    let mut domination = Vec::new();
    for &m in ms.iter().filter(|&&m| m > 1) {
        let big = &runs.iter().find(|r| r.0 == m).expect("run").1;
        let mut d = Domination {
            m,
            theta: format!("m:{}", 2 * m),
            violations: 0,
            first_violation: None,
            max_excess: 0.0,
        };
        for k in n0..=n {
            let excess = big.get_f64(k).abs() - a2.get_f64(k);
            if excess > 0.0 {
                d.violations += 1;
                d.first_violation.get_or_insert(k);
                d.max_excess = d.max_excess.max(excess);
            }
        }
        domination.push(d);
    }
    let overlay = deconv::scaled_trace(a2, 0.5, overlay_rows)
        .into_iter()
        .map(|(k, _)| {
            let vals = ms
                .iter()
                .map(|m| {
                    let s = &runs.iter().find(|r| r.0 == *m).expect("run").1;
                    s.get_f64(k) * (k as f64).sqrt()
                })
                .collect();
            (k, vals)
        })
        .collect();
    Ok(AbcReport {
        n,
        n0,
        ms: ms.to_vec(),
        a2_slope,
        domination,
        overlay,
        elapsed_secs: start.elapsed().as_secs_f64(),
        thresholds: THRESHOLDS,
    })
}
