//! Condition checkers for the compensation and comparison conjectures, and
//! areas under variational diagrams.
//!
//! Conditions that involve limits are judged on a finite prefix only. Their
//! verdicts say whether the prefix trend is consistent with the condition,
//! never that it holds.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diagnostics::ls_slope;
use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::{exact_to_f64, Exact, Scalar};
use crate::theta::{Family, ThetaFunction};
use crate::thresholds::{self, Thresholds, THRESHOLDS};

/// `|w(q)|` at or below this is not a plateau edge.
pub const EDGE_TOL: f64 = 1e-12;

/// Breakpoints `I` and slopes `J` of a piecewise-linear diagram:
/// `θ◇(t) = J_n t` on `(I_{n+1}, I_n]`.
#[derive(Clone, Debug, Serialize)]
pub struct IJProfile {
    pub source: String,
    /// Integer edges `x_n = 1/I_n`.
    pub x: Vec<u64>,
    #[serde(rename = "I")]
    pub i: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
}

impl IJProfile {
    pub fn depth(&self) -> usize {
        self.i.len()
    }
}

/// First `depth` plateaus of `g(x) = xθ(x)` for kernels of the form
/// `θ(x) = G(⌊x⌋)/x`. Edges are the integers where `G` actually jumps.
pub fn extract_ij(theta: &ThetaFunction, depth: usize) -> Result<IJProfile> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be positive".into()));
    }
    if !theta.is_divisor_step() {
        return Err(Error::Unsupported(format!(
            "{} is not of the form G(floor(x))/x",
            theta.spec_string()
        )));
    }
    let mut horizon = 2 * depth + 16;
    loop {
        let w = theta
            .step_weights::<f64>(horizon)?
            .expect("divisor-step kernel");
        let mut x = Vec::with_capacity(depth);
        let mut j = Vec::with_capacity(depth);
        let mut g = 0.0;
        for (q, wq) in w {
            g += wq;
            if wq.abs() > EDGE_TOL {
                x.push(q as u64);
                j.push(g);
                if x.len() == depth {
                    break;
                }
            }
        }
        if x.len() == depth {
            let i = x.iter().map(|&q| 1.0 / q as f64).collect();
            return Ok(IJProfile {
                source: theta.spec_string(),
                x,
                i,
                j,
            });
        }
        if horizon > 64 * depth + (1 << 22) {
            return Err(Error::InvalidParameter(format!(
                "only {} plateau edges below {horizon}",
                x.len()
            )));
        }
        horizon *= 4;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    /// Fails at this 1-based profile index.
    ViolatedAt { index: usize },
    ConsistentOnPrefix,
    ContradictedOnPrefix,
    InconclusiveOnPrefix,
}

impl Verdict {
    pub fn passes(&self) -> bool {
        matches!(self, Verdict::Satisfied | Verdict::ConsistentOnPrefix)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub statement: &'static str,
    pub verdict: Verdict,
    pub evidence: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceProxy {
    /// Slope of the partial sums `Σ_{k≤n} (J_k − J_{k−1}) I_k` against `log n`
    /// over the upper half of the prefix.
    pub slope: f64,
    /// `(n, partial sum)` at powers of two and at the last index.
    pub partial_sums: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub source: String,
    pub depth: usize,
    pub conditions: Vec<Condition>,
    pub all_pass: bool,
    /// `I₂` when every condition passes.
    pub predicted_index: Option<f64>,
    pub divergence: DivergenceProxy,
    pub thresholds: Thresholds,
}

impl ConditionReport {
    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn first_failure(range: std::ops::Range<usize>, bad: impl Fn(usize) -> bool) -> Verdict {
    range
        .into_iter()
        .find(|&n| bad(n))
        .map_or(Verdict::Satisfied, |n| Verdict::ViolatedAt { index: n + 1 })
}

fn oscillation(v: &[f64]) -> f64 {
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    hi - lo
}

pub fn check_compensation(p: &IJProfile) -> Result<ConditionReport> {
    let d = p.depth();
    if d < 16 {
        return Err(Error::TooShort { needed: 16, have: d });
    }
    let (i, j) = (&p.i, &p.j);
    let g = thresholds::GUARD;
    let mut conds = Vec::with_capacity(7);

    let v = if i[0] != 1.0 {
        Verdict::ViolatedAt { index: 1 }
    } else if !(i[1] > 0.0 && i[1] <= 0.5) {
        Verdict::ViolatedAt { index: 2 }
    } else {
        Verdict::Satisfied
    };
    conds.push(Condition {
        name: "first_breakpoints",
        statement: "I_1 = 1 and 0 < I_2 <= 1/2",
        verdict: v,
        evidence: format!("I_1 = {}, I_2 = {}", i[0], i[1]),
    });

    let i2 = i[1];
    conds.push(Condition {
        name: "breakpoint_spacing",
        statement: "I_{n+1} < I_n <= I_{n+1} / I_2",
        verdict: first_failure(0..d - 1, |n| !(i[n + 1] < i[n] && i[n] <= i[n + 1] / i2 * (1.0 + g))),
        evidence: format!("checked n = 1..{}", d - 1),
    });

    let ratio = i[d - 1] / i[d / 2 - 1];
    conds.push(Condition {
        name: "breakpoints_vanish",
        statement: "I_n -> 0",
        verdict: if ratio <= thresholds::LIMIT_RATIO {
            Verdict::ConsistentOnPrefix
        } else {
            Verdict::InconclusiveOnPrefix
        },
        evidence: format!("I_{d} / I_{} = {ratio:.6}, I_{d} = {:.3e}", d / 2, i[d - 1]),
    });

    let v = if j[0] < 1.0 - g {
        Verdict::ViolatedAt { index: 1 }
    } else if j[1] * i[1] > j[0] * i[0] + g {
        Verdict::ViolatedAt { index: 2 }
    } else {
        Verdict::Satisfied
    };
    conds.push(Condition {
        name: "first_plateau",
        statement: "J_1 >= 1 and J_2 I_2 <= J_1 I_1",
        verdict: v,
        evidence: format!("J_1 I_1 = {:.12}, J_2 I_2 = {:.12}", j[0] * i[0], j[1] * i[1]),
    });

    conds.push(Condition {
        name: "slopes_nondecreasing",
        statement: "J_{n+1} >= J_n",
        verdict: first_failure(0..d - 1, |n| j[n + 1] < j[n] - g),
        evidence: format!("checked n = 1..{}", d - 1),
    });

    let prod: Vec<f64> = i.iter().zip(j).map(|(a, b)| a * b).collect();
    let early = oscillation(&prod[d / 4..d / 2]);
    let late = oscillation(&prod[d / 2..]);
    conds.push(Condition {
        name: "product_converges",
        statement: "lim I_n J_n exists",
        verdict: if late <= early + g {
            Verdict::ConsistentOnPrefix
        } else {
            Verdict::InconclusiveOnPrefix
        },
        evidence: format!(
            "oscillation of I_n J_n: {early:.3e} on n in [{}, {}), {late:.3e} on [{}, {d}]; last value {:.9}",
            d / 4 + 1,
            d / 2 + 1,
            d / 2 + 1,
            prod[d - 1]
        ),
    });

    let mut sums = vec![0.0; d];
    for k in 1..d {
        sums[k] = sums[k - 1] + (j[k] - j[k - 1]) * i[k];
    }
    let xs: Vec<f64> = (d / 2..d).map(|k| ((k + 1) as f64).ln()).collect();
    let slope = ls_slope(&xs, &sums[d / 2..]);
    let mut samples: Vec<(usize, f64)> = (1..)
        .map(|e| 1usize << e)
        .take_while(|&n| n < d)
        .map(|n| (n, sums[n - 1]))
        .collect();
    samples.push((d, sums[d - 1]));
    conds.push(Condition {
        name: "weighted_increments_diverge",
        statement: "sum_{k=2}^n (J_k - J_{k-1}) I_k -> +infinity",
        verdict: if slope > thresholds::DIVERGENCE_SLOPE {
            Verdict::ConsistentOnPrefix
        } else {
            Verdict::ContradictedOnPrefix
        },
        evidence: format!(
            "slope against log n on [{}, {d}] = {slope:.6}, partial sum at {d} = {:.9}",
            d / 2 + 1,
            sums[d - 1]
        ),
    });

    let all_pass = conds.iter().all(|c| c.verdict.passes());
    Ok(ConditionReport {
        source: p.source.clone(),
        depth: d,
        conditions: conds,
        all_pass,
        predicted_index: all_pass.then_some(i2),
        divergence: DivergenceProxy {
            slope,
            partial_sums: samples,
        },
        thresholds: THRESHOLDS,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub theta1: String,
    pub theta2: String,
    pub grid: usize,
    pub dominated: bool,
    pub first_domination_failure: Option<f64>,
    pub same_variations: bool,
    pub first_pattern_failure: Option<f64>,
    pub pass: bool,
}

fn sign(v: f64, scale: f64) -> i8 {
    if v.abs() <= 1e-12 * scale.max(1.0) {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Checks `θ₁◇ ≤ θ₂◇` and that `θ₁◇`, `θ₂◇` and, where it moves at all,
/// `θ₁◇ − θ₂◇` rise and fall together on an even grid of `(0, 1]`.
pub fn check_comparison_smooth(
    theta1: &ThetaFunction,
    theta2: &ThetaFunction,
    grid: usize,
) -> Result<ComparisonReport> {
    for th in [theta1, theta2] {
        if !th.is_continuous() {
            return Err(Error::Unsupported(format!(
                "{} is not a continuous family",
                th.spec_string()
            )));
        }
    }
    if grid < 2 {
        return Err(Error::InvalidParameter("grid must be at least 2".into()));
    }
    let ts: Vec<f64> = (1..=grid).map(|i| i as f64 / grid as f64).collect();
    let v1: Vec<f64> = ts.iter().map(|&t| theta1.diamond(t)).collect::<Result<_>>()?;
    let v2: Vec<f64> = ts.iter().map(|&t| theta2.diamond(t)).collect::<Result<_>>()?;
    let first_domination_failure = (0..grid)
        .find(|&k| v1[k] > v2[k] + thresholds::GUARD)
        .map(|k| ts[k]);
    let mut first_pattern_failure = None;
    for k in 0..grid - 1 {
        let d1 = v1[k + 1] - v1[k];
        let d2 = v2[k + 1] - v2[k];
        let dd = d1 - d2;
        let s1 = sign(d1, v1[k].abs());
        let s2 = sign(d2, v2[k].abs());
        let sd = sign(dd, v1[k].abs());
        if s1 != s2 || (sd != 0 && sd != s1) {
            first_pattern_failure = Some(ts[k]);
            break;
        }
    }
    let dominated = first_domination_failure.is_none();
    let same = first_pattern_failure.is_none();
    Ok(ComparisonReport {
        theta1: theta1.spec_string(),
        theta2: theta2.spec_string(),
        grid,
        dominated,
        first_domination_failure,
        same_variations: same,
        first_pattern_failure,
        pass: dominated && same,
    })
}

fn trigamma_asymptotic(x: f64) -> f64 {
    let x2 = x * x;
    1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x2 * x) - 1.0 / (30.0 * x2 * x2 * x)
        + 1.0 / (42.0 * x2 * x2 * x2 * x)
}

/// `Σ_{q=1}^{k} ∫_{1/(q+1)}^{1/q} (c0(q) + c1(q) t) dt`, summed from the
/// small end.
fn piece_sum(k: u64, c: impl Fn(u64) -> (f64, f64)) -> f64 {
    (1..=k)
        .rev()
        .map(|q| {
            let (a, b) = (1.0 / q as f64, 1.0 / (q + 1) as f64);
            let (c0, c1) = c(q);
            c0 * (a - b) + 0.5 * c1 * (a * a - b * b)
        })
        .sum()
}

/// `∫₀¹ t⌊1/t⌋ dt` from `K` explicit pieces and the telescoped tail
/// `Σ_{q>K} (2q+1)/(2q(q+1)²) = 1/(2(K+1)) + ψ′(K+2)/2`.
fn floor_area() -> f64 {
    const K: u64 = 10_000;
    piece_sum(K, |q| (0.0, q as f64)) + floor_tail(K)
}

fn floor_tail(k: u64) -> f64 {
    0.5 / (k + 1) as f64 + 0.5 * trigamma_asymptotic((k + 2) as f64)
}

fn exact_poly_area(pieces: &[crate::theta::Piece<Exact>]) -> Exact {
    let mut total = Exact::zero();
    for p in pieces {
        let lo = Exact::new(p.lo.num.into(), p.lo.den.into());
        let hi = Exact::new(p.hi.num.into(), p.hi.den.into());
        let (mut plo, mut phi) = (lo.clone(), hi.clone());
        for (jdx, c) in p.poly.iter().enumerate() {
            total += c * (&phi - &plo) / Exact::from_int(jdx as i64 + 1);
            plo *= &lo;
            phi *= &hi;
        }
    }
    total
}

fn float_poly_area(pieces: &[crate::theta::Piece<f64>]) -> f64 {
    pieces
        .iter()
        .map(|p| {
            let (lo, hi) = (p.lo.value(), p.hi.value());
            p.poly
                .iter()
                .enumerate()
                .map(|(jdx, c)| c * (hi.powi(jdx as i32 + 1) - lo.powi(jdx as i32 + 1)) / (jdx + 1) as f64)
                .sum::<f64>()
        })
        .sum()
}

/// `∫₀¹ θ◇(t) dt`.
pub fn area_vd(theta: &ThetaFunction) -> Result<f64> {
    if let Ok(Some(p)) = theta.polynomial_pieces::<Exact>() {
        return Ok(exact_to_f64(&exact_poly_area(&p)));
    }
    if let Some(p) = theta.polynomial_pieces::<f64>()? {
        return Ok(float_poly_area(&p));
    }
    Ok(match theta.family() {
        Family::Floor => floor_area(),
        // θ◇ = (1 − r) + r q t on the q-th piece
        Family::Frac { r } => (1.0 - r.value()) + r.value() * floor_area(),
        Family::SqrtFloor => {
            const K: u64 = 1_000_000;
            let tau = 1.0 / (K + 1) as f64;
            // near 0, θ◇(t) averages to 1 − √t/2
            piece_sum(K, |q| {
                let s = (q as f64).sqrt();
                (1.0 - 1.0 / s, s)
            }) + tau
                - tau.powf(1.5) / 3.0
        }
        // ∫ over (2^{-i-1}, 2^{-i}] of 2^i t is 3·2^{-i}/8
        Family::Pow2 => (0..64).rev().map(|i| 0.375 * 2f64.powi(-i)).sum(),
        Family::Coeffs(c) => {
            const K: usize = 1 << 20;
            let w = c.step_weights::<f64>(K)?;
            let mut g = vec![0.0; K + 1];
            for (q, v) in w {
                g[q] = v;
            }
            for q in 1..=K {
                g[q] += g[q - 1];
            }
            // θ◇ tends to c = lim G(q)/q at 0, so the tail is the floor tail
            // scaled by c, estimated over the upper half
            let c = g[K / 2 + 1..].iter().sum::<f64>() / (K / 2 + 1..=K).map(|q| q as f64).sum::<f64>();
            piece_sum(K as u64, |q| (0.0, g[q as usize])) + c * floor_tail(K as u64)
        }
        _ => unreachable!("families without pieces are handled above"),
    })
}

/// Midpoint sum of `θ◇` over `panels` equal panels.
pub fn riemann_area(theta: &ThetaFunction, panels: usize) -> Result<f64> {
    let h = 1.0 / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        s += theta.diamond((k as f64 + 0.5) * h)?;
    }
    Ok(s * h)
}

#[derive(Clone, Debug, Serialize)]
pub struct Section7Report {
    pub grid: usize,
    /// `θ₁◇(t) = θ₂◇(t/2 + 1/2)` on the grid, largest deviation.
    pub substitution_error: f64,
    pub max_theta1: String,
    pub max_theta2: String,
    pub min_theta1: String,
    pub min_theta2: String,
    pub max_equal: bool,
    pub min_equal: bool,
    pub area_theta2: f64,
    pub area_theta2_expected: f64,
    pub area_theta1: f64,
    pub area_theta1_quadrature: f64,
    pub area_theta1_expected: f64,
    pub areas_ok: bool,
    pub jumps_checked: usize,
    pub max_jump: f64,
    pub negative_jumps: bool,
    pub pass: bool,
}

/// Supremum and infimum of `θ◇` over linear pieces, as exact rationals.
fn linear_piece_extrema(pieces: &[(Exact, Exact, Exact, Exact)]) -> (Exact, Exact) {
    // (lo, hi, c0, c1): θ◇ = c0 + c1 t on the piece
    let mut max: Option<Exact> = None;
    let mut min: Option<Exact> = None;
    for (lo, hi, c0, c1) in pieces {
        for t in [lo, hi] {
            let v = c0 + c1 * t;
            if max.as_ref().is_none_or(|m| &v > m) {
                max = Some(v.clone());
            }
            if min.as_ref().is_none_or(|m| &v < m) {
                min = Some(v);
            }
        }
    }
    (max.expect("pieces"), min.expect("pieces"))
}

/// Hypotheses of the comparison with the floor kernel: `θ₁` built from
/// `θ₂ = floor` by `θ₁◇(t) = θ₂◇(t/2 + 1/2)`.
pub fn check_section7(grid: usize) -> Result<Section7Report> {
    if grid < 4 {
        return Err(Error::InvalidParameter("grid must be at least 4".into()));
    }
    let theta2 = ThetaFunction::floor();
    let theta1 = ThetaFunction::linear(crate::scalar::Param::ratio(1, 2), crate::scalar::Param::int(1))?;
    let mut substitution_error: f64 = 0.0;
    for k in 1..=grid {
        let t = k as f64 / grid as f64;
        let lhs = theta1.diamond(t)?;
        let rhs = theta2.diamond(t / 2.0 + 0.5)?;
        substitution_error = substitution_error.max((lhs - rhs).abs());
    }

    // θ₂◇ = n t on (1/(n+1), 1/n]; the infimum over depth pieces is reached
    // at the open left ends.
    let pieces2: Vec<(Exact, Exact, Exact, Exact)> = (1..=grid as i64)
        .map(|n| {
            (
                Exact::new(1.into(), (n + 1).into()),
                Exact::new(1.into(), n.into()),
                Exact::zero(),
                Exact::from_int(n),
            )
        })
        .collect();
    let p1 = theta1
        .polynomial_pieces::<Exact>()?
        .expect("linear pieces");
    let pieces1: Vec<(Exact, Exact, Exact, Exact)> = p1
        .iter()
        .map(|p| {
            (
                Exact::new(p.lo.num.into(), p.lo.den.into()),
                Exact::new(p.hi.num.into(), p.hi.den.into()),
                p.poly[0].clone(),
                p.poly.get(1).cloned().unwrap_or_else(Exact::zero),
            )
        })
        .collect();
    let (max1, min1) = linear_piece_extrema(&pieces1);
    let (max2, min2) = linear_piece_extrema(&pieces2);
    let max_equal = max1 == max2 && max1.is_one();
    let min_equal = min1 == min2 && min1 == Exact::new(1.into(), 2.into());

    let area_theta2 = area_vd(&theta2)?;
    let area_theta1 = area_vd(&theta1)?;
    let area_theta1_quadrature = quad::integrate(|t| t / 2.0 + 0.5, 0.0, 1.0, &[], 1e-14);
    let area_theta2_expected = PI * PI / 12.0;
    let areas_ok = (area_theta2 - area_theta2_expected).abs() <= 1e-6
        && (area_theta1 - 0.75).abs() <= 1e-9
        && (area_theta1_quadrature - 0.75).abs() <= 1e-9
        && area_theta1 < area_theta2;

    // jump of θ₂◇ at the edge t = I_n is (J_{n−1} − J_n) I_n
    let prof = extract_ij(&theta2, grid)?;
    let mut max_jump = f64::NEG_INFINITY;
    let mut jumps_checked = 0;
    for n in 1..prof.depth() {
        if prof.i[n] < 0.5 {
            jumps_checked += 1;
            max_jump = max_jump.max((prof.j[n - 1] - prof.j[n]) * prof.i[n]);
        }
    }
    let negative_jumps = jumps_checked > 0 && max_jump <= 0.0;
    Ok(Section7Report {
        grid,
        substitution_error,
        max_theta1: max1.to_string(),
        max_theta2: max2.to_string(),
        min_theta1: min1.to_string(),
        min_theta2: min2.to_string(),
        max_equal,
        min_equal,
        area_theta2,
        area_theta2_expected,
        area_theta1,
        area_theta1_quadrature,
        area_theta1_expected: 0.75,
        areas_ok,
        jumps_checked,
        max_jump,
        negative_jumps,
        pass: substitution_error <= 1e-15 && max_equal && min_equal && areas_ok && negative_jumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{parse_theta, CoeffKernel};

    #[test]
    fn floor_profile_closed_form() {
        let p = extract_ij(&ThetaFunction::floor(), 1000).unwrap();
        for n in 1..=1000usize {
            assert_eq!(p.i[n - 1], 1.0 / n as f64);
            assert_eq!(p.j[n - 1], n as f64);
        }
        let u = extract_ij(&ThetaFunction::coeffs(CoeffKernel::unit()).unwrap(), 1000).unwrap();
        assert_eq!(u.i, p.i);
        assert_eq!(u.j, p.j);
        assert!(extract_ij(&ThetaFunction::v23(), 10).is_err());
    }

    #[test]
    fn profile_matches_diagram() {
        for (spec, depth) in [("coeffs:chi4", 40), ("coeffs:alt", 40), ("coeffs:dh", 40), ("pow2", 16)] {
            let th = parse_theta(spec).unwrap();
            let p = extract_ij(&th, depth).unwrap();
            for n in 0..p.depth() - 1 {
                let t = 0.5 * (p.i[n] + p.i[n + 1]);
                let v = th.diamond(t).unwrap();
                assert!((v - p.j[n] * t).abs() <= 1e-12, "{spec} n={n}");
            }
        }
    }

    #[test]
    fn floor_passes() {
        let r = check_compensation(&extract_ij(&ThetaFunction::floor(), 1000).unwrap()).unwrap();
        assert_eq!(r.conditions.len(), 7);
        assert!(r.all_pass, "{:#?}", r.conditions);
        assert_eq!(r.predicted_index, Some(0.5));
    }

    #[test]
    fn dh_fails_first_plateau() {
        let r = check_compensation(&extract_ij(&parse_theta("coeffs:dh").unwrap(), 256).unwrap()).unwrap();
        assert_eq!(
            r.condition("first_plateau").unwrap().verdict,
            Verdict::ViolatedAt { index: 2 }
        );
    }

    #[test]
    fn alternating_profile() {
        let p = extract_ij(&parse_theta("coeffs:alt").unwrap(), 512).unwrap();
        assert_eq!(p.x[..3], [1, 3, 4]);
        let r = check_compensation(&p).unwrap();
        assert_eq!(r.condition("first_breakpoints").unwrap().verdict, Verdict::Satisfied);
        assert!((p.i[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            r.condition("slopes_nondecreasing").unwrap().verdict,
            Verdict::ViolatedAt { index: 2 }
        );
    }

    #[test]
    fn violations_persist() {
        let th = parse_theta("coeffs:chi4").unwrap();
        let short = check_compensation(&extract_ij(&th, 32).unwrap()).unwrap();
        let long = check_compensation(&extract_ij(&th, 300).unwrap()).unwrap();
        for (a, b) in short.conditions.iter().zip(&long.conditions) {
            if let Verdict::ViolatedAt { .. } = a.verdict {
                assert_eq!(a.verdict, b.verdict);
            }
        }
    }

    #[test]
    fn comparison_examples() {
        let s22 = ThetaFunction::smooth(crate::scalar::Param::float(2.2)).unwrap();
        let s2 = ThetaFunction::smooth(crate::scalar::Param::int(2)).unwrap();
        assert!(check_comparison_smooth(&s22, &s2, 1000).unwrap().pass);
        assert!(check_comparison_smooth(&s2, &s2, 1000).unwrap().pass);
        let lin = parse_theta("linear:r=1,s=1").unwrap();
        let r = check_comparison_smooth(&s2, &lin, 1000).unwrap();
        assert!(!r.same_variations && r.first_pattern_failure.is_some());
        assert!(check_comparison_smooth(&ThetaFunction::floor(), &s2, 10).is_err());
    }

    #[test]
    fn areas() {
        assert_eq!(area_vd(&parse_theta("linear:r=1/2,s=1").unwrap()).unwrap(), 0.75);
        assert!((area_vd(&ThetaFunction::floor()).unwrap() - PI * PI / 12.0).abs() < 1e-12);
        let sm = parse_theta("smooth:lambda=3/2").unwrap();
        assert!((area_vd(&sm).unwrap() - 0.75).abs() < 1e-15);
        assert!((area_vd(&ThetaFunction::pow2()).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn section7() {
        let r = check_section7(1000).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.max_theta2, "1");
        assert_eq!(r.min_theta1, "1/2");
    }
}
