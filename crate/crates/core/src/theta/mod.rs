//! Kernels θ on `[1, ∞)` and their variational diagrams `θ◇(t) = θ(1/t)`.
//!
//! Every kernel evaluates in floating point at real arguments and, through
//! [`Evaluator`], at rational arguments `n/k` in either scalar type. Two
//! structural views feed the fast solvers:
//!
//! * divisor-step kernels (`θ(x) = G(⌊x⌋)/x`) expose the increments
//!   `w(q) = G(q) − G(q−1)`;
//! * kernels whose diagram is polynomial in `t` on finitely many intervals
//!   expose those [`Piece`]s.

mod coeffs;
mod spec;

use std::borrow::Cow;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::scalar::{Param, Scalar};

pub use coeffs::CoeffKernel;
pub use spec::parse_theta;

#[derive(Clone, Debug)]
pub enum Family {
    /// `⌊x⌋ / x`
    Floor,
    /// `(x − r{x}) / x`, `0 < r ≤ 1`
    Frac { r: Param },
    /// `1 − {x} / (x √⌊x⌋)`
    SqrtFloor,
    /// `θ◇(t) = 1 − t{1/t}` for `t ≥ 1/3`, `t + 1/2` below
    Pw32,
    /// `θ◇(t) = 1 − λ t (1 − t)`
    Smooth { lambda: Param },
    /// `θ◇(t) = (s − r) t + r`
    Linear { r: Param, s: Param },
    /// `θ◇(t) = 1 − t` on `(0, 1/2]`, `t` on `[1/2, 1]`
    V23,
    /// `r` at `x = 2`, `1` elsewhere, `0 < r < 1`
    Dirac { r: Param },
    /// `2^{⌊log₂ x⌋} / x`
    Pow2,
    /// `⌊x⌋ / x` below `m`, `1/x + 1 − 1/m` from `m` on
    M { m: u64 },
    /// `x⁻¹ Σ z_k ⌊x/k⌋`
    Coeffs(CoeffKernel),
}

/// An immutable, bounded kernel with nonzero pivot `θ(1)`.
#[derive(Clone, Debug)]
pub struct ThetaFunction {
    family: Family,
    pivot: f64,
}

/// Endpoint `num/den` of a `t`-interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TBound {
    pub num: u64,
    pub den: u64,
    pub closed: bool,
}

impl TBound {
    fn open(num: u64, den: u64) -> Self {
        TBound {
            num,
            den,
            closed: false,
        }
    }

    fn closed(num: u64, den: u64) -> Self {
        TBound {
            num,
            den,
            closed: true,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// `θ◇(t) = Σ_j poly[j] t^j` for `t` between `lo` and `hi`.
#[derive(Clone, Debug)]
pub struct Piece<T> {
    pub lo: TBound,
    pub hi: TBound,
    pub poly: Vec<T>,
}

impl<T> Piece<T> {
    /// Indices `k` with `k/n` inside the piece, as an inclusive range
    /// (empty when `first > last`).
    pub fn k_range(&self, n: u64) -> (u64, u64) {
        let n = n as u128;
        let lo = (self.lo.num as u128 * n, self.lo.den as u128);
        let hi = (self.hi.num as u128 * n, self.hi.den as u128);
        let first = if self.lo.closed {
            lo.0.div_ceil(lo.1)
        } else {
            lo.0 / lo.1 + 1
        };
        let last = if self.hi.closed {
            hi.0 / hi.1
        } else {
            hi.0.div_ceil(hi.1) - 1
        };
        (first.max(1) as u64, last.min(n) as u64)
    }
}

impl ThetaFunction {
    /// Validates the parameters and builds the kernel.
    pub fn new(family: Family) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match &family {
            Family::Frac { r } if !(r.value() > 0.0 && r.value() <= 1.0) => {
                return bad(format!("frac needs 0 < r <= 1, got {r}"));
            }
            Family::Smooth { lambda } if !lambda.value().is_finite() => {
                return bad(format!("smooth needs a finite lambda, got {lambda}"));
            }
            Family::Linear { r, s } => {
                if !(r.value().is_finite() && s.value().is_finite()) {
                    return bad("linear needs finite r, s".into());
                }
                if s.value() == 0.0 {
                    return Err(Error::ZeroPivot);
                }
            }
            Family::Dirac { r } if !(r.value() > 0.0 && r.value() < 1.0) => {
                return bad(format!("dirac needs 0 < r < 1, got {r}"));
            }
            Family::M { m } if *m < 2 => {
                return bad(format!("m needs m >= 2, got {m}"));
            }
            _ => {}
        }
        let mut theta = ThetaFunction { family, pivot: 0.0 };
        theta.pivot = theta.eval_ratio_f64(1, 1);
        if theta.pivot == 0.0 {
            return Err(Error::ZeroPivot);
        }
        Ok(theta)
    }

    pub fn floor() -> Self {
        ThetaFunction::new(Family::Floor).expect("valid")
    }

    pub fn pow2() -> Self {
        ThetaFunction::new(Family::Pow2).expect("valid")
    }

    pub fn v23() -> Self {
        ThetaFunction::new(Family::V23).expect("valid")
    }

    pub fn sqrt_floor() -> Self {
        ThetaFunction::new(Family::SqrtFloor).expect("valid")
    }

    pub fn pw32() -> Self {
        ThetaFunction::new(Family::Pw32).expect("valid")
    }

    pub fn frac(r: impl Into<Param>) -> Result<Self> {
        ThetaFunction::new(Family::Frac { r: r.into() })
    }

    pub fn smooth(lambda: impl Into<Param>) -> Result<Self> {
        ThetaFunction::new(Family::Smooth {
            lambda: lambda.into(),
        })
    }

    pub fn linear(r: impl Into<Param>, s: impl Into<Param>) -> Result<Self> {
        ThetaFunction::new(Family::Linear {
            r: r.into(),
            s: s.into(),
        })
    }

    pub fn dirac(r: impl Into<Param>) -> Result<Self> {
        ThetaFunction::new(Family::Dirac { r: r.into() })
    }

    pub fn m(m: u64) -> Result<Self> {
        ThetaFunction::new(Family::M { m })
    }

    pub fn coeffs(kernel: CoeffKernel) -> Result<Self> {
        ThetaFunction::new(Family::Coeffs(kernel))
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `θ(1)`.
    pub fn pivot(&self) -> f64 {
        self.pivot
    }

    /// Canonical text form, accepted back by [`parse_theta`].
    pub fn spec_string(&self) -> String {
        match &self.family {
            Family::Floor => "floor".into(),
            Family::Frac { r } => format!("frac:r={r}"),
            Family::SqrtFloor => "sqrtfloor".into(),
            Family::Pw32 => "pw32".into(),
            Family::Smooth { lambda } => format!("smooth:lambda={lambda}"),
            Family::Linear { r, s } => format!("linear:r={r},s={s}"),
            Family::V23 => "v23".into(),
            Family::Dirac { r } => format!("dirac:r={r}"),
            Family::Pow2 => "pow2".into(),
            Family::M { m } => format!("m:{m}"),
            Family::Coeffs(c) => format!("coeffs:{}", c.name()),
        }
    }

    /// A bound on `|θ(x)|` over `[1, ∞)`.
    pub fn bound(&self) -> f64 {
        match &self.family {
            Family::Smooth { lambda } => (1.0 - lambda.value() / 4.0).abs().max(1.0),
            Family::Linear { r, s } => r.value().abs().max(s.value().abs()),
            Family::Dirac { r } => r.value().abs().max(1.0),
            Family::Coeffs(c) => c.bound(),
            _ => 1.0,
        }
    }

    /// Whether `θ◇` is continuous on `(0, 1]`.
    pub fn is_continuous(&self) -> bool {
        matches!(
            self.family,
            Family::Smooth { .. } | Family::Linear { .. } | Family::V23
        )
    }

    /// `θ(x)` for real `x ≥ 1`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0) || !x.is_finite() {
            return Err(Error::Domain { x });
        }
        let fl = x.floor();
        let fr = x - fl;
        let t = 1.0 / x;
        Ok(match &self.family {
            Family::Floor => fl / x,
            Family::Frac { r } => (x - r.value() * fr) / x,
            Family::SqrtFloor => 1.0 - fr / (x * fl.sqrt()),
            Family::Pw32 => {
                if x <= 3.0 {
                    fl / x
                } else {
                    t + 0.5
                }
            }
            Family::Smooth { lambda } => 1.0 - lambda.value() * t * (1.0 - t),
            Family::Linear { r, s } => (s.value() - r.value()) * t + r.value(),
            Family::V23 => {
                if x <= 2.0 {
                    t
                } else {
                    1.0 - t
                }
            }
            Family::Dirac { r } => {
                if (x - 2.0).abs() <= DIRAC_EPS {
                    r.value()
                } else {
                    1.0
                }
            }
            Family::Pow2 => pow2_floor_f64(x) / x,
            Family::M { m } => {
                let m = *m as f64;
                if x < m {
                    fl / x
                } else {
                    t + 1.0 - 1.0 / m
                }
            }
            Family::Coeffs(c) => c.g_f64(fl as u64) / x,
        })
    }

    /// `θ◇(t) = θ(1/t)` for `0 < t ≤ 1`.
    pub fn diamond(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain { x: 1.0 / t });
        }
        self.eval(1.0 / t)
    }

    /// `θ(n/k)` in floating point, computed from integers.
    pub fn eval_ratio_f64(&self, n: u64, k: u64) -> f64 {
        self.evaluator::<f64>()
            .and_then(|e| e.at(n, k))
            .expect("float evaluation never fails")
    }

    /// Kernel specialised to one scalar type; exact mode fails here if a
    /// parameter has no exact value.
    pub fn evaluator<T: Scalar>(&self) -> Result<Evaluator<'_, T>> {
        let params: Vec<T> = match &self.family {
            Family::Frac { r } => vec![T::from_param(r)?],
            Family::Smooth { lambda } => vec![T::from_param(lambda)?],
            Family::Linear { r, s } => vec![T::from_param(r)?, T::from_param(s)?],
            Family::Dirac { r } => vec![T::from_param(r)?],
            _ => Vec::new(),
        };
        let prefix = match &self.family {
            Family::Coeffs(c) => Some(c.prefix::<T>()?),
            _ => None,
        };
        Ok(Evaluator {
            theta: self,
            params,
            prefix,
            g_table: None,
        })
    }

    /// Like [`evaluator`](Self::evaluator), with `G(0..=n)` tabulated for
    /// coefficient kernels so that every `θ(m/k)` with `m ≤ n` is `O(1)`.
    pub fn evaluator_upto<T: Scalar>(&self, n: usize) -> Result<Evaluator<'_, T>> {
        let mut ev = self.evaluator::<T>()?;
        if let Family::Coeffs(c) = &self.family {
            let mut w = vec![T::zero(); n + 1];
            for (q, v) in c.step_weights::<T>(n)? {
                w[q] = v;
            }
            let mut acc = T::zero();
            for v in w.iter_mut().skip(1) {
                acc += &*v;
                *v = acc.clone();
            }
            ev.g_table = Some(w);
        }
        Ok(ev)
    }

    /// Increments `w(1..=n)` of `G` when `θ(x) = G(⌊x⌋)/x`, as sparse
    /// `(q, w(q))` pairs with nonzero weight. `None` for other families.
    pub fn step_weights<T: Scalar>(&self, n: usize) -> Result<Option<Vec<(usize, T)>>> {
        Ok(match &self.family {
            Family::Floor => Some((1..=n).map(|q| (q, T::one())).collect()),
            Family::Pow2 => {
                let mut w = vec![(1usize, T::one())];
                let mut q = 2usize;
                while q <= n {
                    w.push((q, T::from_int((q / 2) as i64)));
                    q *= 2;
                }
                Some(w)
            }
            Family::Coeffs(c) => Some(c.step_weights::<T>(n)?),
            _ => None,
        })
    }

    /// `G(q)` for divisor-step kernels.
    pub fn step_value_f64(&self, q: u64) -> Option<f64> {
        match &self.family {
            Family::Floor => Some(q as f64),
            Family::Pow2 => Some(if q == 0 { 0.0 } else { pow2_floor_u64(q) as f64 }),
            Family::Coeffs(c) => Some(c.g_f64(q)),
            _ => None,
        }
    }

    pub fn is_divisor_step(&self) -> bool {
        matches!(
            self.family,
            Family::Floor | Family::Pow2 | Family::Coeffs(_)
        )
    }

    /// Finite polynomial pieces of `θ◇` covering `(0, 1]`, ordered by `t`.
    pub fn polynomial_pieces<T: Scalar>(&self) -> Result<Option<Vec<Piece<T>>>> {
        let one = T::one;
        let zero = T::zero;
        let int = |v: i64| T::from_int(v);
        let whole = |poly: Vec<T>| {
            vec![Piece {
                lo: TBound::open(0, 1),
                hi: TBound::closed(1, 1),
                poly,
            }]
        };
        Ok(Some(match &self.family {
            Family::Linear { r, s } => {
                let (r, s) = (T::from_param(r)?, T::from_param(s)?);
                let mut slope = s;
                slope -= &r;
                whole(vec![r, slope])
            }
            Family::Smooth { lambda } => {
                let l = T::from_param(lambda)?;
                whole(vec![one(), -l.clone(), l])
            }
            Family::V23 => vec![
                Piece {
                    lo: TBound::open(0, 1),
                    hi: TBound::closed(1, 2),
                    poly: vec![one(), -one()],
                },
                Piece {
                    lo: TBound::open(1, 2),
                    hi: TBound::closed(1, 1),
                    poly: vec![zero(), one()],
                },
            ],
            Family::Dirac { r } => vec![
                Piece {
                    lo: TBound::open(0, 1),
                    hi: TBound::open(1, 2),
                    poly: vec![one()],
                },
                Piece {
                    lo: TBound::closed(1, 2),
                    hi: TBound::closed(1, 2),
                    poly: vec![T::from_param(r)?],
                },
                Piece {
                    lo: TBound::open(1, 2),
                    hi: TBound::closed(1, 1),
                    poly: vec![one()],
                },
            ],
            Family::Pw32 => vec![
                Piece {
                    lo: TBound::open(0, 1),
                    hi: TBound::open(1, 3),
                    poly: vec![T::from_ratio(1, 2), one()],
                },
                Piece {
                    lo: TBound::closed(1, 3),
                    hi: TBound::closed(1, 3),
                    poly: vec![one()],
                },
                Piece {
                    lo: TBound::open(1, 3),
                    hi: TBound::closed(1, 2),
                    poly: vec![zero(), int(2)],
                },
                Piece {
                    lo: TBound::open(1, 2),
                    hi: TBound::closed(1, 1),
                    poly: vec![zero(), one()],
                },
            ],
            Family::M { m } => {
                let m = *m;
                let mut pieces = vec![Piece {
                    lo: TBound::open(0, 1),
                    hi: TBound::closed(1, m),
                    poly: vec![T::from_ratio(m as i128 - 1, m as i128), one()],
                }];
                for q in (1..m).rev() {
                    pieces.push(Piece {
                        lo: TBound::open(1, q + 1),
                        hi: TBound::closed(1, q),
                        poly: vec![zero(), int(q as i64)],
                    });
                }
                pieces
            }
            _ => return Ok(None),
        }))
    }

    /// Discontinuities and slope changes of `θ◇` in `(t_min, 1)`, ascending.
    pub fn breakpoints(&self, t_min: f64) -> Result<Vec<f64>> {
        if !(t_min > 0.0 && t_min < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "t_min must lie in (0, 1), got {t_min}"
            )));
        }
        // x-values (t = 1/x) with x < 1/t_min
        let x_max = 1.0 / t_min;
        let below = |x: f64| x > 1.0 && x < x_max;
        let reciprocal_integers = |upto: Option<u64>| -> Vec<f64> {
            let mut xs = Vec::new();
            let mut q = 2u64;
            while (q as f64) < x_max && upto.is_none_or(|u| q <= u) {
                xs.push(q as f64);
                q += 1;
            }
            xs
        };
        let xs: Vec<f64> = match &self.family {
            Family::Floor | Family::Frac { .. } | Family::SqrtFloor => reciprocal_integers(None),
            Family::M { m } => reciprocal_integers(Some(*m)),
            Family::Pw32 => vec![2.0, 3.0],
            Family::V23 | Family::Dirac { .. } => vec![2.0],
            Family::Smooth { .. } | Family::Linear { .. } => Vec::new(),
            Family::Pow2 => {
                let mut xs = Vec::new();
                let mut x = 2.0;
                while x < x_max {
                    xs.push(x);
                    x *= 2.0;
                }
                xs
            }
            Family::Coeffs(c) => {
                let limit = x_max.ceil() as u64;
                merge_multiples(c, limit).into_iter().map(|x| x as f64).collect()
            }
        };
        let mut ts: Vec<f64> = xs.into_iter().filter(|&x| below(x)).map(|x| 1.0 / x).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        Ok(ts)
    }

    /// Samples `θ◇` on an even grid over `[t_min, 1]` plus both sides of
    /// every breakpoint, sorted by `t`.
    pub fn vd_sample(&self, points: usize, t_min: f64) -> Result<Vec<(f64, f64)>> {
        if points < 2 {
            return Err(Error::InvalidParameter("need at least 2 points".into()));
        }
        let bps = self.breakpoints(t_min)?;
        let mut ts: Vec<f64> = (0..points)
            .map(|i| t_min + (1.0 - t_min) * i as f64 / (points - 1) as f64)
            .collect();
        for (i, &b) in bps.iter().enumerate() {
            let gap_lo = if i == 0 { b - t_min } else { b - bps[i - 1] };
            let gap_hi = bps.get(i + 1).map_or(1.0 - b, |&n| n - b);
            let d = (gap_lo.min(gap_hi) * 1e-3).min(1e-9);
            ts.push(b - d);
            ts.push(b);
            ts.push(b + d);
        }
        ts.retain(|&t| t >= t_min && t <= 1.0);
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts.into_iter()
            .map(|t| Ok((t, self.diamond(t)?)))
            .collect()
    }
}

/// Equality window for the point mass of `dirac(r)` at real arguments.
pub const DIRAC_EPS: f64 = 1e-12;

/// Candidate plateau edges `x < limit` of `Σ z_k ⌊x/k⌋`: every multiple
/// `j·k ≥ 2` of an index with `z_k ≠ 0`, merged in ascending order.
fn merge_multiples(c: &CoeffKernel, limit: u64) -> Vec<u64> {
    let mut heap: BinaryHeap<Reverse<(u64, u64)>> = BinaryHeap::new();
    for k in 1..limit {
        if c.z_is_nonzero(k) {
            let first = if k == 1 { 2 } else { k };
            if first < limit {
                heap.push(Reverse((first, k)));
            }
        }
    }
    let mut out = Vec::new();
    while let Some(Reverse((x, k))) = heap.pop() {
        if out.last() != Some(&x) {
            out.push(x);
        }
        if x + k < limit {
            heap.push(Reverse((x + k, k)));
        }
    }
    out
}

fn pow2_floor_u64(q: u64) -> u64 {
    1u64 << (63 - q.leading_zeros())
}

fn pow2_floor_f64(x: f64) -> f64 {
    let mut p = 2f64.powi(x.log2().floor() as i32);
    while p > x {
        p /= 2.0;
    }
    while 2.0 * p <= x {
        p *= 2.0;
    }
    p
}

/// A kernel bound to a scalar type, for evaluation at `n/k`.
pub struct Evaluator<'a, T: Scalar> {
    theta: &'a ThetaFunction,
    params: Vec<T>,
    prefix: Option<Cow<'a, [T]>>,
    g_table: Option<Vec<T>>,
}

impl<T: Scalar> Evaluator<'_, T> {
    pub fn theta(&self) -> &ThetaFunction {
        self.theta
    }

    /// `θ(n/k)` for `n ≥ k ≥ 1`.
    pub fn at(&self, n: u64, k: u64) -> Result<T> {
        debug_assert!(k >= 1 && n >= k, "θ(n/k) needs n >= k >= 1");
        let q = n / k;
        let rem = n % k;
        let (n_, k_) = (n as i128, k as i128);
        let t = || T::from_ratio(k_, n_);
        Ok(match &self.theta.family {
            Family::Floor => T::from_ratio(q as i128 * k_, n_),
            Family::Frac { .. } => {
                let mut v = T::one();
                v -= &self.params[0].mul_ref(&T::from_ratio(rem as i128, n_));
                v
            }
            Family::SqrtFloor => {
                if rem == 0 {
                    T::one()
                } else {
                    let s = q.sqrt();
                    if s * s == q {
                        T::one() - T::from_ratio(rem as i128, n_ * s as i128)
                    } else if T::EXACT {
                        return Err(Error::NotExact(format!(
                            "sqrtfloor at {n}/{k} involves sqrt({q})"
                        )));
                    } else {
                        T::one()
                            - T::from_ratio(rem as i128, n_) / T::from_f64((q as f64).sqrt())
                    }
                }
            }
            Family::Pw32 => {
                if n <= 3 * k {
                    T::from_ratio(q as i128 * k_, n_)
                } else {
                    t() + T::from_ratio(1, 2)
                }
            }
            Family::Smooth { .. } => {
                let t = t();
                let mut v = T::one();
                v -= &self.params[0].mul_ref(&t).mul_ref(&(T::one() - t.clone()));
                v
            }
            Family::Linear { .. } => {
                let mut slope = self.params[1].clone();
                slope -= &self.params[0];
                let mut v = slope.mul_ref(&t());
                v += &self.params[0];
                v
            }
            Family::V23 => {
                if n <= 2 * k {
                    t()
                } else {
                    T::one() - t()
                }
            }
            Family::Dirac { .. } => {
                if n == 2 * k {
                    self.params[0].clone()
                } else {
                    T::one()
                }
            }
            Family::Pow2 => T::from_ratio(pow2_floor_u64(q) as i128 * k_, n_),
            Family::M { m } => {
                if (n as u128) < (*m as u128) * (k as u128) {
                    T::from_ratio(q as i128 * k_, n_)
                } else {
                    t() + T::from_ratio(*m as i128 - 1, *m as i128)
                }
            }
            Family::Coeffs(c) => {
                let mut g = match &self.g_table {
                    Some(tab) if (q as usize) < tab.len() => tab[q as usize].clone(),
                    _ => c.g_with(q, self.prefix.as_ref().expect("coefficient prefix")),
                };
                g *= &t();
                g
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use crate::scalar::Exact;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn make_theta_examples() {
        let floor = ThetaFunction::floor();
        assert_eq!(floor.diamond(0.5).unwrap(), 1.0);
        // just right of 1/2 the diagram sits at its infimum 1/2
        assert!(close(floor.diamond(0.5 + 1e-12).unwrap(), 0.5, 1e-11));
        let m2 = ThetaFunction::m(2).unwrap();
        assert!(close(m2.diamond(0.4).unwrap(), 0.9, 1e-15));
        let frac = ThetaFunction::frac(Param::parse("0.8").unwrap()).unwrap();
        assert!(close(frac.eval(2.5).unwrap(), 0.84, 1e-15));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ThetaFunction::floor().eval(1.0).unwrap(), 1.0);
        let v = ThetaFunction::sqrt_floor().eval(2.5).unwrap();
        assert!(close(v, 1.0 - 0.5 / (2.5 * 2f64.sqrt()), 1e-15));
        assert!(close(v, 0.858_578, 1e-6));
        assert_eq!(ThetaFunction::v23().eval(4.0).unwrap(), 0.75);
        assert!(ThetaFunction::floor().eval(0.5).is_err());
    }

    #[test]
    fn dirac_is_pointwise() {
        let d = ThetaFunction::dirac(Param::parse("0.75").unwrap()).unwrap();
        assert_eq!(d.eval(2.0).unwrap(), 0.75);
        assert_eq!(d.eval(2.0 + 1e-9).unwrap(), 1.0);
        let e = d.evaluator::<Exact>().unwrap();
        assert_eq!(e.at(4, 2).unwrap(), Exact::new(3.into(), 4.into()));
        assert_eq!(e.at(5, 2).unwrap(), Exact::from_int(1));
    }

    #[test]
    fn invalid_parameters() {
        assert!(ThetaFunction::frac(0.0).is_err());
        assert!(ThetaFunction::frac(1.5).is_err());
        assert!(ThetaFunction::m(1).is_err());
        assert!(matches!(ThetaFunction::linear(1.0, 0.0), Err(Error::ZeroPivot)));
        assert!(ThetaFunction::dirac(1.0).is_err());
        let z = arith::Sequence::from_ints([0i64, 1], "z").unwrap();
        assert!(matches!(CoeffKernel::table(z), Err(Error::ZeroPivot)));
        // nonzero period sum: g grows like x log x
        let ones = arith::Sequence::from_ints([1i64], "ones").unwrap();
        assert!(CoeffKernel::periodic(ones).is_err());
    }

    #[test]
    fn exact_and_float_evaluation_agree() {
        let kernels = [
            ThetaFunction::floor(),
            ThetaFunction::pow2(),
            ThetaFunction::v23(),
            ThetaFunction::pw32(),
            ThetaFunction::m(5).unwrap(),
            ThetaFunction::frac(Param::parse("0.3").unwrap()).unwrap(),
            ThetaFunction::smooth(Param::parse("2").unwrap()).unwrap(),
            ThetaFunction::linear(Param::parse("0.5").unwrap(), Param::parse("1").unwrap()).unwrap(),
            ThetaFunction::dirac(Param::parse("0.75").unwrap()).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::chi4()).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::alternating()).unwrap(),
        ];
        for th in &kernels {
            let ex = th.evaluator::<Exact>().unwrap();
            for n in 1..=60u64 {
                for k in 1..=n {
                    let a = ex.at(n, k).unwrap().to_f64();
                    let b = th.eval_ratio_f64(n, k);
                    assert!(close(a, b, 1e-14), "{} at {n}/{k}", th.spec_string());
                    if n % k != 0 || th.is_continuous() || matches!(th.family, Family::Dirac { .. }) {
                        let c = th.eval(n as f64 / k as f64).unwrap();
                        assert!(close(a, c, 1e-12), "{} at {n}/{k}: {a} vs {c}", th.spec_string());
                    }
                }
            }
        }
    }

    #[test]
    fn sqrtfloor_exactness_violation() {
        let ex = ThetaFunction::sqrt_floor();
        let e = ex.evaluator::<Exact>().unwrap();
        assert!(e.at(5, 2).is_err()); // ⌊2.5⌋ = 2
        assert!(e.at(9, 2).is_ok()); // ⌊4.5⌋ = 4
        assert!(e.at(6, 2).is_ok()); // integer argument
    }

    #[test]
    fn float_params_refuse_exact_mode() {
        let th = ThetaFunction::frac(0.8).unwrap();
        assert!(th.evaluator::<Exact>().is_err());
    }

    #[test]
    fn floor_properties_on_grid() {
        let th = ThetaFunction::floor();
        for n in 1..200 {
            assert_eq!(th.eval(n as f64).unwrap(), 1.0);
        }
        for i in 0..100_000 {
            let x = 1.0 + i as f64 * 0.0137;
            assert!(th.eval(x).unwrap() >= 0.5);
        }
    }

    #[test]
    fn m_family_matches_floor_then_tail() {
        for m in 2..8u64 {
            let th = ThetaFunction::m(m).unwrap();
            for i in 0..20_000 {
                let x = 1.0 + i as f64 * 0.00123;
                let v = th.eval(x).unwrap();
                let want = if x < m as f64 {
                    x.floor() / x
                } else {
                    1.0 / x + 1.0 - 1.0 / m as f64
                };
                assert!(close(v, want, 1e-15));
            }
        }
    }

    #[test]
    fn unit_coefficients_reproduce_floor() {
        let th = ThetaFunction::coeffs(CoeffKernel::unit()).unwrap();
        let floor = ThetaFunction::floor();
        for i in 0..50_000 {
            let x = 1.0 + i as f64 * 0.0071;
            assert_eq!(th.eval(x).unwrap(), floor.eval(x).unwrap());
        }
    }

    #[test]
    fn family_bounds_hold_on_samples() {
        let kernels = [
            ThetaFunction::floor(),
            ThetaFunction::pow2(),
            ThetaFunction::v23(),
            ThetaFunction::pw32(),
            ThetaFunction::sqrt_floor(),
            ThetaFunction::m(4).unwrap(),
            ThetaFunction::frac(0.8).unwrap(),
            ThetaFunction::smooth(2.0).unwrap(),
            ThetaFunction::smooth(5.0).unwrap(),
            ThetaFunction::linear(0.5, -2.0).unwrap(),
            ThetaFunction::dirac(0.75).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::chi4()).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::alternating()).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::dh()).unwrap(),
            ThetaFunction::coeffs(CoeffKernel::tau(2000).unwrap()).unwrap(),
        ];
        for th in &kernels {
            let bound = th.bound();
            let mut x = 1.0;
            while x <= 1e6 {
                let v = th.eval(x).unwrap();
                assert!(v.abs() <= bound + 1e-12, "{} at {x}: {v} > {bound}", th.spec_string());
                x = x * 1.000_7 + 0.013;
            }
        }
    }

    #[test]
    fn breakpoint_examples() {
        let f = ThetaFunction::floor().breakpoints(0.2).unwrap();
        assert_eq!(f, vec![0.25, 1.0 / 3.0, 0.5]);
        let p = ThetaFunction::pow2().breakpoints(0.1).unwrap();
        assert_eq!(p, vec![0.125, 0.25, 0.5]);
        let c = ThetaFunction::coeffs(CoeffKernel::chi4())
            .unwrap()
            .breakpoints(0.3)
            .unwrap();
        assert_eq!(c, vec![1.0 / 3.0, 0.5]);
        assert!(ThetaFunction::smooth(2.0).unwrap().breakpoints(0.1).unwrap().is_empty());
        assert!(ThetaFunction::floor().breakpoints(0.0).is_err());
    }

    #[test]
    fn sparse_table_breakpoints_merge_streams() {
        // z = e1 + e3 : edges at all integers (k = 1) merged with multiples of 3
        let z = arith::Sequence::from_ints([1i64, 0, 5], "z").unwrap();
        let th = ThetaFunction::coeffs(CoeffKernel::table(z).unwrap()).unwrap();
        let bps = th.breakpoints(1.0 / 12.5).unwrap();
        let xs: Vec<u64> = bps.iter().rev().map(|t| (1.0 / t).round() as u64).collect();
        assert_eq!(xs, (2..=12).collect::<Vec<_>>());
    }

    #[test]
    fn vd_sample_shows_jumps() {
        let s = ThetaFunction::floor().vd_sample(11, 0.2).unwrap();
        assert!(s.windows(2).all(|w| w[0].0 < w[1].0));
        let left = s.iter().filter(|(t, _)| *t < 0.5).last().unwrap();
        let right = s.iter().find(|(t, _)| *t > 0.5).unwrap();
        assert!(close(right.1, 0.5, 1e-8));
        assert!(close(left.1, 1.0, 1e-8));
        let sm = ThetaFunction::smooth(2.0).unwrap().vd_sample(100, 0.01).unwrap();
        let min = sm.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        assert!(close(min, 0.5, 1e-12));
        let lin = ThetaFunction::linear(1.0, 1.0).unwrap().vd_sample(50, 0.1).unwrap();
        assert!(lin.iter().all(|p| p.1 == 1.0));
        assert!(ThetaFunction::floor().vd_sample(1, 0.2).is_err());
    }

    #[test]
    fn coefficient_diagram_is_linear_through_origin_between_breakpoints() {
        let th = ThetaFunction::coeffs(CoeffKernel::chi4()).unwrap();
        let t_min = 0.02;
        let mut edges = th.breakpoints(t_min).unwrap();
        edges.insert(0, t_min);
        edges.push(1.0);
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ratios: Vec<f64> = (1..10)
                .map(|i| {
                    let t = a + (b - a) * i as f64 / 10.0;
                    th.diamond(t).unwrap() / t
                })
                .collect();
            for r in &ratios {
                assert!(close(*r, ratios[0], 1e-9));
            }
        }
    }

    #[test]
    fn pieces_agree_with_evaluator() {
        let kernels = [
            ThetaFunction::v23(),
            ThetaFunction::pw32(),
            ThetaFunction::m(6).unwrap(),
            ThetaFunction::smooth(Param::parse("2.2").unwrap()).unwrap(),
            ThetaFunction::linear(Param::parse("0.5").unwrap(), Param::int(1)).unwrap(),
            ThetaFunction::dirac(Param::parse("0.75").unwrap()).unwrap(),
        ];
        for th in &kernels {
            let pieces = th.polynomial_pieces::<Exact>().unwrap().unwrap();
            let ev = th.evaluator::<Exact>().unwrap();
            for n in 1..=90u64 {
                let mut covered = vec![0; n as usize + 1];
                for p in &pieces {
                    let (a, b) = p.k_range(n);
                    for k in a..=b {
                        covered[k as usize] += 1;
                        let t = Exact::from_ratio(k as i128, n as i128);
                        let mut v = Exact::from_int(0);
                        let mut pow = Exact::from_int(1);
                        for c in &p.poly {
                            v += &(c * &pow);
                            pow *= &t;
                        }
                        assert_eq!(v, ev.at(n, k).unwrap(), "{} {n}/{k}", th.spec_string());
                    }
                }
                assert!(covered[1..].iter().all(|&c| c == 1), "{} n={n}", th.spec_string());
            }
        }
    }

    #[test]
    fn pw32_takes_floor_branch_at_one_third() {
        let th = ThetaFunction::pw32();
        assert_eq!(th.eval(3.0).unwrap(), 1.0);
        assert!(close(th.diamond(1.0 / 3.0 - 1e-12).unwrap(), 5.0 / 6.0, 1e-9));
        assert!(close(th.diamond(1.0 / 3.0 + 1e-12).unwrap(), 2.0 / 3.0, 1e-9));
    }
}
