//! Dirichlet convolution and inversion of coefficient sequences.

use num_traits::Zero;

use crate::arith::{LinearSieve, Sequence};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

fn check_len(s: &Sequence, n: usize) -> Result<()> {
    if s.len() < n {
        return Err(Error::TooShort {
            needed: n,
            have: s.len(),
        });
    }
    Ok(())
}

fn convolve_with<T: Scalar>(x: &[T], z: &[T], n: usize) -> Vec<T> {
    let mut y = vec![T::zero(); n];
    for d in 1..=n {
        let xd = &x[d - 1];
        if xd.is_zero() {
            continue;
        }
        for (j, zj) in z.iter().enumerate().take(n / d) {
            if !zj.is_zero() {
                y[d * (j + 1) - 1] += &xd.mul_ref(zj);
            }
        }
    }
    y
}

/// `y_n = Σ_{d|n} x_d z_{n/d}` for `n ≤ N`; exact when both inputs are.
pub fn convolve(x: &Sequence, z: &Sequence, n: usize) -> Result<Sequence> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    check_len(x, n)?;
    check_len(z, n)?;
    let label = format!("{}*{}", x.label(), z.label());
    if x.is_exact() && z.is_exact() {
        let y = convolve_with::<Exact>(&x.scalars()?[..n], &z.scalars()?[..n], n);
        Sequence::exact(y, label)
    } else {
        let y = convolve_with::<f64>(&x.to_f64_vec()[..n], &z.to_f64_vec()[..n], n);
        Sequence::float(y, label)
    }
}

fn invert_with<T: Scalar>(c: &[T], n: usize) -> Result<Vec<T>> {
    if c[0].is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let sieve = LinearSieve::new(n);
    let inv_c1 = T::one() / c[0].clone();
    let mut x: Vec<T> = Vec::with_capacity(n);
    x.push(inv_c1.clone());
    for m in 2..=n {
        let mut acc = T::zero();
        for d in sieve.divisors(m) {
            if d > 1 && !c[d - 1].is_zero() {
                acc += &c[d - 1].mul_ref(&x[m / d - 1]);
            }
        }
        x.push(-(acc * inv_c1.clone()));
    }
    Ok(x)
}

/// The Dirichlet inverse: `convolve(c, x) = e₁` on `1..=N`.
pub fn invert(c: &Sequence, n: usize) -> Result<Sequence> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    check_len(c, n)?;
    let label = format!("inv({})", c.label());
    if c.is_exact() {
        Sequence::exact(invert_with::<Exact>(&c.scalars()?[..n], n)?, label)
    } else {
        Sequence::float(invert_with::<f64>(&c.to_f64_vec()[..n], n)?, label)
    }
}

/// Both sides of `Σ_k x_k g(t/k) = Σ_k y_k ⌊t/k⌋` with
/// `g(u) = Σ_k z_k ⌊u/k⌋` and `y = x ⋆ z`.
#[derive(Clone, Debug)]
pub struct Lemma1Check {
    pub t: usize,
    pub exact: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_exact: Option<Exact>,
    pub rhs_exact: Option<Exact>,
    pub equal: bool,
}

/// Relative tolerance for float-coefficient identities.
pub const FLOAT_REL_TOL: f64 = 1e-9;

fn lemma1_sides<T: Scalar>(x: &[T], z: &[T], t: usize) -> (T, T) {
    // g(u) for every u ≤ t by prefix accumulation of w = z ⋆ 1
    let mut g = vec![T::zero(); t + 1];
    for (k, zk) in z.iter().enumerate().take(t) {
        if zk.is_zero() {
            continue;
        }
        let k = k + 1;
        let mut q = k;
        while q <= t {
            g[q] += zk;
            q += k;
        }
    }
    for u in 1..=t {
        let prev = g[u - 1].clone();
        g[u] += &prev;
    }
    let mut lhs = T::zero();
    for (k, xk) in x.iter().enumerate().take(t) {
        if !xk.is_zero() {
            lhs += &xk.mul_ref(&g[t / (k + 1)]);
        }
    }
    let y = convolve_with(x, z, t);
    let mut rhs = T::zero();
    for (k, yk) in y.iter().enumerate() {
        if !yk.is_zero() {
            rhs += &yk.mul_ref(&T::from_int((t / (k + 1)) as i64));
        }
    }
    (lhs, rhs)
}

/// Evaluates both sides of the floor-sum identity at `t`.
pub fn lemma1_check(x: &Sequence, z: &Sequence, t: usize) -> Result<Lemma1Check> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    check_len(x, t)?;
    check_len(z, t)?;
    if x.is_exact() && z.is_exact() {
        let (l, r) = lemma1_sides::<Exact>(&x.scalars()?[..t], &z.scalars()?[..t], t);
        Ok(Lemma1Check {
            t,
            exact: true,
            lhs: l.to_f64(),
            rhs: r.to_f64(),
            equal: l == r,
            lhs_exact: Some(l),
            rhs_exact: Some(r),
        })
    } else {
        let (l, r) = lemma1_sides::<f64>(&x.to_f64_vec()[..t], &z.to_f64_vec()[..t], t);
        let scale = l.abs().max(r.abs()).max(1.0);
        Ok(Lemma1Check {
            t,
            exact: false,
            lhs: l,
            rhs: r,
            equal: (l - r).abs() <= FLOAT_REL_TOL * scale,
            lhs_exact: None,
            rhs_exact: None,
        })
    }
}

/// `Σ_{k≤t} x_k ⌊t/k⌋` in exact arithmetic.
pub fn floor_sum(x: &Sequence, t: usize) -> Result<Exact> {
    check_len(x, t)?;
    let xs = x.scalars::<Exact>()?;
    let mut acc = Exact::zero();
    for (k, xk) in xs.iter().enumerate().take(t) {
        acc += xk * Exact::from_int((t / (k + 1)) as i64);
    }
    Ok(acc)
}
