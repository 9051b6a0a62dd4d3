//! Closed-form solutions of the recurrence for particular kernels, used as
//! ground truth against [`crate::deconv`].

use std::collections::HashMap;
use std::f64::consts::LN_2;

use num_integer::Roots;
use statrs::function::gamma::gamma;

use crate::arith::Sequence;
use crate::deconv::TargetSpec;
use crate::error::{Error, Result};
use crate::quad;

/// Exponent `Re ± i Im` of the homogeneous solutions for `smooth(λ)`.
pub fn smooth_exponents(lambda: f64) -> Result<(f64, f64)> {
    let disc = lambda * lambda - 6.0 * lambda + 1.0;
    if !(disc < 0.0 && lambda < 3.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} is outside the oscillatory range 3 - 2*sqrt(2) < lambda < 3"
        )));
    }
    Ok(((lambda - 3.0) / 2.0, (-disc).sqrt() / 2.0))
}

/// Coefficient of the particular solution `c₃ y^{−β}` of
/// `y²F″ + (4−λ)yF′ + 2F = y^{−β}`; equals `1/(β² − β + 2)` at `λ = 2`.
pub fn smooth_particular(lambda: f64, beta: f64) -> f64 {
    1.0 / (beta * beta - (3.0 - lambda) * beta + 2.0)
}

/// `F(y) = c₁ y^{Re} sin(Im log y) + c₂ y^{Re} cos(Im log y) + c₃ y^{−β}`.
pub fn smooth_ode_solution(lambda: f64, beta: f64, c1: f64, c2: f64, y: f64) -> Result<f64> {
    let (re, im) = smooth_exponents(lambda)?;
    if !(y >= 1.0) {
        return Err(Error::Domain { x: y });
    }
    let l = y.ln();
    let amp = y.powf(re);
    Ok(c1 * amp * (im * l).sin() + c2 * amp * (im * l).cos()
        + smooth_particular(lambda, beta) * y.powf(-beta))
}

/// `y²F″ + (4−λ)yF′ + 2F` by central differences with step `h·y`.
pub fn smooth_ode_operator<F: Fn(f64) -> f64>(lambda: f64, f: F, y: f64, h: f64) -> f64 {
    let d = h * y;
    let (fm, f0, fp) = (f(y - d), f(y), f(y + d));
    let d1 = (fp - fm) / (2.0 * d);
    let d2 = (fp - 2.0 * f0 + fm) / (d * d);
    y * y * d2 + (4.0 - lambda) * y * d1 + 2.0 * f0
}

/// `F(y) = a y^{−β}/(r − βs) + c y^{−r/s}`; fails at resonance `β = r/s`.
pub fn linear_theta_generic(r: f64, s: f64, beta: f64, a: f64, c: f64, y: f64) -> Result<f64> {
    if s == 0.0 {
        return Err(Error::ZeroPivot);
    }
    let den = r - beta * s;
    if den == 0.0 {
        return Err(Error::InvalidParameter(
            "beta = r/s: use the resonant branch".into(),
        ));
    }
    Ok(a * y.powf(-beta) / den + c * y.powf(-r / s))
}

/// `F(y) = y^{−r/s} (c + (a/s) log y)`, the solution at `β = r/s`.
pub fn linear_theta_resonant(r: f64, s: f64, a: f64, c: f64, y: f64) -> Result<f64> {
    if s == 0.0 {
        return Err(Error::ZeroPivot);
    }
    Ok(y.powf(-r / s) * (c + a / s * y.ln()))
}

/// Solution of `s y F′ + r F = a y^{−β}`; the branch follows from whether
/// `β = r/s`.
pub fn linear_theta_solution(r: f64, s: f64, beta: f64, a: f64, c: f64, y: f64) -> Result<f64> {
    if s != 0.0 && r - beta * s == 0.0 {
        linear_theta_resonant(r, s, a, c, y)
    } else {
        linear_theta_generic(r, s, beta, a, c, y)
    }
}

/// `n^{−r} / ((1−r) Γ(1−r))`, the growth of `A(n)` for `linear(r, 1)`.
pub fn linear_theta_asymptotic(r: f64, n: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("r must lie in (0, 1), got {r}")));
    }
    Ok(n.powf(-r) / ((1.0 - r) * gamma(1.0 - r)))
}

/// `F(y) = 1 − Σ_{0≤n≤log₂ y} (−1)ⁿ/(n+1)! · log(y/2ⁿ)^{n+1}`.
pub fn v23_f(y: f64) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::Domain { x: y });
    }
    let mut sum = 0.0;
    let mut fact = 1.0;
    let mut n = 0;
    while (n as f64) * LN_2 <= y.ln() {
        fact *= (n + 1) as f64;
        let l = y.ln() - n as f64 * LN_2;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * l.powi(n + 1) / fact;
        n += 1;
    }
    Ok(1.0 - sum)
}

/// Density `ρ(t)` of the printed measure `dF(t) = δ₁ − ρ(t) dt/t`,
/// `ρ(t) = Σ_{2ⁿ<t} (−1)ⁿ/n! · log(t/2ⁿ)ⁿ`.
pub fn v23_density(t: f64) -> f64 {
    shifted_density(t, 0)
}

fn shifted_density(t: f64, shift: i32) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    let mut n = 0;
    while ((n + shift) as f64) * LN_2 < t.ln() {
        if n > 0 {
            fact *= n as f64;
        }
        let l = t.ln() - (n + shift) as f64 * LN_2;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * l.powi(n) / fact;
        n += 1;
    }
    sum
}

fn residual_with(y: f64, shift: i32) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::Domain { x: y });
    }
    let theta = |x: f64| if x <= 2.0 { 1.0 / x } else { 1.0 - 1.0 / x };
    let ly = y.ln();
    let mut breaks = vec![(y / 2.0).ln()];
    let mut n = 1.0;
    while n * LN_2 < ly {
        breaks.push(n * LN_2);
        n += 1.0;
    }
    // t = e^v, dt/t = dv
    let integral = quad::integrate(
        |v| theta(y * (-v).exp()) * shifted_density(v.exp(), shift),
        0.0,
        ly,
        &breaks,
        1e-12,
    );
    Ok(theta(y) - integral - 1.0 / y)
}

/// `∫₁^y θ(y/t) dF(t) − 1/y` for the `v23` kernel and the printed measure.
///
/// This is `−1/y`, not 0: inverting the Laplace transform
/// `1/(1 + e^{−ℓs}/s)` places the n-th density at `(n+1)ℓ`, one step
/// later than printed. [`v23_residual_shifted`] uses that placement.
pub fn v23_residual(y: f64) -> Result<f64> {
    residual_with(y, 0)
}

/// Residual of the measure with every density term moved from `2ⁿ` to
/// `2ⁿ⁺¹`; its distribution function is [`v23_f_shifted`].
pub fn v23_residual_shifted(y: f64) -> Result<f64> {
    residual_with(y, 1)
}

/// `F(y/2)` for `y ≥ 2` and `1` on `[1, 2)`: the distribution function that
/// does solve `∫₁^y θ(y/t) dF(t) = 1/y`.
pub fn v23_f_shifted(y: f64) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::Domain { x: y });
    }
    if y < 2.0 {
        Ok(1.0)
    } else {
        v23_f(y / 2.0)
    }
}

/// Root of `s·2^s = 1` (≈ 0.641185).
pub fn v23_root_s1() -> f64 {
    let g = |s: f64| s * (s * LN_2).exp() - 1.0;
    let (mut lo, mut hi) = (0.5, 0.7);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let mut s = 0.5 * (lo + hi);
    // polish
    for _ in 0..3 {
        let d = (s * LN_2).exp() * (1.0 + s * LN_2);
        s -= g(s) / d;
    }
    s
}

/// `U(1) = U(2) = 1`, `U(n) = f(n) + (1−r)(U(⌈n/2⌉) − U(⌊n/2⌋))`.
pub fn dirac_u(r: f64, f: &TargetSpec, n: u64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("r must lie in (0, 1), got {r}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    fn go(r: f64, f: &TargetSpec, n: u64, memo: &mut HashMap<u64, f64>) -> Result<f64> {
        if n <= 2 {
            return Ok(1.0);
        }
        if let Some(v) = memo.get(&n) {
            return Ok(*v);
        }
        let hi = go(r, f, n.div_ceil(2), memo)?;
        let lo = go(r, f, n / 2, memo)?;
        let v = f.value::<f64>(n as usize)? + (1.0 - r) * (hi - lo);
        memo.insert(n, v);
        Ok(v)
    }
    go(r, f, n, &mut HashMap::new())
}

/// `U(1..=n)` bottom-up.
pub fn dirac_u_table(r: f64, f: &TargetSpec, n: usize) -> Result<Vec<f64>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("r must lie in (0, 1), got {r}")));
    }
    let mut u = vec![0.0; n + 1];
    for m in 1..=n {
        u[m] = if m <= 2 {
            1.0
        } else {
            f.value::<f64>(m)? + (1.0 - r) * (u[m.div_ceil(2)] - u[m / 2])
        };
    }
    u.remove(0);
    Ok(u)
}

/// `a′` with `⌊√n⌋ = Σ a′_k 2^{⌊log₂(n/k)⌋}`:
/// `1` on odd squares, `−m` on `2^{2m−1}·b` where `b` is an odd square or
/// eight times one, `0` elsewhere.
pub fn pow2_aprime(n: usize) -> Result<Sequence> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let is_square = |b: usize| {
        let s = b.sqrt();
        s * s == b
    };
    let values = (1..=n).map(|k| {
        let v = k.trailing_zeros() as i64;
        let odd = k >> v;
        if !is_square(odd) {
            0
        } else if v == 0 {
            1
        } else if v % 2 == 1 {
            -(v + 1) / 2
        } else if v >= 4 {
            -(v - 2) / 2
        } else {
            0
        }
    });
    Sequence::from_ints(values, "pow2_aprime")
}

/// `1/2 − 2λ√2` with `λ = (1 + 1/√8)/2`, the printed constant in
/// `A′(n) ~ c √n`.
pub fn pow2_aprime_constant() -> f64 {
    let lambda = 0.5 * (1.0 + 1.0 / 8f64.sqrt());
    0.5 - 2.0 * lambda * 2f64.sqrt()
}
