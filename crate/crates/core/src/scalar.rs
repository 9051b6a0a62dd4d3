//! Number types shared by the exact and floating-point engines.
//!
//! Every solver is written once over [`Scalar`] and instantiated for `f64`
//! and for unbounded rationals ([`Exact`]).

use std::fmt;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, NumAssign, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Unbounded rational used by every exact computation.
pub type Exact = BigRational;

/// Field operations needed by the solvers.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Num
    + NumAssign
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i128, den: i128) -> Self;

    fn from_exact(q: &Exact) -> Self;

    /// The binary value of `v`, exactly.
    fn from_f64(v: f64) -> Self;

    fn from_param(p: &Param) -> Result<Self>;

    fn to_f64(&self) -> f64;

    fn mul_ref(&self, rhs: &Self) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }

    fn from_exact(q: &Exact) -> Self {
        exact_to_f64(q)
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn from_param(p: &Param) -> Result<Self> {
        Ok(p.value())
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i128, den: i128) -> Self {
        let g = gcd_i128(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        BigRational::new_raw(BigInt::from(num), BigInt::from(den))
    }

    fn from_exact(q: &Exact) -> Self {
        q.clone()
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }

    fn from_param(p: &Param) -> Result<Self> {
        p.exact()
            .cloned()
            .ok_or_else(|| Error::NotExact(format!("parameter {} has no exact value", p)))
    }

    fn to_f64(&self) -> f64 {
        exact_to_f64(self)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

pub(crate) fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

/// Correctly scaled conversion that survives numerators and denominators
/// beyond the f64 range.
pub fn exact_to_f64(q: &Exact) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() {
            return v;
        }
    }
    let numer = q.numer();
    let denom = q.denom();
    let shift = numer.bits() as i64 - denom.bits() as i64;
    let (n, d) = if shift > 0 {
        (numer.clone(), denom.clone() << (shift as usize))
    } else {
        (numer.clone() << ((-shift) as usize), denom.clone())
    };
    // n/d is now in [1/2, 2) in magnitude; take 60 bits of it.
    let scaled = (n << 60usize) / d;
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(-60) * 2f64.powi(shift as i32)
}

/// A real parameter that remembers its exact rational value when it has one.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    value: f64,
    exact: Option<Exact>,
}

impl Param {
    pub fn exact_value(q: Exact) -> Self {
        Param {
            value: exact_to_f64(&q),
            exact: Some(q),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Param::exact_value(Exact::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(v: i64) -> Self {
        Param::ratio(v, 1)
    }

    /// A float-only parameter; exact mode refuses it.
    pub fn float(value: f64) -> Self {
        Param { value, exact: None }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&Exact> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Parses `3`, `-0.75`, `1.5e-3` or `2/3` into an exact rational.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Param::exact_value(Exact::new(p, q)));
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let all: String = format!("{int_part}{frac_part}");
        let mut numer: BigInt = if all.is_empty() {
            BigInt::zero()
        } else {
            all.parse().map_err(|_| bad())?
        };
        if neg {
            numer = -numer;
        }
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let q = if scale >= 0 {
            Exact::from_integer(numer * num_traits::pow(ten, scale as usize))
        } else {
            Exact::new(numer, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Param::exact_value(q))
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::float(v)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Some(q) => {
                // Prefer a terminating decimal when one exists.
                match decimal_string(q) {
                    Some(d) => f.write_str(&d),
                    None => write!(f, "{}/{}", q.numer(), q.denom()),
                }
            }
            None => write!(f, "{}", self.value),
        }
    }
}

fn decimal_string(q: &Exact) -> Option<String> {
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = q * Exact::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (i, frac) = digits.split_at(digits.len() - places);
    Some(format!("{}{}.{}", if neg { "-" } else { "" }, i, frac))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        let p = Param::parse("0.8").unwrap();
        assert_eq!(p.exact().unwrap(), &Exact::new(4.into(), 5.into()));
        assert_eq!(p.to_string(), "0.8");
        let p = Param::parse("-1.25e-2").unwrap();
        assert_eq!(p.exact().unwrap(), &Exact::new((-1).into(), 80.into()));
        let p = Param::parse("2/6").unwrap();
        assert_eq!(p.to_string(), "1/3");
        assert!(Param::parse("abc").is_err());
        assert!(Param::parse("1/0").is_err());
        assert!(Param::parse(".").is_err());
    }

    #[test]
    fn huge_rationals_convert_to_f64() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let q = Exact::new(big.clone() * 3, big * 7);
        assert!((exact_to_f64(&q) - 3.0 / 7.0).abs() < 1e-15);
        let q = Exact::new(BigInt::from(1), num_traits::pow(BigInt::from(2), 1100));
        assert_eq!(exact_to_f64(&q), 0.0);
    }

    #[test]
    fn from_ratio_normalizes_sign() {
        assert_eq!(Exact::from_ratio(2, -4), Exact::new((-1).into(), 2.into()));
    }
}
