//! Arithmetic sequences indexed from 1, and the sieves that produce them.

use std::borrow::Cow;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

/// Whether every entry of a [`Sequence`] is an exact rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Exact(Vec<Exact>),
    Float(Vec<f64>),
}

/// A real sequence `s(1), ..., s(N)` with `N >= 1` and a provenance label.
///
/// Position 0 of the backing vector holds `s(1)`; index 0 is never exposed.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    values: Values,
    label: String,
}

impl Sequence {
    pub fn exact(values: Vec<Exact>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence {
            values: Values::Exact(values),
            label: label.into(),
        })
    }

    pub fn float(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence {
            values: Values::Float(values),
            label: label.into(),
        })
    }

    pub fn from_ints<I>(values: I, label: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<i64>,
    {
        Sequence::exact(
            values.into_iter().map(|v| Exact::from_int(v.into())).collect(),
            label,
        )
    }

    /// Wraps solver output of either scalar type.
    pub fn from_scalars<T: Scalar>(values: Vec<T>, label: impl Into<String>) -> Result<Self> {
        use std::any::Any;
        let boxed: Box<dyn Any> = Box::new(values);
        match boxed.downcast::<Vec<Exact>>() {
            Ok(v) => Sequence::exact(*v, label),
            Err(b) => match b.downcast::<Vec<f64>>() {
                Ok(v) => Sequence::float(*v, label),
                Err(_) => unreachable!("Scalar is implemented for f64 and Exact only"),
            },
        }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            Values::Exact(v) => v.len(),
            Values::Float(v) => v.len(),
        }
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn exactness(&self) -> Exactness {
        match self.values {
            Values::Exact(_) => Exactness::Exact,
            Values::Float(_) => Exactness::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exactness() == Exactness::Exact
    }

    fn check(&self, n: usize) {
        assert!(
            n >= 1 && n <= self.len(),
            "index {n} outside 1..={}",
            self.len()
        );
    }

    /// Entry `s(n)` as a float. Panics unless `1 <= n <= len`.
    pub fn get_f64(&self, n: usize) -> f64 {
        self.check(n);
        match &self.values {
            Values::Exact(v) => v[n - 1].to_f64(),
            Values::Float(v) => v[n - 1],
        }
    }

    /// Entry `s(n)` when the sequence is exact. Panics unless `1 <= n <= len`.
    pub fn get_exact(&self, n: usize) -> Option<&Exact> {
        self.check(n);
        match &self.values {
            Values::Exact(v) => Some(&v[n - 1]),
            Values::Float(_) => None,
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match &self.values {
            Values::Exact(v) => v.iter().map(Scalar::to_f64).collect(),
            Values::Float(v) => v.clone(),
        }
    }

    pub fn to_float(&self) -> Sequence {
        Sequence {
            values: Values::Float(self.to_f64_vec()),
            label: self.label.clone(),
        }
    }

    /// The first `n` entries (all of them if `n >= len`).
    pub fn truncated(&self, n: usize) -> Result<Sequence> {
        let n = n.min(self.len());
        let values = match &self.values {
            Values::Exact(v) => Values::Exact(v[..n].to_vec()),
            Values::Float(v) => Values::Float(v[..n].to_vec()),
        };
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence {
            values,
            label: self.label.clone(),
        })
    }

    /// Entries as `T`; requesting exact values from a float sequence fails.
    pub fn scalars<T: Scalar>(&self) -> Result<Cow<'_, [T]>> {
        use std::any::Any;
        match &self.values {
            Values::Exact(v) => {
                if let Some(s) = (v as &dyn Any).downcast_ref::<Vec<T>>() {
                    Ok(Cow::Borrowed(s.as_slice()))
                } else {
                    Ok(Cow::Owned(v.iter().map(T::from_exact).collect()))
                }
            }
            Values::Float(v) => {
                if T::EXACT {
                    Err(Error::NotExact(format!(
                        "sequence '{}' holds floats",
                        self.label
                    )))
                } else {
                    let s = (v as &dyn Any)
                        .downcast_ref::<Vec<T>>()
                        .expect("non-exact scalar is f64");
                    Ok(Cow::Borrowed(s.as_slice()))
                }
            }
        }
    }
}

/// Linear sieve over `1..=n` recording smallest prime factors, μ and λ.
#[derive(Clone, Debug)]
pub struct LinearSieve {
    spf: Vec<u32>,
    mu: Vec<i8>,
    liouville: Vec<i8>,
}

impl LinearSieve {
    pub fn new(n: usize) -> Self {
        let n = n.max(1);
        let mut spf = vec![0u32; n + 1];
        let mut mu = vec![0i8; n + 1];
        let mut liouville = vec![0i8; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        mu[1] = 1;
        liouville[1] = 1;
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
                mu[i] = -1;
                liouville[i] = -1;
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
                mu[m] = if p == spf[i] { 0 } else { -mu[i] };
                liouville[m] = -liouville[i];
            }
        }
        LinearSieve { spf, mu, liouville }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn smallest_prime_factor(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    pub fn mu(&self, n: usize) -> i8 {
        self.mu[n]
    }

    pub fn liouville(&self, n: usize) -> i8 {
        self.liouville[n]
    }

    /// Prime factorization of `n` as `(p, exponent)` pairs, ascending.
    pub fn factorize(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// All divisors of `n` (unsorted), in O(d(n)) after factorization.
    pub fn divisors(&self, n: usize) -> Vec<usize> {
        let mut divs = vec![1usize];
        for (p, e) in self.factorize(n) {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }
}

pub fn mobius_sieve(n: usize) -> Result<Sequence> {
    positive(n)?;
    let sieve = LinearSieve::new(n);
    Sequence::from_ints((1..=n).map(|k| sieve.mu(k)), "mobius")
}

pub fn liouville_sieve(n: usize) -> Result<Sequence> {
    positive(n)?;
    let sieve = LinearSieve::new(n);
    Sequence::from_ints((1..=n).map(|k| sieve.liouville(k)), "liouville")
}

/// Partial sums `S(n) = s(1) + ... + s(n)`.
pub fn summatory(s: &Sequence) -> Sequence {
    let label = format!("summatory({})", s.label());
    match s.values() {
        Values::Exact(v) => {
            let mut acc = Exact::zero();
            let out = v
                .iter()
                .map(|x| {
                    acc += x;
                    acc.clone()
                })
                .collect();
            Sequence::exact(out, label).expect("nonempty input")
        }
        Values::Float(v) => {
            let mut acc = 0.0;
            let out = v
                .iter()
                .map(|x| {
                    acc += x;
                    acc
                })
                .collect();
            Sequence::float(out, label).expect("nonempty input")
        }
    }
}

/// τ(1..=n) from `q * prod_{m>=1} (1 - q^m)^24` truncated at `q^n`.
pub fn ramanujan_tau(n: usize) -> Result<Sequence> {
    positive(n)?;
    let taus = tau_integers(n);
    Sequence::exact(taus.into_iter().map(Exact::from_integer).collect(), "tau")
}

/// Integer τ(1..=n), position 0 holding τ(1).
pub fn tau_integers(n: usize) -> Vec<BigInt> {
    // Only q^0 .. q^(n-1) of the product matter after the shift by q.
    let len = n;
    let mut euler = vec![BigInt::zero(); len];
    euler[0] = BigInt::one();
    for m in 1..len {
        // multiply by (1 - q^m), highest degree first
        for d in (m..len).rev() {
            let (lo, hi) = euler.split_at_mut(d);
            hi[0] -= &lo[d - m];
        }
    }
    let mut result = vec![BigInt::zero(); len];
    result[0] = BigInt::one();
    let mut base = euler;
    let mut e = 24u32;
    while e > 0 {
        if e & 1 == 1 {
            result = truncated_product(&result, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = truncated_product(&base, &base, len);
        }
    }
    result
}

fn truncated_product(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// τ(k) / k^{11/2} as floats, the unitary normalization of the tau coefficients.
pub fn tau_normalized(n: usize) -> Result<Sequence> {
    positive(n)?;
    let values = tau_integers(n)
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let k = (i + 1) as f64;
            crate::scalar::exact_to_f64(&Exact::from_integer(t.clone())) / k.powf(5.5)
        })
        .collect();
    Sequence::float(values, "tau_normalized")
}

/// The non-principal character mod 4: 1, 0, -1, 0, ...
pub fn chi4(n: usize) -> Result<Sequence> {
    positive(n)?;
    Sequence::from_ints((1..=n).map(chi4_at), "chi4")
}

pub fn chi4_at(k: usize) -> i64 {
    match k % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// ξ = (−2 + √(10 − 2√5)) / (−1 + √5), evaluated once at 40 digits.
pub const DH_XI: f64 = 0.284_079_043_840_412_296_028_291_832_393_126_169_1;

/// The 5-periodic coefficients `[1, ξ, −ξ, −1, 0]`.
pub const DH_PATTERN: [f64; 5] = [1.0, DH_XI, -DH_XI, -1.0, 0.0];

pub fn dh_sequence(n: usize) -> Result<Sequence> {
    positive(n)?;
    Sequence::float((1..=n).map(|k| DH_PATTERN[(k - 1) % 5]).collect(), "dh")
}

/// `(−1)^{n−1}`.
pub fn alternating_unit(n: usize) -> Result<Sequence> {
    positive(n)?;
    Sequence::from_ints(
        (1..=n).map(|k| if k % 2 == 1 { 1i64 } else { -1 }),
        "alternating",
    )
}

pub fn ones(n: usize) -> Result<Sequence> {
    positive(n)?;
    Sequence::from_ints(std::iter::repeat_n(1i64, n), "ones")
}

/// The Dirichlet unit `e1 = [1, 0, 0, ...]`.
pub fn unit(n: usize) -> Result<Sequence> {
    positive(n)?;
    Sequence::from_ints((1..=n).map(|k| i64::from(k == 1)), "unit")
}

pub fn zeros(n: usize) -> Result<Sequence> {
    positive(n)?;
    Sequence::from_ints(std::iter::repeat_n(0i64, n), "zero")
}

fn positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("N must be at least 1".into()))
    } else {
        Ok(())
    }
}
