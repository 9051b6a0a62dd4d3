//! Coefficient kernels `θ(x) = x⁻¹ Σ_k z_k ⌊x/k⌋`.

use std::any::Any;
use std::borrow::Cow;
use std::path::{Path, PathBuf};

use crate::arith::{self, Sequence, Values};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

/// Default number of τ coefficients kept by `coeffs:tau`.
pub const TAU_HORIZON: usize = 4096;

#[derive(Clone, Debug)]
enum Shape {
    /// `z` repeats with the period of the stored block; the block sums to 0.
    Periodic,
    /// `z_k = 0` beyond the stored block.
    Table,
}

#[derive(Clone, Debug)]
enum Source {
    Chi4,
    Alt,
    Dh,
    Unit,
    Tau(usize),
    File(PathBuf),
    Custom(String),
}

/// The coefficient sequence `z` of a divisor-step kernel together with the
/// prefix sums `Z(v) = Σ_{k≤v} z_k` that drive evaluation.
#[derive(Clone, Debug)]
pub struct CoeffKernel {
    shape: Shape,
    source: Source,
    z: Vec<f64>,
    z_exact: Option<Vec<Exact>>,
    // prefix[v] = Z(v) for 0 <= v <= len
    prefix: Vec<f64>,
    prefix_exact: Option<Vec<Exact>>,
}

impl CoeffKernel {
    fn build(shape: Shape, source: Source, seq: &Sequence) -> Result<Self> {
        let z = seq.to_f64_vec();
        let z_exact = match seq.values() {
            Values::Exact(v) => Some(v.clone()),
            Values::Float(_) => None,
        };
        let mut prefix = vec![0.0];
        for v in &z {
            prefix.push(prefix.last().unwrap() + v);
        }
        let prefix_exact = z_exact.as_ref().map(|zs| {
            let mut p = vec![Exact::from_int(0)];
            for v in zs {
                let next = p.last().unwrap() + v;
                p.push(next);
            }
            p
        });
        if z[0] == 0.0 {
            return Err(Error::ZeroPivot);
        }
        let kernel = CoeffKernel {
            shape,
            source,
            z,
            z_exact,
            prefix,
            prefix_exact,
        };
        if let Shape::Periodic = kernel.shape {
            let total_zero = match &kernel.prefix_exact {
                Some(p) => p.last().unwrap() == &Exact::from_int(0),
                None => kernel.prefix.last().unwrap().abs() <= 1e-12,
            };
            if !total_zero {
                return Err(Error::InvalidParameter(
                    "periodic coefficients must sum to zero over a period, \
                     otherwise the kernel is unbounded"
                        .into(),
                ));
            }
        }
        Ok(kernel)
    }

    /// Coefficients `z(1..=len)` and zero afterwards.
    pub fn table(z: Sequence) -> Result<Self> {
        let label = z.label().to_string();
        CoeffKernel::build(Shape::Table, Source::Custom(label), &z)
    }

    /// Coefficients repeating `z(1..=p)` forever.
    pub fn periodic(block: Sequence) -> Result<Self> {
        let label = block.label().to_string();
        CoeffKernel::build(Shape::Periodic, Source::Custom(label), &block)
    }

    pub fn chi4() -> Self {
        let block = arith::chi4(4).expect("nonempty");
        CoeffKernel::build(Shape::Periodic, Source::Chi4, &block).expect("valid")
    }

    pub fn alternating() -> Self {
        let block = arith::alternating_unit(2).expect("nonempty");
        CoeffKernel::build(Shape::Periodic, Source::Alt, &block).expect("valid")
    }

    pub fn dh() -> Self {
        let block = arith::dh_sequence(5).expect("nonempty");
        CoeffKernel::build(Shape::Periodic, Source::Dh, &block).expect("valid")
    }

    /// `z = e₁`, which reproduces the floor kernel.
    pub fn unit() -> Self {
        let z = arith::unit(1).expect("nonempty");
        CoeffKernel::build(Shape::Table, Source::Unit, &z).expect("valid")
    }

    /// `z_k = τ(k) / k^{11/2}` for `k ≤ horizon`.
    pub fn tau(horizon: usize) -> Result<Self> {
        let z = arith::tau_normalized(horizon)?;
        CoeffKernel::build(Shape::Table, Source::Tau(horizon), &z)
    }

    /// Table read from a `n,value` CSV file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let z = crate::io::read_sequence_file(path)?;
        CoeffKernel::build(Shape::Table, Source::File(path.to_path_buf()), &z)
    }

    /// Name as used after `coeffs:` in a kernel spec.
    pub fn name(&self) -> String {
        match &self.source {
            Source::Chi4 => "chi4".into(),
            Source::Alt => "alt".into(),
            Source::Dh => "dh".into(),
            Source::Unit => "unit".into(),
            Source::Tau(h) if *h == TAU_HORIZON => "tau".into(),
            Source::Tau(h) => format!("tau,n={h}"),
            Source::File(p) => format!("file={}", p.display()),
            Source::Custom(label) => format!("table({label})"),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.shape, Shape::Periodic)
    }

    pub fn is_exact(&self) -> bool {
        self.z_exact.is_some()
    }

    /// Length of the stored block (the period, or the table size).
    pub fn block_len(&self) -> usize {
        self.z.len()
    }

    pub fn z_f64(&self, k: u64) -> f64 {
        assert!(k >= 1);
        let len = self.z.len() as u64;
        match self.shape {
            Shape::Periodic => self.z[((k - 1) % len) as usize],
            Shape::Table if k <= len => self.z[(k - 1) as usize],
            Shape::Table => 0.0,
        }
    }

    pub fn z_is_nonzero(&self, k: u64) -> bool {
        self.z_f64(k) != 0.0
    }

    pub fn bound(&self) -> f64 {
        match self.shape {
            Shape::Periodic => self.prefix.iter().fold(0.0, |m, v| m.max(v.abs())),
            Shape::Table => self
                .z
                .iter()
                .enumerate()
                .map(|(i, v)| v.abs() / (i + 1) as f64)
                .sum(),
        }
    }

    /// Prefix sums in the requested scalar type.
    pub fn prefix<T: Scalar>(&self) -> Result<Cow<'_, [T]>> {
        if T::EXACT {
            let p = self.prefix_exact.as_ref().ok_or_else(|| {
                Error::NotExact(format!("coefficients '{}' are floats", self.name()))
            })?;
            let p = (p as &dyn Any)
                .downcast_ref::<Vec<T>>()
                .expect("exact scalar is Exact");
            Ok(Cow::Borrowed(p.as_slice()))
        } else {
            let p = (&self.prefix as &dyn Any)
                .downcast_ref::<Vec<T>>()
                .expect("float scalar is f64");
            Ok(Cow::Borrowed(p.as_slice()))
        }
    }

    fn z_index(&self, v: u64) -> usize {
        let len = self.z.len() as u64;
        match self.shape {
            Shape::Periodic => (v % len) as usize,
            Shape::Table => v.min(len) as usize,
        }
    }

    /// `G(q) = Σ_k z_k ⌊q/k⌋ = Σ_m Z(⌊q/m⌋)`, grouped over the `O(√q)`
    /// blocks on which `⌊q/m⌋` is constant.
    pub fn g_with<T: Scalar>(&self, q: u64, prefix: &[T]) -> T {
        let mut acc = T::zero();
        let mut m = 1u64;
        while m <= q {
            let v = q / m;
            let last = q / v;
            let z = &prefix[self.z_index(v)];
            if last == m {
                acc += z;
            } else {
                acc += &z.mul_ref(&T::from_int((last - m + 1) as i64));
            }
            m = last + 1;
        }
        acc
    }

    pub fn g_f64(&self, q: u64) -> f64 {
        self.g_with(q, &self.prefix)
    }

    /// Nonzero values of `w = z ⋆ 1` on `1..=n`, as `(q, w(q))`.
    pub fn step_weights<T: Scalar>(&self, n: usize) -> Result<Vec<(usize, T)>> {
        let z: Vec<T> = if T::EXACT {
            let zs = self.z_exact.as_ref().ok_or_else(|| {
                Error::NotExact(format!("coefficients '{}' are floats", self.name()))
            })?;
            zs.iter().map(T::from_exact).collect()
        } else {
            self.z.iter().map(|v| T::from_f64(*v)).collect()
        };
        let mut w: Vec<T> = vec![T::zero(); n + 1];
        for k in 1..=n {
            let zk = match self.shape {
                Shape::Periodic => &z[(k - 1) % z.len()],
                Shape::Table if k <= z.len() => &z[k - 1],
                Shape::Table => break,
            };
            if zk.is_zero() {
                continue;
            }
            let mut q = k;
            while q <= n {
                w[q] += zk;
                q += k;
            }
        }
        Ok(w
            .into_iter()
            .enumerate()
            .skip(1)
            .filter(|(_, v)| !v.is_zero())
            .collect())
    }
}
