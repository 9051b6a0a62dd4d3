//! Deconvolution of summatory recurrences `f(n) = Σ_{k≤n} a_k θ(n/k)`
//! and experiments on kernels of good variation.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] builds the coefficient sequences (μ, λ, τ, χ₄, ...);
//! * [`theta`] holds the kernel families and their variational diagrams;
//! * [`dirichlet`] does coefficient-level Dirichlet algebra;
//! * [`deconv`] solves the recurrence exactly or in floating point;
//! * [`oracle`] evaluates the known closed-form solutions;
//! * [`diagnostics`] estimates indices and classifies traces;
//! * [`conjecture`] checks breakpoint profiles and diagram comparisons;
//! * [`cli`] is the command-line front end used by the `fgv` binary.

pub mod arith;
pub mod cli;
pub mod conjecture;
pub mod deconv;
pub mod diagnostics;
pub mod dirichlet;
pub mod error;
pub mod io;
pub mod oracle;
pub mod quad;
pub mod scalar;
pub mod theta;
pub mod thresholds;

pub use arith::Sequence;
pub use error::{Error, Result};
pub use scalar::{Exact, Param, Scalar};
pub use theta::{parse_theta, ThetaFunction};
