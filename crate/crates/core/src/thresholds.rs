//! Fixed constants of the finite-data proxies. Every report carries a copy.

use serde::Serialize;

/// Smallest trace length accepted by the index and type diagnostics.
pub const MIN_TRACE_LEN: usize = 1 << 10;

/// `|slope|` of `ln S_j` per octave beyond which an envelope counts as
/// growing (type 2) or vanishing (type 3).
pub const TYPE_SLOPE: f64 = 0.05;

/// Change of local envelope slope between the halves of the fitted windows
/// that flags a slowly varying factor.
pub const SLOW_DRIFT: f64 = 0.01;

/// `I_D / I_{D/2}` at most this suggests `I_n → 0`.
pub const LIMIT_RATIO: f64 = 0.75;

/// Slope of partial sums against `log k` above which they count as divergent.
pub const DIVERGENCE_SLOPE: f64 = 0.05;

/// Guard band for float comparisons of profile values.
pub const GUARD: f64 = 1e-9;

/// Lower end of the domination range in the θ_m scan.
pub const ABC_N0: usize = 1 << 10;

/// Smallest `N` for the θ_m scan.
pub const ABC_MIN_N: usize = 1 << 14;

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Thresholds {
    pub min_trace_len: usize,
    pub type_slope: f64,
    pub slow_drift: f64,
    pub limit_ratio: f64,
    pub divergence_slope: f64,
    pub guard: f64,
    pub abc_n0: usize,
}

pub const THRESHOLDS: Thresholds = Thresholds {
    min_trace_len: MIN_TRACE_LEN,
    type_slope: TYPE_SLOPE,
    slow_drift: SLOW_DRIFT,
    limit_ratio: LIMIT_RATIO,
    divergence_slope: DIVERGENCE_SLOPE,
    guard: GUARD,
    abc_n0: ABC_N0,
};
