//! Probability that a uniform-weight instance lands in the narrow band
//! `0 <= w - d <= alpha * sqrt(m)` where partitioning can be hard.
//!
//! Coalition weight `w` is modelled as normal with mean `mk/2` and variance
//! `2mk^2/3`, the deficit `d` as normal with mean 0 and variance `2nk^2/3`.
//! The band probability is
//!
//! ```text
//! ∫_0^∞ N(x; mk/2, 2mk²/3) ∫_{x - α√m}^{x} N(y; 0, 2nk²/3) dy dx
//! ```
//!
//! Both variables are measured in units of `k`, which leaves the value
//! unchanged and keeps the integrands O(1). The inner integral is taken as an
//! average over its interval of length `L = α√m / k`, so the quadrature
//! tolerance applies to `numeric / L`.

use super::quadrature::{integrate, QuadratureError, Tolerance};
use std::f64::consts::PI;
use thiserror::Error;

/// Outer integral truncated at `mean + TRUNCATION_SIGMAS * sd`.
pub const TRUNCATION_SIGMAS: f64 = 12.0;
/// Absolute tolerance on the normalised outer integral.
pub const OUTER_TOLERANCE: f64 = 1e-9;
const INNER_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("m, n and k must be at least 1 (m={m}, n={n}, k={k})")]
    NonPositive { m: u64, n: u64, k: f64 },
    #[error("alpha must be finite and non-negative, got {0}")]
    Alpha(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConfig {
    pub truncation_sigmas: f64,
    pub tolerance: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            truncation_sigmas: TRUNCATION_SIGMAS,
            tolerance: OUTER_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardBound {
    /// Quadrature of the double integral.
    pub numeric: f64,
    /// `α√m / sqrt(4πnk²/3)`: the inner density bounded by its peak and the
    /// outer density integrated to at most 1.
    pub asymptotic: f64,
    /// Error estimate on `numeric`.
    pub error: f64,
    pub config: BoundConfig,
}

fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
}

pub fn hard_bound(m: u64, n: u64, k: f64, alpha: f64) -> Result<HardBound, BoundError> {
    hard_bound_with(m, n, k, alpha, BoundConfig::default())
}

pub fn hard_bound_with(
    m: u64,
    n: u64,
    k: f64,
    alpha: f64,
    config: BoundConfig,
) -> Result<HardBound, BoundError> {
    if m < 1 || n < 1 || !(k >= 1.0) || !k.is_finite() {
        return Err(BoundError::NonPositive { m, n, k });
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(BoundError::Alpha(alpha));
    }
    let (mf, nf) = (m as f64, n as f64);
    let mean = mf / 2.0;
    let sd_w = (2.0 * mf / 3.0).sqrt();
    let sd_d = (2.0 * nf / 3.0).sqrt();
    let band = alpha * mf.sqrt() / k;
    let asymptotic = band / (4.0 * PI * nf / 3.0).sqrt();
    if band == 0.0 {
        return Ok(HardBound {
            numeric: 0.0,
            asymptotic,
            error: 0.0,
            config,
        });
    }

    let inner_tol = Tolerance::absolute(INNER_TOLERANCE);
    let mut inner_failure: Option<QuadratureError> = None;
    let outer = |x: f64| {
        let average = integrate(|t| normal_pdf(x - band * t, 0.0, sd_d), 0.0, 1.0, 1, inner_tol);
        match average {
            Ok(r) => normal_pdf(x, mean, sd_w) * r.value,
            Err(e) => {
                inner_failure.get_or_insert(e);
                0.0
            }
        }
    };
    let upper = mean + config.truncation_sigmas * sd_w;
    let result = integrate(outer, 0.0, upper, 16, Tolerance::absolute(config.tolerance))?;
    if let Some(e) = inner_failure {
        return Err(e.into());
    }
    Ok(HardBound {
        numeric: band * result.value,
        asymptotic,
        error: band * result.error,
        config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_alpha() {
        let b = hard_bound(4, 16, 16.0, 0.0).unwrap();
        assert_eq!((b.numeric, b.asymptotic), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(hard_bound(0, 16, 16.0, 1.0), Err(BoundError::NonPositive { .. })));
        assert!(matches!(hard_bound(4, 0, 16.0, 1.0), Err(BoundError::NonPositive { .. })));
        assert!(matches!(hard_bound(4, 16, 0.5, 1.0), Err(BoundError::NonPositive { .. })));
        assert!(matches!(hard_bound(4, 16, 16.0, -1.0), Err(BoundError::Alpha(_))));
        assert!(matches!(hard_bound(4, 16, 16.0, f64::NAN), Err(BoundError::Alpha(_))));
    }

    #[test]
    fn decreasing_in_n_once_deficit_spread_dominates() {
        let mut last = f64::INFINITY;
        for n in [64, 128, 256, 1024, 4096] {
            let b = hard_bound(8, n, 256.0, 1.0).unwrap();
            assert!(b.numeric < last);
            assert!(b.numeric <= b.asymptotic + b.error);
            last = b.numeric;
        }
    }

    #[test]
    fn rises_with_n_while_coalition_mean_is_in_the_deficit_tail() {
        // mean coalition weight 4k sits 2.4 deficit-sds out at n = 4
        let small = hard_bound(8, 4, 256.0, 1.0).unwrap().numeric;
        let larger = hard_bound(8, 16, 256.0, 1.0).unwrap().numeric;
        assert!(small < larger);
    }
}
