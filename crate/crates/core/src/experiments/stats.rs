//! Binomial confidence intervals and order statistics.

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Below this many successes (or failures) the Wilson interval is used.
pub const WILSON_CUTOFF: u64 = 10;

/// Half-width of the 95% interval for a proportion of `successes` in `trials`.
///
/// Normal approximation with continuity correction; when either tail has
/// fewer than [`WILSON_CUTOFF`] counts, the Wilson score interval, reported
/// as the larger distance from `p_hat` to its ends, since Wilson is not
/// centred on `p_hat`.
pub fn binomial_halfwidth(successes: u64, trials: u64) -> f64 {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    if successes.min(trials - successes) < WILSON_CUTOFF {
        let (lo, hi) = wilson_interval(successes, trials);
        (p - lo).max(hi - p)
    } else {
        Z_95 * (p * (1.0 - p) / n).sqrt() + 0.5 / n
    }
}

pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let spread = Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - spread).max(0.0), (centre + spread).min(1.0))
}

/// Median of an already sorted slice; mean of the middle pair for even length.
pub fn sorted_median(sorted: &[u64]) -> f64 {
    assert!(!sorted.is_empty());
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid] as f64
    } else {
        (sorted[mid - 1] as f64 + sorted[mid] as f64) / 2.0
    }
}
