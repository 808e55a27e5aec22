//! Binomial confidence bounds for the Monte Carlo checks.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval `(lower, upper)` for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    assert!(n > 0 && k <= n);
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets_the_estimate() {
        let (lo, hi) = wilson_interval(30, 100, Z95);
        assert!(lo < 0.3 && 0.3 < hi);
        // reference values for k=30, n=100
        assert!((lo - 0.2189).abs() < 1e-3);
        assert!((hi - 0.3958).abs() < 1e-3);
    }

    #[test]
    fn zero_successes_upper_bound_is_small() {
        let (lo, hi) = wilson_interval(0, 2000, Z95);
        assert!(lo < 1e-12);
        assert!(hi < 0.002);
    }
}
