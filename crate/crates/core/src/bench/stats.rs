//! Binomial confidence intervals.

/// Two-sided normal quantile for 95% coverage.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes >= trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

pub fn wilson95(successes: u64, trials: u64) -> (f64, f64) {
    wilson_interval(successes, trials, Z95)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_successes_has_zero_lower_bound() {
        let (lo, hi) = wilson95(0, 100);
        assert_eq!(lo, 0.0);
        // z^2 / (n + z^2) for p = 0.
        assert!((hi - Z95 * Z95 / (100.0 + Z95 * Z95)).abs() < 1e-12);
    }

    #[test]
    fn interval_brackets_the_estimate() {
        let (lo, hi) = wilson95(30, 100);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
        assert_eq!(wilson95(0, 0), (0.0, 1.0));
    }
}
