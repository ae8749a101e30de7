//! Small statistics helpers for Monte Carlo reporting.

/// A Monte Carlo proportion estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn new(successes: u64, trials: u64) -> Self {
        Estimate { successes, trials }
    }

    pub fn mean(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub fn std_err(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.mean();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Wilson score interval at 95%.
    pub fn wilson95(&self) -> (f64, f64) {
        wilson(self.successes, self.trials, 1.959_963_984_540_054)
    }
}

pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Median of a sample; the mean of the two middle values for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty sample");
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn slope_of_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 0.5 * v + 3.0).collect();
        assert!((ols_slope(&x, &y) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn wilson_contains_mean() {
        let e = Estimate::new(30, 100);
        let (lo, hi) = e.wilson95();
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((e.std_err() - (0.21f64 / 100.0).sqrt()).abs() < 1e-12);
    }
}
