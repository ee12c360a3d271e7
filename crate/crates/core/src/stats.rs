//! Sample statistics for Monte Carlo trials.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance (`n - 1` denominator); zero for `n < 2`.
    pub variance: f64,
    /// `sqrt(variance / n)`.
    pub std_error: f64,
}

impl Summary {
    /// Summarize in slice order. Callers pass trials sorted by index so the
    /// floating-point sums are reproducible.
    pub fn of(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self {
                n,
                mean: 0.0,
                variance: 0.0,
                std_error: 0.0,
            };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let variance = if n < 2 {
            0.0
        } else {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        };
        Self {
            n,
            mean,
            variance,
            std_error: (variance / n as f64).sqrt(),
        }
    }

    pub fn ci95(&self) -> [f64; 2] {
        [
            self.mean - Z95 * self.std_error,
            self.mean + Z95 * self.std_error,
        ]
    }
}
