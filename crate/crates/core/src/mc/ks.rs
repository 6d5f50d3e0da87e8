use crate::gamma::GammaLaw;
use crate::{Error, Result};

/// Empirical distribution function of a sample.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InvalidParameter("empty sample".into()));
        }
        if sample.iter().any(|v| v.is_nan()) {
            return Err(Error::NonFinite("NaN in sample".into()));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of sample points `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// `sup_x |F_n(x) − F(x)|` for a continuous `F`.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                ((i + 1) as f64 / n - f).max(f - i as f64 / n)
            })
            .fold(0.0, f64::max)
    }
}

/// One-sample Kolmogorov–Smirnov statistic against a Gamma law.
pub fn ks_distance(sample: &[f64], law: &GammaLaw) -> Result<f64> {
    Ok(Ecdf::new(sample)?.ks_distance(|x| law.cdf(x)))
}
