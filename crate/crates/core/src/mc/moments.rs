use super::draws::run_draws;
use super::homogeneous::homogeneous_sum;
use super::sequence::SequenceLaw;
use crate::kernel::{from_index_function, IndexFunction, PiecewiseKernel};
use crate::record::Record;
use crate::rng::stream_rng;
use crate::stats::power_moments;
use crate::{Error, Result};

/// Monte Carlo settings. Draw `i` uses stream `i` of `seed`, so results do
/// not depend on `lanes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub lanes: usize,
    pub keep_samples: bool,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, lanes: 0, keep_samples: false }
    }

    pub fn lanes(self, lanes: usize) -> Self {
        Self { lanes, ..self }
    }

    pub fn keep_samples(self, keep: bool) -> Self {
        Self { keep_samples: keep, ..self }
    }
}

/// Sample moments `E[Q^k]`, `k = 1..4`, with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub samples_drawn: usize,
    pub estimates: [f64; 4],
    pub std_errors: [f64; 4],
    pub samples: Option<Vec<f64>>,
}

impl McResult {
    pub fn from_samples(samples: Vec<f64>, keep: bool) -> Self {
        let pm = power_moments::<4>(&samples);
        Self {
            samples_drawn: samples.len(),
            estimates: pm.map(|p| p.0),
            std_errors: pm.map(|p| p.1),
            samples: keep.then_some(samples),
        }
    }

    /// Columns `mc_M, mc_m1, mc_se1, …, mc_m4, mc_se4`.
    pub fn record(&self) -> Record {
        let mut r = Record::new();
        r.push("mc_M", self.samples_drawn);
        for k in 0..4 {
            r.push(&format!("mc_m{}", k + 1), self.estimates[k]);
            r.push(&format!("mc_se{}", k + 1), self.std_errors[k]);
        }
        r
    }
}

/// Independent draws of `Q_q(N, h, X)`.
pub fn sample_homogeneous(h: &IndexFunction, law: &dyn SequenceLaw, cfg: &McConfig) -> Result<Vec<f64>> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let n = h.size();
    run_draws(cfg.samples, cfg.lanes, |i| {
        let mut rng = stream_rng(cfg.seed, i);
        let x = law.sample(n, &mut rng)?;
        homogeneous_sum(h, &x)
    })
}

pub fn mc_moments(h: &IndexFunction, law: &dyn SequenceLaw, cfg: &McConfig) -> Result<McResult> {
    Ok(McResult::from_samples(sample_homogeneous(h, law, cfg)?, cfg.keep_samples))
}

/// Requires the partition of `f` to carry the Poisson intensities of `law`
/// as cell masses, which is when `I_q(f)` and `Q_q(N, h, P)` coincide.
pub fn check_correspondence(f: &PiecewiseKernel, law: &dyn SequenceLaw) -> Result<()> {
    if let Some(lambda) = law.intensities(f.size()) {
        let lambda = lambda?;
        let masses = f.partition().masses();
        let tol = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        if !lambda.iter().zip(masses).all(|(&l, &m)| tol(l, m)) {
            return Err(Error::MassMismatch);
        }
    }
    Ok(())
}

/// Tamed kernel of `h` whose chaos integral equals `Q_q(N, h, X)`: masses are
/// the intensities for Poisson sequences and 1 otherwise.
pub fn tamed_kernel(h: &IndexFunction, law: &dyn SequenceLaw) -> Result<PiecewiseKernel> {
    let partition = match law.intensities(h.size()) {
        Some(lambda) => crate::kernel::Partition::with_masses(lambda?)?,
        None => crate::kernel::Partition::unit(h.size()),
    };
    from_index_function(h, &partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::canonical_family_q2;
    use crate::kernel::Partition;
    use crate::mc::{GaussianSeq, PoissonNormalized};

    #[test]
    fn zero_kernel_and_empty_runs() {
        let h = IndexFunction::zeros(2, 3).unwrap();
        let r = mc_moments(&h, &GaussianSeq, &McConfig::new(100, 1)).unwrap();
        assert_eq!(r.estimates, [0.0; 4]);
        assert!(mc_moments(&h, &GaussianSeq, &McConfig::new(0, 1)).is_err());
    }

    #[test]
    fn lanes_do_not_change_results() {
        let h = canonical_family_q2(6).unwrap();
        let p = PoissonNormalized::constant(1.0).unwrap();
        let a = mc_moments(&h, &p, &McConfig::new(5000, 3).lanes(1).keep_samples(true)).unwrap();
        let b = mc_moments(&h, &p, &McConfig::new(5000, 3).lanes(4).keep_samples(true)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples.as_ref().map(Vec::len), Some(5000));
        assert_eq!(a.record().names().next(), Some("mc_M"));
    }

    #[test]
    fn correspondence_masses() {
        let h = canonical_family_q2(3).unwrap();
        let p = PoissonNormalized::new(crate::mc::Intensities::PerIndex(vec![0.5, 1.0, 2.0])).unwrap();
        let f = tamed_kernel(&h, &p).unwrap();
        assert!(check_correspondence(&f, &p).is_ok());
        let unit = from_index_function(&h, &Partition::unit(3)).unwrap();
        assert!(matches!(check_correspondence(&unit, &p), Err(Error::MassMismatch)));
        assert!(check_correspondence(&unit, &GaussianSeq).is_ok());
    }
}
