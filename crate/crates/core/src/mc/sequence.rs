use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::kernel::Partition;
use crate::{Error, Result};

/// Highest raw moment available from any law.
pub const MAX_MOMENT: usize = 8;

/// An independent, centred, unit-variance sequence `X_1, X_2, …`.
pub trait SequenceLaw: Send + Sync {
    fn name(&self) -> String;
    /// Draws `X_1..X_n`.
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Result<Vec<f64>>;
    /// `E[X_i^k]` for `k = 1..=up_to`; `index` is zero-based.
    fn raw_moments(&self, index: usize, up_to: usize) -> Result<Vec<f64>>;
    /// Poisson intensities of the first `n` terms, when the law is one.
    fn intensities(&self, _n: usize) -> Option<Result<Vec<f64>>> {
        None
    }
}

impl fmt::Debug for dyn SequenceLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn check_up_to(up_to: usize) -> Result<()> {
    if up_to > MAX_MOMENT {
        return Err(Error::InvalidParameter(format!("raw moments are available up to order {MAX_MOMENT}")));
    }
    Ok(())
}

/// Raw moments from cumulants `κ_1..κ_n` (index 0 is `κ_1`), including `m_0 = 1`.
pub fn moments_from_cumulants(kappa: &[f64]) -> Vec<f64> {
    let n = kappa.len();
    let mut m = vec![1.0; n + 1];
    for j in 1..=n {
        m[j] = (1..=j)
            .map(|k| crate::combinatorics::binomial_f64(j - 1, k - 1) * kappa[k - 1] * m[j - k])
            .sum();
    }
    m
}

/// Poisson intensities: one value for the whole sequence or one per index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Intensities {
    Constant(f64),
    PerIndex(Vec<f64>),
}

impl Intensities {
    pub fn get(&self, i: usize) -> Result<f64> {
        match self {
            Intensities::Constant(l) => Ok(*l),
            Intensities::PerIndex(v) => v.get(i).copied().ok_or_else(|| {
                Error::Dimension(format!("index {i} beyond the {} listed intensities", v.len()))
            }),
        }
    }

    /// `inf λ_i`.
    pub fn alpha(&self) -> f64 {
        match self {
            Intensities::Constant(l) => *l,
            Intensities::PerIndex(v) => v.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

/// `P_i = (Po(λ_i) − λ_i)/√λ_i`.
#[derive(Debug, Clone)]
pub struct PoissonNormalized {
    lambda: Intensities,
}

impl PoissonNormalized {
    pub fn new(lambda: Intensities) -> Result<Self> {
        let ok = |l: f64| l.is_finite() && l > 0.0;
        let valid = match &lambda {
            Intensities::Constant(l) => ok(*l),
            Intensities::PerIndex(v) => !v.is_empty() && v.iter().all(|&l| ok(l)),
        };
        if !valid {
            return Err(Error::InvalidParameter("Poisson intensities must be positive and finite".into()));
        }
        Ok(Self { lambda })
    }

    pub fn constant(lambda: f64) -> Result<Self> {
        Self::new(Intensities::Constant(lambda))
    }

    pub fn lambda(&self) -> &Intensities {
        &self.lambda
    }

    /// Partition whose cell masses are the intensities, as the tamed
    /// correspondence requires.
    pub fn partition(&self, n: usize) -> Result<Partition> {
        let masses = (0..n).map(|i| self.lambda.get(i)).collect::<Result<Vec<_>>>()?;
        Partition::new(masses, 0.5 * self.lambda.alpha())
    }
}

impl SequenceLaw for PoissonNormalized {
    fn name(&self) -> String {
        match &self.lambda {
            Intensities::Constant(l) => format!("poisson(lambda={l})"),
            Intensities::PerIndex(v) => format!("poisson(lambda=[{} values])", v.len()),
        }
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        let mut cached: Option<(f64, Poisson<f64>)> = None;
        for i in 0..n {
            let l = self.lambda.get(i)?;
            let dist = match cached {
                Some((cl, d)) if cl == l => d,
                _ => {
                    let d = Poisson::new(l).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                    cached = Some((l, d));
                    d
                }
            };
            let k: f64 = dist.sample(rng);
            out.push((k - l) / l.sqrt());
        }
        Ok(out)
    }

    fn raw_moments(&self, index: usize, up_to: usize) -> Result<Vec<f64>> {
        check_up_to(up_to)?;
        let l = self.lambda.get(index)?;
        // cumulants of the standardized variable: 0, 1, λ^{1−k/2}
        let kappa: Vec<f64> = (1..=up_to)
            .map(|k| match k {
                1 => 0.0,
                2 => 1.0,
                _ => l.powf(1.0 - k as f64 / 2.0),
            })
            .collect();
        Ok(moments_from_cumulants(&kappa)[1..].to_vec())
    }

    fn intensities(&self, n: usize) -> Option<Result<Vec<f64>>> {
        Some((0..n).map(|i| self.lambda.get(i)).collect())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianSeq;

impl SequenceLaw for GaussianSeq {
    fn name(&self) -> String {
        "gaussian".into()
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        Ok((0..n).map(|_| StandardNormal.sample(rng)).collect())
    }

    fn raw_moments(&self, _index: usize, up_to: usize) -> Result<Vec<f64>> {
        check_up_to(up_to)?;
        let mut m = vec![1.0, 0.0];
        for k in 2..=up_to {
            m.push((k - 1) as f64 * m[k - 2]);
        }
        Ok(m[1..=up_to].to_vec())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rademacher;

impl SequenceLaw for Rademacher {
    fn name(&self) -> String {
        "rademacher".into()
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        Ok((0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect())
    }

    fn raw_moments(&self, _index: usize, up_to: usize) -> Result<Vec<f64>> {
        check_up_to(up_to)?;
        Ok((1..=up_to).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect())
    }
}

type Sampler = Arc<dyn Fn(&mut dyn RngCore) -> f64 + Send + Sync>;

/// A user-supplied i.i.d. law with an optional raw-moment table
/// `E[X], E[X²], …`.
#[derive(Clone)]
pub struct CustomLaw {
    name: String,
    sampler: Sampler,
    moments: Option<Vec<f64>>,
}

impl CustomLaw {
    pub fn new(
        name: &str,
        sampler: impl Fn(&mut dyn RngCore) -> f64 + Send + Sync + 'static,
        moments: Option<Vec<f64>>,
    ) -> Result<Self> {
        if let Some(m) = &moments {
            let centred = m.first().is_none_or(|v| v.abs() < 1e-12);
            let unit = m.get(1).is_none_or(|v| (v - 1.0).abs() < 1e-12);
            if !(centred && unit) {
                return Err(Error::InvalidParameter(format!("law {name:?} must be centred with unit variance")));
            }
        }
        Ok(Self { name: name.to_string(), sampler: Arc::new(sampler), moments })
    }
}

impl SequenceLaw for CustomLaw {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        Ok((0..n).map(|_| (self.sampler)(rng)).collect())
    }

    fn raw_moments(&self, _index: usize, up_to: usize) -> Result<Vec<f64>> {
        check_up_to(up_to)?;
        let table = self.moments.as_ref().ok_or_else(|| Error::MissingMoments(self.name.clone()))?;
        if table.len() < up_to {
            return Err(Error::MissingMoments(format!("{}: {} of {up_to} moments listed", self.name, table.len())));
        }
        Ok(table[..up_to].to_vec())
    }
}

/// Serializable description of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    PoissonNormalized {
        #[serde(default = "unit_intensity")]
        lambda: Intensities,
    },
    Gaussian,
    Rademacher,
    /// A law registered under `name`.
    Custom { name: String },
}

fn unit_intensity() -> Intensities {
    Intensities::Constant(1.0)
}

impl Default for SequenceSpec {
    fn default() -> Self {
        SequenceSpec::PoissonNormalized { lambda: unit_intensity() }
    }
}

/// Laws available to [`SequenceSpec::Custom`].
#[derive(Default, Clone)]
pub struct SequenceRegistry {
    custom: BTreeMap<String, Arc<dyn SequenceLaw>>,
}

impl SequenceRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, law: Arc<dyn SequenceLaw>) {
        self.custom.insert(name.to_string(), law);
    }

    pub fn names(&self) -> Vec<&str> {
        self.custom.keys().map(String::as_str).collect()
    }

    pub fn resolve(&self, spec: &SequenceSpec) -> Result<Arc<dyn SequenceLaw>> {
        Ok(match spec {
            SequenceSpec::PoissonNormalized { lambda } => Arc::new(PoissonNormalized::new(lambda.clone())?),
            SequenceSpec::Gaussian => Arc::new(GaussianSeq),
            SequenceSpec::Rademacher => Arc::new(Rademacher),
            SequenceSpec::Custom { name } => self
                .custom
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnknownSequence(name.clone()))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn moment_tables() {
        assert_eq!(GaussianSeq.raw_moments(0, 8).unwrap(), vec![0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0]);
        assert_eq!(Rademacher.raw_moments(3, 4).unwrap(), vec![0.0, 1.0, 0.0, 1.0]);
        let p = PoissonNormalized::constant(1.0).unwrap();
        let m = p.raw_moments(0, 8).unwrap();
        for (a, b) in m.iter().zip([0.0, 1.0, 1.0, 4.0, 11.0, 41.0, 162.0, 715.0]) {
            assert!((a - b).abs() < 1e-12 * b.max(1.0), "{m:?}");
        }
        let p = PoissonNormalized::constant(2.5).unwrap();
        assert!((p.raw_moments(0, 4).unwrap()[3] - (3.0 + 1.0 / 2.5)).abs() < 1e-14);
        assert!(GaussianSeq.raw_moments(0, 9).is_err());
    }

    #[test]
    fn poisson_rules() {
        assert!(PoissonNormalized::constant(0.0).is_err());
        assert!(PoissonNormalized::new(Intensities::PerIndex(vec![])).is_err());
        let p = PoissonNormalized::new(Intensities::PerIndex(vec![1.0, 2.0])).unwrap();
        assert!(p.sample(3, &mut stream_rng(1, 0)).is_err());
        assert_eq!(p.partition(2).unwrap().masses(), &[1.0, 2.0]);
        assert_eq!(p.intensities(2).unwrap().unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn custom_laws() {
        let law = CustomLaw::new("coin", |r| if r.random::<bool>() { 1.0 } else { -1.0 }, Some(vec![0.0, 1.0, 0.0, 1.0])).unwrap();
        assert_eq!(law.raw_moments(0, 4).unwrap(), vec![0.0, 1.0, 0.0, 1.0]);
        assert!(matches!(law.raw_moments(0, 5), Err(Error::MissingMoments(_))));
        let bare = CustomLaw::new("bare", |_| 0.0, None).unwrap();
        assert!(matches!(bare.raw_moments(0, 2), Err(Error::MissingMoments(_))));
        assert!(CustomLaw::new("biased", |_| 1.0, Some(vec![1.0, 1.0])).is_err());

        let mut reg = SequenceRegistry::new();
        reg.register("coin", Arc::new(law));
        let spec = SequenceSpec::Custom { name: "coin".into() };
        assert_eq!(reg.resolve(&spec).unwrap().name(), "coin");
        assert!(matches!(reg.resolve(&SequenceSpec::Custom { name: "x".into() }), Err(Error::UnknownSequence(_))));
        assert_eq!(reg.resolve(&SequenceSpec::default()).unwrap().name(), "poisson(lambda=1)");
    }

    #[test]
    fn sampled_sequences_are_standardized() {
        for law in [
            Arc::new(PoissonNormalized::constant(0.7).unwrap()) as Arc<dyn SequenceLaw>,
            Arc::new(GaussianSeq),
            Arc::new(Rademacher),
        ] {
            let x = law.sample(200_000, &mut stream_rng(5, 0)).unwrap();
            let (m, se) = crate::stats::mean_and_se(&x);
            assert!(m.abs() < 5.0 * se, "{}", law.name());
            let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
            let (v, se) = crate::stats::mean_and_se(&sq);
            assert!((v - 1.0).abs() < 5.0 * se.max(1e-12), "{}", law.name());
        }
    }
}
