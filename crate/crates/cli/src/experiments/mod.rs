//! Experiment implementations, selected by name through [`ExperimentRegistry`].

mod chaos;
mod identities;
mod montecarlo;
mod ustat;

use std::io::Write;
use std::sync::Arc;

use pchaos_core::chaos::{canonical_family_q2, pair_square_family_q4, EngineRegistry};
use pchaos_core::kernel::{IndexFunction, SignMode};
use pchaos_core::mc::{Intensities, PoissonNormalized, SequenceLaw, SequenceRegistry, SequenceSpec};
use pchaos_core::rng::derive_seed;
use pchaos_core::ustat::EvaluatorRegistry;
use rand::Rng;

use crate::config::{ExperimentConfig, Family, Format};
use crate::output::Table;
use crate::CliError;

/// What an experiment produces.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Table(Table),
    /// Preformatted text written verbatim regardless of the format.
    Text(String),
}

impl Artifact {
    pub fn write<W: Write>(&self, format: Format, mut w: W) -> Result<(), CliError> {
        match self {
            Artifact::Table(t) => t.write(format, w),
            Artifact::Text(s) => Ok(w.write_all(s.as_bytes())?),
        }
    }

    pub fn table(&self) -> Option<&Table> {
        match self {
            Artifact::Table(t) => Some(t),
            Artifact::Text(_) => None,
        }
    }
}

/// Registries and log sink shared by experiments.
pub struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub engines: EngineRegistry,
    pub sequences: SequenceRegistry,
    pub evaluators: EvaluatorRegistry,
    pub log: &'a mut dyn Write,
}

impl<'a> Context<'a> {
    pub fn new(cfg: &'a ExperimentConfig, log: &'a mut dyn Write) -> Self {
        Self {
            cfg,
            engines: EngineRegistry::builtin(),
            sequences: SequenceRegistry::new(),
            evaluators: EvaluatorRegistry::builtin(),
            log,
        }
    }

    /// Seed of the row labelled `size`; draw `i` of the row uses stream `i`.
    /// The derivation is logged so every run can be audited.
    pub fn row_seed(&mut self, size: usize, draws: usize) -> u64 {
        let seed = derive_seed(self.cfg.seed, size as u64);
        let _ = writeln!(
            self.log,
            "stream {} size={size} seed={} derived={seed:#018x} streams=0..{draws}",
            self.cfg.kind, self.cfg.seed
        );
        seed
    }

    pub fn law(&self) -> Result<Arc<dyn SequenceLaw>, CliError> {
        Ok(self.sequences.resolve(&self.cfg.sequence)?)
    }

    /// The configured law, with Poisson intensities redrawn from
    /// `lambda_range` when one is set.
    pub fn law_for_kernel<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Arc<dyn SequenceLaw>, CliError> {
        match (&self.cfg.sequence, self.cfg.lambda_range) {
            (SequenceSpec::PoissonNormalized { .. }, Some([lo, hi])) => {
                let lambda = (0..n).map(|_| rng.random_range(lo..hi)).collect();
                Ok(Arc::new(PoissonNormalized::new(Intensities::PerIndex(lambda))?))
            }
            _ => self.law(),
        }
    }
}

/// Short label of the configured sequence.
pub fn sequence_label(spec: &SequenceSpec) -> String {
    match spec {
        SequenceSpec::PoissonNormalized { .. } => "poisson_normalized".into(),
        SequenceSpec::Gaussian => "gaussian".into(),
        SequenceSpec::Rademacher => "rademacher".into(),
        SequenceSpec::Custom { name } => format!("custom:{name}"),
    }
}

/// Index function of the configured family at size `n`.
pub fn family_index_function<R: Rng>(cfg: &ExperimentConfig, n: usize, rng: &mut R) -> Result<IndexFunction, CliError> {
    Ok(match cfg.family {
        Family::Canonical => canonical_family_q2(n)?,
        Family::PairSquare => pair_square_family_q4(&canonical_family_q2(n)?)?,
        Family::Random => IndexFunction::random(cfg.q, n, rng, SignMode::Signed)?,
    })
}

/// Stream reserved for drawing a random kernel; draw streams start at 0.
pub const KERNEL_STREAM: u64 = u64::MAX;

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError>;
}

/// Experiments selectable by name.
pub struct ExperimentRegistry {
    entries: Vec<Box<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(identities::Identities));
        r.register(Box::new(chaos::DiagnosticsSequence));
        r.register(Box::new(chaos::OracleCheck));
        r.register(Box::new(chaos::KernelExport));
        r.register(Box::new(montecarlo::McGamma));
        r.register(Box::new(montecarlo::GammaSample));
        r.register(Box::new(ustat::UstatGap));
        r.register(Box::new(ustat::UstatGamma));
        r
    }

    /// Adds or replaces an experiment.
    pub fn register(&mut self, e: Box<dyn Experiment>) {
        self.entries.retain(|x| x.name() != e.name());
        self.entries.push(e);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
