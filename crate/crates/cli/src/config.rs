use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use pchaos_core::chaos::Mode;
use pchaos_core::mc::SequenceSpec;
use pchaos_core::ustat::Scaling;
use serde::Deserialize;

use crate::CliError;

/// Experiment kinds, one CLI subcommand each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Identities,
    DiagnosticsSequence,
    McGamma,
    OracleCheck,
    UstatGap,
    UstatGamma,
    GammaSample,
    KernelExport,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Identities,
        ExperimentKind::DiagnosticsSequence,
        ExperimentKind::McGamma,
        ExperimentKind::OracleCheck,
        ExperimentKind::UstatGap,
        ExperimentKind::UstatGamma,
        ExperimentKind::GammaSample,
        ExperimentKind::KernelExport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Identities => "identities",
            ExperimentKind::DiagnosticsSequence => "diagnostics-sequence",
            ExperimentKind::McGamma => "mc-gamma",
            ExperimentKind::OracleCheck => "oracle-check",
            ExperimentKind::UstatGap => "ustat-gap",
            ExperimentKind::UstatGamma => "ustat-gamma",
            ExperimentKind::GammaSample => "gamma-sample",
            ExperimentKind::KernelExport => "kernel-export",
        }
    }

    fn default_sizes(self) -> Vec<usize> {
        match self {
            ExperimentKind::Identities => vec![2, 3, 4],
            ExperimentKind::DiagnosticsSequence | ExperimentKind::McGamma => vec![8, 32, 128],
            ExperimentKind::OracleCheck | ExperimentKind::KernelExport => vec![4],
            ExperimentKind::UstatGap | ExperimentKind::UstatGamma => vec![100, 400, 1600],
            ExperimentKind::GammaSample => vec![],
        }
    }

    fn default_samples(self) -> usize {
        match self {
            ExperimentKind::Identities => 100,
            ExperimentKind::McGamma => 200_000,
            ExperimentKind::OracleCheck | ExperimentKind::DiagnosticsSequence | ExperimentKind::KernelExport => 1,
            ExperimentKind::UstatGap => 2000,
            ExperimentKind::UstatGamma => 10_000,
            ExperimentKind::GammaSample => 100_000,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Index functions an experiment can be run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `1(i ≠ j)/N`, order 2.
    Canonical,
    /// Symmetrized square of the canonical order-2 function, order 4.
    PairSquare,
    /// Uniform random symmetric entries.
    Random,
}

/// File contents: every field optional, unknown keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawConfig {
    kind: Option<ExperimentKind>,
    q: Option<usize>,
    sizes: Option<Vec<usize>>,
    sequence: Option<SequenceSpec>,
    samples: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    lanes: Option<usize>,
    engine: Option<String>,
    family: Option<Family>,
    mode: Option<Mode>,
    nu: Option<f64>,
    lambda_range: Option<[f64; 2]>,
    kernel: Option<PathBuf>,
    resolution: Option<usize>,
    scaling: Option<Scaling>,
    evaluator: Option<String>,
    sample_dir: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub lanes: Option<usize>,
    pub engine: Option<String>,
    pub samples: Option<usize>,
}

/// A fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub q: usize,
    /// `N` values for chaos experiments, `n` values for U-statistics.
    pub sizes: Vec<usize>,
    pub sequence: SequenceSpec,
    /// Draws per row, or random kernels per row for `identities` and
    /// `oracle-check` with the random family.
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Worker threads for Monte Carlo draws; 0 uses the global pool.
    pub lanes: usize,
    pub engine: String,
    pub family: Family,
    pub mode: Mode,
    pub nu: Option<f64>,
    /// Per-kernel intensities drawn uniformly from this range.
    pub lambda_range: Option<[f64; 2]>,
    pub kernel: Option<PathBuf>,
    pub resolution: usize,
    pub scaling: Scaling,
    pub evaluator: String,
    pub sample_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Merges an optional TOML document with flag overrides and validates.
    pub fn load(kind: ExperimentKind, toml_text: Option<&str>, flags: Overrides) -> Result<Self, CliError> {
        let raw: RawConfig = match toml_text {
            Some(text) => toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?,
            None => RawConfig::default(),
        };
        if let Some(file_kind) = raw.kind {
            if file_kind != kind {
                return Err(CliError::Config(format!("config is for `{file_kind}`, command is `{kind}`")));
            }
        }
        let q = raw.q.unwrap_or(match raw.family {
            Some(Family::PairSquare) => 4,
            _ => 2,
        });
        let family = raw.family.unwrap_or(match q {
            2 => Family::Canonical,
            4 => Family::PairSquare,
            _ => Family::Random,
        });
        let cfg = Self {
            kind,
            q,
            sizes: raw.sizes.unwrap_or_else(|| kind.default_sizes()),
            sequence: raw.sequence.unwrap_or_default(),
            samples: flags.samples.or(raw.samples).unwrap_or_else(|| kind.default_samples()),
            seed: flags
                .seed
                .or(raw.seed)
                .ok_or_else(|| CliError::Config("a seed is required (`seed` in the file or --seed)".into()))?,
            out: flags.out.or(raw.out),
            format: flags.format.or(raw.format).unwrap_or_default(),
            lanes: flags.lanes.or(raw.lanes).unwrap_or(0),
            engine: flags.engine.or(raw.engine).unwrap_or_else(|| "auto".into()),
            family,
            mode: raw.mode.unwrap_or_default(),
            nu: raw.nu,
            lambda_range: raw.lambda_range,
            kernel: raw.kernel,
            resolution: raw.resolution.unwrap_or(2),
            scaling: raw.scaling.unwrap_or(Scaling::Natural),
            evaluator: raw.evaluator.unwrap_or_else(|| "cell-counts".into()),
            sample_dir: raw.sample_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.q == 0 {
            return bad("q must be positive".into());
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        if self.resolution == 0 {
            return bad("resolution must be positive".into());
        }
        if self.sizes.contains(&0) {
            return bad("sizes must be positive".into());
        }
        if let Some(nu) = self.nu {
            if !(nu.is_finite() && nu > 0.0) {
                return bad(format!("nu must be positive, got {nu}"));
            }
        }
        if let Some([lo, hi]) = self.lambda_range {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return bad(format!("lambda-range must satisfy 0 < lo < hi, got [{lo}, {hi}]"));
            }
        }
        let needs_sizes = !matches!(self.kind, ExperimentKind::GammaSample)
            && !(self.kernel.is_some() && matches!(self.kind, ExperimentKind::DiagnosticsSequence | ExperimentKind::UstatGap | ExperimentKind::UstatGamma));
        if needs_sizes && self.sizes.is_empty() {
            return bad(format!("`{}` needs a nonempty sizes list", self.kind));
        }
        match (self.family, self.q) {
            (Family::Canonical, q) if q != 2 => bad(format!("the canonical family has order 2, not {q}")),
            (Family::PairSquare, q) if q != 4 => bad(format!("the pair-square family has order 4, not {q}")),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_and_seed_is_required() {
        let text = "seed = 1\nsamples = 10\nformat = \"json\"\nsizes = [4, 8]\n";
        let cfg = ExperimentConfig::load(
            ExperimentKind::McGamma,
            Some(text),
            Overrides { seed: Some(9), ..Default::default() },
        )
        .unwrap();
        assert_eq!((cfg.seed, cfg.samples, cfg.format), (9, 10, Format::Json));
        assert_eq!(cfg.sizes, vec![4, 8]);
        assert_eq!(cfg.family, Family::Canonical);
        assert!(matches!(
            ExperimentConfig::load(ExperimentKind::McGamma, None, Overrides::default()),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn rejects_bad_values() {
        let seed = Overrides { seed: Some(1), ..Default::default() };
        for text in [
            "samples = 0",
            "sizes = [0]",
            "nu = -1.0",
            "q = 4\nfamily = \"canonical\"",
            "kind = \"mc-gamma\"",
            "unknown = 3",
            "lambda-range = [2.0, 1.0]",
        ] {
            let r = ExperimentConfig::load(ExperimentKind::OracleCheck, Some(text), seed.clone());
            assert!(matches!(r, Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn sequence_and_scaling_parse() {
        let text = "seed = 3\nscaling = \"verbatim\"\n[sequence]\nkind = \"poisson_normalized\"\nlambda = [1.0, 2.0]\n";
        let cfg = ExperimentConfig::load(ExperimentKind::UstatGap, Some(text), Overrides::default()).unwrap();
        assert_eq!(cfg.scaling, Scaling::Verbatim);
        assert!(matches!(cfg.sequence, SequenceSpec::PoissonNormalized { .. }));
        assert_eq!(cfg.sizes, vec![100, 400, 1600]);
    }
}
