//! Seed-pinned batch experiments over `pchaos-core`, emitting CSV or JSON.

pub mod config;
pub mod experiments;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ExperimentConfig, ExperimentKind, Family, Format, Overrides};
pub use experiments::{Artifact, Context, Experiment, ExperimentRegistry};
pub use output::Table;

/// Directory used for outputs when no `out` path is configured.
pub const OUT_DIR_ENV: &str = "PCHAOS_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] pchaos_core::Error),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 2 for configuration errors, 3 for guard violations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use pchaos_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_guard() => 3,
            CliError::Core(E::Io(_) | E::NonFinite(_) | E::Convergence(_)) => 1,
            CliError::Core(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pchaos", version, about = "Seed-pinned chaos and U-statistic experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetrization identity, contraction inequalities, decomposition and A′ checks on random kernels.
    Identities(CommonArgs),
    /// Exact moments and diagnostics along a list of N.
    DiagnosticsSequence(CommonArgs),
    /// Monte Carlo of homogeneous sums with KS distance to the centred Gamma law.
    McGamma(CommonArgs),
    /// Exact combinatorial moments against the closed-form moments.
    OracleCheck(CommonArgs),
    /// Coupling gap between Poisson and classical U-statistics.
    UstatGap(CommonArgs),
    /// Gamma moment condition for Poisson U-statistics.
    UstatGamma(CommonArgs),
    /// Sampler, density and moment checks for the centred Gamma law.
    GammaSample(CommonArgs),
    /// Writes a family kernel in the flat text format.
    KernelExport(CommonArgs),
}

impl Command {
    fn split(self) -> (ExperimentKind, CommonArgs) {
        use ExperimentKind as K;
        match self {
            Command::Identities(a) => (K::Identities, a),
            Command::DiagnosticsSequence(a) => (K::DiagnosticsSequence, a),
            Command::McGamma(a) => (K::McGamma, a),
            Command::OracleCheck(a) => (K::OracleCheck, a),
            Command::UstatGap(a) => (K::UstatGap, a),
            Command::UstatGamma(a) => (K::UstatGamma, a),
            Command::GammaSample(a) => (K::GammaSample, a),
            Command::KernelExport(a) => (K::KernelExport, a),
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; defaults to `$PCHAOS_OUT_DIR/<kind>.<format>` or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for Monte Carlo draws (0 = all cores).
    #[arg(long)]
    lanes: Option<usize>,
    /// Contraction engine: dense, matrix-q2 or auto.
    #[arg(long)]
    engine: Option<String>,
    /// Draws per row, or kernels per row for randomized checks.
    #[arg(long)]
    samples: Option<usize>,
}

/// Parses arguments, runs one experiment and writes its artifact. Returns
/// the process exit code.
pub fn main_with<I, T>(args: I, log: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_command(cli.command, log) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            e.exit_code()
        }
    }
}

fn run_command(cmd: Command, log: &mut dyn Write) -> Result<(), CliError> {
    let (kind, args) = cmd.split();
    let text = match &args.config {
        Some(p) => Some(fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let flags = Overrides {
        seed: args.seed,
        out: args.out,
        format: args.format,
        lanes: args.lanes,
        engine: args.engine,
        samples: args.samples,
    };
    let cfg = ExperimentConfig::load(kind, text.as_deref(), flags)?;
    let artifact = run(&cfg, log)?;
    write_artifact(&cfg, &artifact)
}

/// Runs the experiment selected by `cfg.kind`.
pub fn run(cfg: &ExperimentConfig, log: &mut dyn Write) -> Result<Artifact, CliError> {
    let registry = ExperimentRegistry::builtin();
    let exp = registry
        .get(cfg.kind.name())
        .ok_or_else(|| CliError::Config(format!("no experiment named `{}`", cfg.kind)))?;
    let mut ctx = Context::new(cfg, log);
    exp.run(&mut ctx)
}

/// Destination of the artifact: `out`, else the environment directory,
/// else stdout (`None`).
pub fn output_path(cfg: &ExperimentConfig) -> Option<PathBuf> {
    cfg.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|d| {
            let ext = match cfg.kind {
                ExperimentKind::KernelExport => "txt",
                _ => cfg.format.extension(),
            };
            PathBuf::from(d).join(format!("{}.{ext}", cfg.kind))
        })
    })
}

pub fn write_artifact(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(), CliError> {
    match output_path(cfg) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let mut buf = Vec::new();
            artifact.write(cfg.format, &mut buf)?;
            fs::write(path, buf)?;
        }
        None => artifact.write(cfg.format, io::stdout().lock())?,
    }
    Ok(())
}
