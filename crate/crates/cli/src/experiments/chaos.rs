use std::fs::File;
use std::io::BufReader;

use pchaos_core::chaos::{
    fourth_moment_gaussian, fourth_moment_poisson, report_record, second_moment, third_moment_gaussian,
    third_moment_poisson, ContractionEngine, DiagnosticsReport, MomentReport,
};
use pchaos_core::kernel::{read_kernel, write_kernel, PiecewiseKernel};
use pchaos_core::mc::{exact_moments_small, tamed_kernel, SequenceSpec};
use pchaos_core::record::Record;
use pchaos_core::rng::stream_rng;

use super::{family_index_function, sequence_label, Artifact, Context, Experiment};
use crate::config::Family;
use crate::output::Table;
use crate::CliError;

fn moment_report(spec: &SequenceSpec, e: &dyn ContractionEngine) -> Result<MomentReport, CliError> {
    Ok(match spec {
        SequenceSpec::Gaussian => MomentReport::gaussian(e)?,
        _ => MomentReport::poisson(e)?,
    })
}

pub struct DiagnosticsSequence;

impl DiagnosticsSequence {
    fn row(ctx: &Context<'_>, f: &PiecewiseKernel) -> Result<Record, CliError> {
        let e = ctx.engines.build(&ctx.cfg.engine, f)?;
        let m = moment_report(&ctx.cfg.sequence, e.as_ref())?;
        let d = DiagnosticsReport::compute(e.as_ref(), ctx.cfg.mode)?;
        Ok(report_record(&m, &d))
    }
}

impl Experiment for DiagnosticsSequence {
    fn name(&self) -> &'static str {
        "diagnostics-sequence"
    }

    /// One row per `N` for the family kernel, or one row for a kernel file.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let mut rows = Vec::new();
        if let Some(path) = &cfg.kernel {
            let f = read_kernel(BufReader::new(File::open(path)?))?;
            rows.push(Self::row(ctx, &f)?);
        } else {
            let law = ctx.law()?;
            for &n in &cfg.sizes {
                let seed = if cfg.family == Family::Random { ctx.row_seed(n, 1) } else { 0 };
                let mut rng = stream_rng(seed, 0);
                let h = family_index_function(cfg, n, &mut rng)?;
                rows.push(Self::row(ctx, &tamed_kernel(&h, law.as_ref())?)?);
            }
        }
        Ok(Artifact::Table(Table::new(rows)?))
    }
}

pub struct OracleCheck;

fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

impl Experiment for OracleCheck {
    fn name(&self) -> &'static str {
        "oracle-check"
    }

    /// Exact `E[Q^k]`, `k = 2, 3, 4`, against the moment formulas of the
    /// corresponding tamed kernel. The random family runs `samples` kernels
    /// per row; the fixed families run one.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let kernels = if cfg.family == Family::Random { cfg.samples } else { 1 };
        let closed_form = !matches!(cfg.sequence, SequenceSpec::Rademacher | SequenceSpec::Custom { .. });
        let mut rows = Vec::new();
        for &n in &cfg.sizes {
            let seed = ctx.row_seed(n, kernels);
            let mut gaps = [0.0f64; 3];
            let mut first = [f64::NAN; 4];
            for j in 0..kernels {
                let mut rng = stream_rng(seed, j as u64);
                let h = family_index_function(cfg, n, &mut rng)?;
                let law = ctx.law_for_kernel(n, &mut rng)?;
                let f = tamed_kernel(&h, law.as_ref())?;
                let e = ctx.engines.build(&cfg.engine, &f)?;
                let formula = if closed_form {
                    let (m3, m4) = match cfg.sequence {
                        SequenceSpec::Gaussian => (third_moment_gaussian(e.as_ref())?, fourth_moment_gaussian(e.as_ref())?),
                        _ => (third_moment_poisson(e.as_ref())?, fourth_moment_poisson(e.as_ref())?),
                    };
                    [second_moment(e.as_ref()), m3, m4]
                } else {
                    [second_moment(e.as_ref()), f64::NAN, f64::NAN]
                };
                for k in 0..3 {
                    let exact = exact_moments_small(&h, law.as_ref(), k + 2)?;
                    if !formula[k].is_nan() {
                        gaps[k] = gaps[k].max(rel_gap(exact, formula[k]));
                    }
                    if j == 0 && k > 0 {
                        first[2 * (k - 1)] = exact;
                        first[2 * (k - 1) + 1] = formula[k];
                    }
                }
            }
            if !closed_form {
                gaps[1] = f64::NAN;
                gaps[2] = f64::NAN;
            }
            let mut r = Record::new();
            r.push("q", cfg.q);
            r.push("N", n);
            r.push("sequence", sequence_label(&cfg.sequence));
            r.push("kernels", kernels);
            r.push("exact_m3", first[0]);
            r.push("formula_m3", first[1]);
            r.push("exact_m4", first[2]);
            r.push("formula_m4", first[3]);
            r.push("gap_m2", gaps[0]);
            r.push("gap_m3", gaps[1]);
            r.push("gap_m4", gaps[2]);
            r.push("max_rel_gap", gaps.iter().copied().fold(f64::NAN, f64::max));
            rows.push(r);
        }
        Ok(Artifact::Table(Table::new(rows)?))
    }
}

pub struct KernelExport;

impl Experiment for KernelExport {
    fn name(&self) -> &'static str {
        "kernel-export"
    }

    /// The tamed family kernel at the single configured size.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let [n] = cfg.sizes[..] else {
            return Err(CliError::Config("kernel-export takes exactly one size".into()));
        };
        let seed = ctx.row_seed(n, 1);
        let mut rng = stream_rng(seed, 0);
        let h = family_index_function(cfg, n, &mut rng)?;
        let law = ctx.law_for_kernel(n, &mut rng)?;
        let mut buf = Vec::new();
        write_kernel(&mut buf, &tamed_kernel(&h, law.as_ref())?)?;
        String::from_utf8(buf).map(Artifact::Text).map_err(|e| CliError::Internal(e.to_string()))
    }
}
