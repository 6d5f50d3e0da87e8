use std::fs::File;
use std::io::BufReader;

use pchaos_core::chaos::second_moment;
use pchaos_core::mc::McConfig;
use pchaos_core::ustat::{coupled_gap, gamma_condition_estimate, moment_ratio, read_grid_kernel, GridKernel, UstatSampler};

use super::montecarlo::{target_law, target_statistic};
use super::{Artifact, Context, Experiment};
use crate::output::Table;
use crate::CliError;

/// Slack factor of the `O(n^{-1/2})` envelope.
pub const RATE_SLACK: f64 = 3.0;

/// The kernel file if configured, else the Pearson kernel `2g(I − P)`.
fn grid_kernel(ctx: &Context<'_>) -> Result<GridKernel, CliError> {
    Ok(match &ctx.cfg.kernel {
        Some(path) => read_grid_kernel(BufReader::new(File::open(path)?))?,
        None => GridKernel::pearson(ctx.cfg.resolution)?,
    })
}

fn sizes(ctx: &Context<'_>, k: &GridKernel) -> Result<Vec<usize>, CliError> {
    if let Some(&n) = ctx.cfg.sizes.iter().find(|&&n| n < k.order()) {
        return Err(CliError::Config(format!("n = {n} is below the kernel order {}", k.order())));
    }
    Ok(ctx.cfg.sizes.clone())
}

pub struct UstatGap;

impl Experiment for UstatGap {
    fn name(&self) -> &'static str {
        "ustat-gap"
    }

    /// `E[(U_n − Û_n)²]` per `n`, its ratio to the first row and the
    /// envelope `RATE_SLACK·(n/n₀)^{-1/4}`.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let k = grid_kernel(ctx)?;
        let ns = sizes(ctx, &k)?;
        let mut rows = Vec::new();
        let mut first: Option<(usize, f64)> = None;
        for n in ns {
            let seed = ctx.row_seed(n, cfg.samples);
            let sampler = UstatSampler::new(&k, ctx.evaluators.get(&cfg.evaluator)?, cfg.scaling)?;
            let g = coupled_gap(&sampler, n, &McConfig::new(cfg.samples, seed).lanes(cfg.lanes))?;
            let (n0, g0) = *first.get_or_insert((n, g.mean));
            let ratio = g.mean / g0;
            let envelope = RATE_SLACK * (n as f64 / n0 as f64).powf(-0.25);
            let mut r = g.record();
            r.push("scaling", cfg.scaling.to_string());
            r.push("defect", k.degeneracy_defect());
            r.push("ratio_to_first", ratio);
            r.push("envelope", envelope);
            r.push("within_envelope", ratio < envelope);
            rows.push(r);
        }
        Ok(Artifact::Table(Table::new(rows)?))
    }
}

pub struct UstatGamma;

impl Experiment for UstatGamma {
    fn name(&self) -> &'static str {
        "ustat-gamma"
    }

    /// Monte Carlo moments of `U_n` and `E[U⁴] − 12E[U³]` per `n`, next to
    /// the exact second moment of the equivalent tamed kernel, the fourth
    /// moment ratio and the target statistic.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let k = grid_kernel(ctx)?;
        let ns = sizes(ctx, &k)?;
        let mut rows = Vec::new();
        for n in ns {
            let seed = ctx.row_seed(n, cfg.samples);
            let sampler = UstatSampler::new(&k, ctx.evaluators.get(&cfg.evaluator)?, cfg.scaling)?;
            let est = gamma_condition_estimate(&sampler, n, &McConfig::new(cfg.samples, seed).lanes(cfg.lanes))?;
            let f = k.to_tamed_kernel(n, cfg.scaling)?;
            let exact_m2 = second_moment(ctx.engines.build(&cfg.engine, &f)?.as_ref());
            let nu = cfg.nu.unwrap_or(est.nu_hat);
            let mut r = est.record();
            r.push("scaling", cfg.scaling.to_string());
            r.push("exact_m2", exact_m2);
            r.push("moment_ratio", moment_ratio(&k, n));
            r.push("target_statistic", target_statistic(&target_law(cfg.mode, nu)?));
            rows.push(r);
        }
        Ok(Artifact::Table(Table::new(rows)?))
    }
}
