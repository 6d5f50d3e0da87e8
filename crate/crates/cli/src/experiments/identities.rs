use pchaos_core::chaos::{
    EngineRegistry,
    a_prime, contraction_inequality_checks, fourth_moment_poisson, symmetrization_identity_check,
    t_decomposition, third_moment_poisson,
};
use pchaos_core::kernel::{random_partition, random_symmetric, PiecewiseKernel, SignMode};
use pchaos_core::mc::run_draws;
use pchaos_core::record::Record;
use pchaos_core::rng::stream_rng;
use pchaos_core::Result;

use super::{Artifact, Context, Experiment};
use crate::output::Table;
use crate::CliError;

/// Relative tolerance granted to `A′ ≥ 0`.
pub const A_PRIME_SLACK: f64 = 1e-12;
/// Largest order whose `0`-contraction the exhaustive symmetrizer accepts.
const IDENTITY_MAX_ORDER: usize = 3;

pub struct Identities;

#[derive(Default)]
struct KernelOutcome {
    identity_gap: f64,
    upper: usize,
    upper_failed: usize,
    reverse: usize,
    reverse_failed: usize,
    t_residual: f64,
    a_prime_rel: f64,
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

impl Identities {
    fn one(engines: &EngineRegistry, engine: &str, f: &PiecewiseKernel, g: &PiecewiseKernel) -> Result<KernelOutcome> {
        let q = f.order();
        let mut out = KernelOutcome { identity_gap: f64::NAN, t_residual: f64::NAN, a_prime_rel: f64::NAN, ..Default::default() };
        if q <= IDENTITY_MAX_ORDER {
            let id = symmetrization_identity_check(f)?;
            out.identity_gap = rel_gap(id.lhs, id.rhs);
        }
        for c in contraction_inequality_checks(f)? {
            if c.name == "contraction_upper" {
                out.upper += 1;
                out.upper_failed += usize::from(!c.satisfied);
            }
        }
        for c in contraction_inequality_checks(g)? {
            if c.name == "contraction_reverse" {
                out.reverse += 1;
                out.reverse_failed += usize::from(!c.satisfied);
            }
        }
        if q.is_multiple_of(2) {
            let e = engines.build(engine, f)?;
            out.t_residual = t_decomposition(e.as_ref())?.residual.abs();
            let e = engines.build(engine, g)?;
            let scale = fourth_moment_poisson(e.as_ref())?.abs() + 12.0 * third_moment_poisson(e.as_ref())?.abs();
            out.a_prime_rel = a_prime(e.as_ref())? / scale;
        }
        Ok(out)
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() {
        b
    } else {
        a.max(b)
    }
}

fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() {
        b
    } else {
        a.min(b)
    }
}

impl Experiment for Identities {
    fn name(&self) -> &'static str {
        "identities"
    }

    /// Per size `N`: `samples` random kernels on random partitions. Signed
    /// kernels feed the identity, the upper inequalities and the
    /// decomposition; sign-constant kernels (alternating sign) feed the
    /// reverse inequalities and `A′`.
    fn run(&self, ctx: &mut Context<'_>) -> std::result::Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let q = cfg.q;
        let mut rows = Vec::new();
        for &n in &cfg.sizes {
            let seed = ctx.row_seed(n, cfg.samples);
            let engines = &ctx.engines;
            let outcomes = run_draws(cfg.samples, cfg.lanes, |k| {
                let mut rng = stream_rng(seed, k);
                let p = random_partition(n, 0.2, 2.0, &mut rng)?;
                let f = random_symmetric(q, &p, &mut rng, SignMode::Signed)?;
                let sign = if k % 2 == 0 { SignMode::NonNegative } else { SignMode::NonPositive };
                let g = random_symmetric(q, &p, &mut rng, sign)?;
                Identities::one(engines, &cfg.engine, &f, &g)
            })?;
            let mut r = Record::new();
            r.push("q", q);
            r.push("N", n);
            r.push("kernels", outcomes.len());
            let fold = |f: fn(&KernelOutcome) -> f64, agg: fn(f64, f64) -> f64| {
                outcomes.iter().map(f).fold(f64::NAN, agg)
            };
            let count = |f: fn(&KernelOutcome) -> usize| outcomes.iter().map(f).sum::<usize>();
            r.push("identity_max_rel_gap", fold(|o| o.identity_gap, nan_max));
            r.push("upper_checks", count(|o| o.upper));
            r.push("upper_violations", count(|o| o.upper_failed));
            r.push("reverse_checks", count(|o| o.reverse));
            r.push("reverse_violations", count(|o| o.reverse_failed));
            r.push("t_max_rel_residual", fold(|o| o.t_residual, nan_max));
            let a_min = fold(|o| o.a_prime_rel, nan_min);
            r.push("a_prime_min_rel", a_min);
            r.push(
                "a_prime_violations",
                outcomes.iter().filter(|o| o.a_prime_rel < -A_PRIME_SLACK).count(),
            );
            rows.push(r);
        }
        Ok(Artifact::Table(Table::new(rows)?))
    }
}
