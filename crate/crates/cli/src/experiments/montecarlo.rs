use std::fs;
use std::io::Write;

use pchaos_core::chaos::{ContractionEngine, MomentReport};
use pchaos_core::chaos::Mode;
use pchaos_core::gamma::GammaLaw;
use pchaos_core::mc::{ks_distance, mc_moments, tamed_kernel, McConfig, SequenceSpec};
use pchaos_core::record::Record;
use pchaos_core::rng::stream_rng;
use pchaos_core::stats::power_moments;

use super::{family_index_function, sequence_label, Artifact, Context, Experiment, KERNEL_STREAM};
use crate::output::Table;
use crate::CliError;

/// Centred Gamma law or its reflection, by mode.
pub fn target_law(mode: Mode, nu: f64) -> Result<GammaLaw, CliError> {
    Ok(match mode {
        Mode::Gamma => GammaLaw::centred(nu)?,
        Mode::Reflected => GammaLaw::reflected(nu)?,
    })
}

/// `E[Y⁴] − 12E[Y³]` under the target law.
pub fn target_statistic(law: &GammaLaw) -> f64 {
    let m = law.moments();
    m[3] - 12.0 * m[2]
}

fn exact_report(spec: &SequenceSpec, e: &dyn ContractionEngine) -> pchaos_core::Result<MomentReport> {
    match spec {
        SequenceSpec::Gaussian => MomentReport::gaussian(e),
        _ => MomentReport::poisson(e),
    }
}

pub struct McGamma;

impl Experiment for McGamma {
    fn name(&self) -> &'static str {
        "mc-gamma"
    }

    /// Per `N`: `samples` draws of `Q_q(N, h, X)`, sample moments, the exact
    /// moments of the tamed kernel when the size guard allows, and the KS
    /// distance to the target law. Without a configured `ν` the exact (or
    /// else sample) variance fixes `ν = m2/2`.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let law = ctx.law()?;
        let mut rows = Vec::new();
        for &n in &cfg.sizes {
            let seed = ctx.row_seed(n, cfg.samples);
            let h = family_index_function(cfg, n, &mut stream_rng(seed, KERNEL_STREAM))?;
            let exact = match (cfg.sequence.clone(), tamed_kernel(&h, law.as_ref())) {
                (SequenceSpec::Rademacher | SequenceSpec::Custom { .. }, _) => None,
                (spec, f) => match ctx.engines.build(&cfg.engine, &f?).and_then(|e| exact_report(&spec, e.as_ref())) {
                    Ok(m) => Some(m),
                    Err(e) if e.is_guard() => None,
                    Err(e) => return Err(e.into()),
                },
            };
            let mc = mc_moments(&h, law.as_ref(), &McConfig::new(cfg.samples, seed).lanes(cfg.lanes).keep_samples(true))?;
            let samples = mc.samples.as_deref().unwrap_or_default();
            let nu = cfg.nu.unwrap_or_else(|| exact.map_or(mc.estimates[1], |m| m.second) / 2.0);
            let target = target_law(cfg.mode, nu)?;
            let ks = ks_distance(samples, &target)?;
            if let Some(dir) = &cfg.sample_dir {
                fs::create_dir_all(dir)?;
                let mut buf = Vec::with_capacity(samples.len() * 24);
                for x in samples {
                    writeln!(buf, "{x:?}")?;
                }
                fs::write(dir.join(format!("mc-gamma-q{}-N{n}.txt", cfg.q)), buf)?;
            }
            let mut r = Record::new();
            r.push("q", cfg.q);
            r.push("N", n);
            r.push("sequence", sequence_label(&cfg.sequence));
            r.push("mode", cfg.mode.to_string());
            r.push("nu", nu);
            r.push("ks", ks);
            let ex = exact.map_or([f64::NAN; 4], |m| [m.second, m.third, m.fourth, m.gamma_statistic]);
            r.push("exact_second", ex[0]);
            r.push("exact_third", ex[1]);
            r.push("exact_fourth", ex[2]);
            r.push("exact_gamma_statistic", ex[3]);
            r.push("target_gamma_statistic", target_statistic(&target));
            let mut mc_record = mc.record();
            mc_record.push("mc_gamma_statistic", mc.estimates[3] - 12.0 * mc.estimates[2]);
            r.append(mc_record);
            rows.push(r);
        }
        Ok(Artifact::Table(Table::new(rows)?))
    }
}

pub struct GammaSample;

/// Quadrature tolerance for density mass and moments.
const QUAD_TOL: f64 = 1e-10;

impl Experiment for GammaSample {
    fn name(&self) -> &'static str {
        "gamma-sample"
    }

    /// Density mass and moments by quadrature, closed-form moments, and a
    /// sample of size `samples` with its KS distance to the cdf.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Artifact, CliError> {
        let cfg = ctx.cfg;
        let nu = cfg.nu.unwrap_or(1.0);
        let law = target_law(cfg.mode, nu)?;
        let seed = ctx.row_seed(0, 1);
        let sample = law.sample(&mut stream_rng(seed, 0), cfg.samples)?;
        let mut r = Record::new();
        r.push("nu", nu);
        r.push("mode", cfg.mode.to_string());
        r.push("M", cfg.samples);
        r.push("ks", ks_distance(&sample, &law)?);
        r.push("density_mass", law.expectation(|_| 1.0, QUAD_TOL)?);
        let exact = law.moments();
        let pm = power_moments::<4>(&sample);
        for k in 0..4 {
            let p = (k + 1) as i32;
            r.push(&format!("m{p}"), exact[k]);
            r.push(&format!("quad_m{p}"), law.expectation(|x| x.powi(p), QUAD_TOL)?);
            r.push(&format!("sample_m{p}"), pm[k].0);
            r.push(&format!("sample_se{p}"), pm[k].1);
        }
        Ok(Artifact::Table(Table::new(vec![r])?))
    }
}
