use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand_distr::{Distribution, Poisson, weighted::WeightedIndex};
use serde::{Deserialize, Serialize};

use super::eval::{CellCounts, UstatEvaluator};
use super::grid::GridKernel;
use crate::combinatorics::factorial_f64;
use crate::kernel::PiecewiseKernel;
use crate::mc::{run_draws, McConfig};
use crate::record::Record;
use crate::rng::stream_rng;
use crate::stats::mean_and_se;
use crate::{Error, Result};

/// How the grid values enter `h_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    /// `h_n = h` for every `n`.
    #[default]
    Verbatim,
    /// `h_n = h·n^{−q/2}`, which keeps `E[U_n²]` bounded for a fixed kernel.
    Natural,
}

impl Scaling {
    pub fn factor(self, order: usize, n: usize) -> f64 {
        match self {
            Scaling::Verbatim => 1.0,
            Scaling::Natural => (n as f64).powf(-(order as f64) / 2.0),
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scaling::Verbatim => "verbatim",
            Scaling::Natural => "natural",
        })
    }
}

impl FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verbatim" => Ok(Scaling::Verbatim),
            "natural" => Ok(Scaling::Natural),
            other => Err(Error::Parse(format!("unknown scaling {other:?}"))),
        }
    }
}

impl GridKernel {
    /// Kernel `f` with `U_n = I_q(f)` for a completely degenerate `h_n`:
    /// masses `n·p_j` and values `h_n/q!`.
    pub fn to_tamed_kernel(&self, n: usize, scaling: Scaling) -> Result<PiecewiseKernel> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let c = scaling.factor(self.order(), n) / factorial_f64(self.order());
        Ok(self.as_kernel(n as f64).scale(c))
    }
}

/// `∫h_n⁴ dμ_n^q / (∫h_n² dμ_n^q)²` with `μ_n = n·p`.
pub fn moment_ratio(k: &GridKernel, n: usize) -> f64 {
    let f = k.as_kernel(n as f64);
    let l4 = crate::kernel::l4_norm(&f).powi(4);
    let l2 = crate::kernel::l2_norm(&f).powi(2);
    if l2 == 0.0 {
        f64::NAN
    } else {
        l4 / (l2 * l2)
    }
}

/// Draws point configurations and evaluates Poisson and classical
/// U-statistics of one grid kernel.
pub struct UstatSampler<'a> {
    kernel: &'a GridKernel,
    evaluator: &'a dyn UstatEvaluator,
    scaling: Scaling,
    cells: WeightedIndex<f64>,
}

impl<'a> UstatSampler<'a> {
    pub fn new(kernel: &'a GridKernel, evaluator: &'a dyn UstatEvaluator, scaling: Scaling) -> Result<Self> {
        let cells = WeightedIndex::new(kernel.weights().iter().copied())
            .map_err(|e| Error::InvalidParameter(format!("cell weights: {e}")))?;
        Ok(Self { kernel, evaluator, scaling, cells })
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n < self.kernel.order() {
            return Err(Error::InvalidParameter(format!("n = {n} is below the order {}", self.kernel.order())));
        }
        Ok(())
    }

    /// Cells of `count` i.i.d. points. Positions inside a cell are never
    /// needed, so only the cell is drawn.
    fn draw_cells(&self, count: usize, rng: &mut dyn RngCore) -> Vec<usize> {
        (0..count).map(|_| self.cells.sample(rng)).collect()
    }

    fn poisson_count(n: usize, rng: &mut dyn RngCore) -> Result<usize> {
        let d = Poisson::new(n as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let k: f64 = d.sample(rng);
        Ok(k as usize)
    }

    fn statistic(&self, cells: &[usize], n: usize) -> Result<f64> {
        Ok(self.scaling.factor(self.kernel.order(), n) * self.evaluator.evaluate(self.kernel, cells)?)
    }

    /// `U_n` over `N_n ~ Po(n)` points.
    pub fn poisson(&self, n: usize, rng: &mut dyn RngCore) -> Result<f64> {
        self.check_n(n)?;
        let count = Self::poisson_count(n, rng)?;
        let cells = self.draw_cells(count, rng);
        self.statistic(&cells, n)
    }

    /// `Û_n` over exactly `n` points.
    pub fn classical(&self, n: usize, rng: &mut dyn RngCore) -> Result<f64> {
        self.check_n(n)?;
        let cells = self.draw_cells(n, rng);
        self.statistic(&cells, n)
    }

    /// `(U_n, Û_n, N_n)` computed from one shared point stream.
    pub fn coupled(&self, n: usize, rng: &mut dyn RngCore) -> Result<(f64, f64, usize)> {
        self.check_n(n)?;
        let count = Self::poisson_count(n, rng)?;
        let cells = self.draw_cells(count.max(n), rng);
        Ok((self.statistic(&cells[..count], n)?, self.statistic(&cells[..n], n)?, count))
    }
}

/// `U_n` with the default evaluator and unscaled values.
pub fn sample_poisson_ustat(k: &GridKernel, n: usize, rng: &mut dyn RngCore) -> Result<f64> {
    UstatSampler::new(k, &CellCounts, Scaling::Verbatim)?.poisson(n, rng)
}

/// `Û_n` with the default evaluator and unscaled values.
pub fn sample_classical_ustat(k: &GridKernel, n: usize, rng: &mut dyn RngCore) -> Result<f64> {
    UstatSampler::new(k, &CellCounts, Scaling::Verbatim)?.classical(n, rng)
}

/// Estimate of `E[(U_n − Û_n)²]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapEstimate {
    pub n: usize,
    pub mean: f64,
    pub se: f64,
    /// Draws with `N_n = n`, where both statistics coincide.
    pub ties: usize,
}

impl GapEstimate {
    pub fn record(&self) -> Record {
        let mut r = Record::new();
        r.push("n", self.n);
        r.push("gap", self.mean);
        r.push("gap_se", self.se);
        r.push("ties", self.ties);
        r
    }
}

pub fn coupled_gap(s: &UstatSampler<'_>, n: usize, cfg: &McConfig) -> Result<GapEstimate> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let draws = run_draws(cfg.samples, cfg.lanes, |i| {
        let (u, v, count) = s.coupled(n, &mut stream_rng(cfg.seed, i))?;
        if count == n && u != v {
            return Err(Error::InvalidParameter("coupled statistics differ on a tie".into()));
        }
        Ok(((u - v) * (u - v), count == n))
    })?;
    let sq: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let (mean, se) = mean_and_se(&sq);
    Ok(GapEstimate { n, mean, se, ties: draws.iter().filter(|d| d.1).count() })
}

/// Monte Carlo moments of `U_n` and the statistic `E[U⁴] − 12E[U³]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaConditionEstimate {
    pub n: usize,
    pub m1: (f64, f64),
    pub m2: (f64, f64),
    pub m3: (f64, f64),
    pub m4: (f64, f64),
    /// Estimate and standard error of `E[U⁴ − 12U³]`.
    pub statistic: (f64, f64),
    pub nu_hat: f64,
}

impl GammaConditionEstimate {
    pub fn from_samples(n: usize, u: &[f64]) -> Self {
        let pm = crate::stats::power_moments::<4>(u);
        let comb: Vec<f64> = u.iter().map(|x| x.powi(4) - 12.0 * x.powi(3)).collect();
        Self {
            n,
            m1: pm[0],
            m2: pm[1],
            m3: pm[2],
            m4: pm[3],
            statistic: mean_and_se(&comb),
            nu_hat: pm[1].0 / 2.0,
        }
    }

    pub fn record(&self) -> Record {
        let mut r = Record::new();
        r.push("n", self.n);
        for (name, (v, se)) in [("m1", self.m1), ("m2", self.m2), ("m3", self.m3), ("m4", self.m4), ("statistic", self.statistic)] {
            r.push(name, v);
            r.push(&format!("{name}_se"), se);
        }
        r.push("nu_hat", self.nu_hat);
        r
    }
}

pub fn gamma_condition_estimate(s: &UstatSampler<'_>, n: usize, cfg: &McConfig) -> Result<GammaConditionEstimate> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let u = run_draws(cfg.samples, cfg.lanes, |i| s.poisson(n, &mut stream_rng(cfg.seed, i)))?;
    Ok(GammaConditionEstimate::from_samples(n, &u))
}
