use std::io::{BufRead, Write};

use crate::kernel::{tensor_len, MultiIndex, Partition, PiecewiseKernel};
use crate::{Error, Result};

/// Symmetric kernel on `(g^d)^q` cell tuples with cell probabilities `p_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridKernel {
    order: usize,
    dim: usize,
    resolution: usize,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl GridKernel {
    /// `weights = None` selects the uniform density.
    pub fn new(order: usize, dim: usize, resolution: usize, values: Vec<f64>, weights: Option<Vec<f64>>) -> Result<Self> {
        if order == 0 || dim == 0 || resolution == 0 {
            return Err(Error::InvalidParameter("order, dimension and resolution must be positive".into()));
        }
        let cells = resolution
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::Guard(format!("{resolution}^{dim} grid cells")))?;
        let len = tensor_len(cells, order)?;
        if values.len() != len {
            return Err(Error::Dimension(format!("{cells} cells of order {order} need {len} values, got {}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid kernel value".into()));
        }
        let weights = weights.unwrap_or_else(|| vec![1.0 / cells as f64; cells]);
        if weights.len() != cells {
            return Err(Error::Dimension(format!("{cells} cells, {} weights", weights.len())));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter("cell weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("cell weights sum to {total}")));
        }
        let k = Self { order, dim, resolution, values, weights };
        k.as_kernel(1.0).ensure_symmetric()?;
        Ok(k)
    }

    pub fn from_fn(order: usize, dim: usize, resolution: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let cells = resolution.pow(dim as u32);
        let len = tensor_len(cells, order)?;
        let mut idx = MultiIndex::new(cells, order);
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            values.push(f(idx.current()));
            idx.advance();
        }
        Self::new(order, dim, resolution, values, None)
    }

    /// `2g(I − P)` on `g` cells of `[0,1]` with `P = J/g`. Under natural
    /// scaling the U-statistic tends to the centred Gamma law with `ν = g − 1`.
    pub fn pearson(g: usize) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidParameter("at least two cells are needed".into()));
        }
        let gf = g as f64;
        Self::from_fn(2, 1, g, |i| 2.0 * gf * (f64::from(u8::from(i[0] == i[1])) - 1.0 / gf))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cells(&self) -> usize {
        self.weights.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn value(&self, cells: &[usize]) -> f64 {
        let c = self.cells();
        self.values[cells.iter().fold(0, |acc, &i| acc * c + i)]
    }

    /// Values as a kernel over a partition with masses `mass_scale·p_j`.
    pub(crate) fn as_kernel(&self, mass_scale: f64) -> PiecewiseKernel {
        let masses = self.weights.iter().map(|w| w * mass_scale).collect::<Vec<_>>();
        let alpha = 0.5 * masses.iter().copied().fold(f64::INFINITY, f64::min);
        let p = Partition::new(masses, alpha).expect("positive weights");
        PiecewiseKernel::new(self.order, p, self.values.clone()).expect("validated shape")
    }

    /// `p`-weighted average over the first argument, for every fixed tail.
    fn first_slot_means(&self) -> Vec<f64> {
        let tail = self.values.len() / self.cells();
        let mut out = vec![0.0; tail];
        for (j, w) in self.weights.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(&self.values[j * tail..(j + 1) * tail]) {
                *o += w * v;
            }
        }
        out
    }

    /// `max |Σ_j h(j, z) p_j|` over all `(q−1)`-tuples `z`.
    pub fn degeneracy_defect(&self) -> f64 {
        self.first_slot_means().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Applies `∏_k (I − E_k)`, where `E_k` replaces argument `k` by its
    /// `p`-weighted mean.
    pub fn project_degenerate(&self) -> Self {
        let mut out = self.clone();
        for _ in 0..4 {
            for k in 0..self.order {
                out.center_slot(k);
            }
            if out.degeneracy_defect() < 1e-12 {
                break;
            }
        }
        out
    }

    fn center_slot(&mut self, k: usize) {
        let c = self.cells();
        let stride = c.pow((self.order - 1 - k) as u32);
        let block = stride * c;
        for base in (0..self.values.len()).step_by(block) {
            for off in 0..stride {
                let at = |j: usize| base + j * stride + off;
                let mean: f64 = (0..c).map(|j| self.weights[j] * self.values[at(j)]).sum();
                for j in 0..c {
                    self.values[at(j)] -= mean;
                }
            }
        }
    }
}

/// Header `q d g`, the weights line, then one value per line.
pub fn write_grid_kernel<W: Write>(mut w: W, k: &GridKernel) -> Result<()> {
    writeln!(w, "{} {} {}", k.order, k.dim, k.resolution)?;
    let weights: Vec<String> = k.weights.iter().map(|p| format!("{p:.17e}")).collect();
    writeln!(w, "{}", weights.join(" "))?;
    for v in &k.values {
        writeln!(w, "{v:.17e}")?;
    }
    Ok(())
}

pub fn read_grid_kernel<R: BufRead>(r: R) -> Result<GridKernel> {
    use crate::kernel::io::{parse_header, parse_numbers};
    let mut lines = r.lines().filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()));
    let h = parse_header(lines.next().transpose()?, 3)?;
    let weights = parse_numbers(
        &lines.next().transpose()?.ok_or_else(|| Error::Parse("missing weights line".into()))?,
        "weight",
    )?;
    let mut values = Vec::new();
    for line in lines {
        values.extend(parse_numbers(&line?, "value")?);
    }
    GridKernel::new(h[0], h[1], h[2], values, Some(weights))
}
