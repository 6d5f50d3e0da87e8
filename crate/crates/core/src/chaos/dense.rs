use std::sync::OnceLock;

use super::engine::{check_middle, check_pair, check_same_order, ContractionEngine, Pair};
use crate::kernel::{contract, inner, l2_norm, l4_norm, lincomb, symmetrize, PiecewiseKernel};
use crate::Result;

/// Materializes every contraction as a dense tensor. Contractions are built
/// on first use and cached.
#[derive(Debug)]
pub struct DenseEngine {
    f: PiecewiseKernel,
    raw: Vec<OnceLock<PiecewiseKernel>>,
    sym: Vec<OnceLock<PiecewiseKernel>>,
}

fn slot((r, l): Pair) -> usize {
    r * (r + 1) / 2 + l
}

impl DenseEngine {
    /// `f` must be symmetric.
    pub fn new(f: PiecewiseKernel) -> Result<Self> {
        f.ensure_symmetric()?;
        let n = (f.order() + 1) * (f.order() + 2) / 2;
        Ok(Self {
            f,
            raw: (0..n).map(|_| OnceLock::new()).collect(),
            sym: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn kernel(&self) -> &PiecewiseKernel {
        &self.f
    }

    /// `f ⋆ᵣˡ f`.
    pub fn raw(&self, pair: Pair) -> Result<&PiecewiseKernel> {
        check_pair(self.f.order(), pair)?;
        let cell = &self.raw[slot(pair)];
        if let Some(k) = cell.get() {
            return Ok(k);
        }
        let k = contract(&self.f, &self.f, pair.0, pair.1)?;
        Ok(cell.get_or_init(|| k))
    }

    /// `f ⋆̃ᵣˡ f`.
    pub fn symmetrized(&self, pair: Pair) -> Result<&PiecewiseKernel> {
        check_pair(self.f.order(), pair)?;
        let cell = &self.sym[slot(pair)];
        if let Some(k) = cell.get() {
            return Ok(k);
        }
        let k = symmetrize(self.raw(pair)?)?;
        Ok(cell.get_or_init(|| k))
    }
}

impl ContractionEngine for DenseEngine {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn order(&self) -> usize {
        self.f.order()
    }

    fn size(&self) -> usize {
        self.f.size()
    }

    fn norm_sq(&self) -> f64 {
        l2_norm(&self.f).powi(2)
    }

    fn l4_pow4(&self) -> f64 {
        l4_norm(&self.f).powi(4)
    }

    fn contraction_norm_sq(&self, pair: Pair) -> Result<f64> {
        Ok(l2_norm(self.raw(pair)?).powi(2))
    }

    fn sym_inner(&self, a: Pair, b: Pair) -> Result<f64> {
        check_same_order(self.order(), a, b)?;
        inner(self.symmetrized(a)?, self.symmetrized(b)?)
    }

    fn sym_inner_kernel(&self, pair: Pair) -> Result<f64> {
        check_same_order(self.order(), pair, (self.order(), 0))?;
        inner(self.symmetrized(pair)?, &self.f)
    }

    fn middle_deviation_sq(&self, c: f64) -> Result<f64> {
        check_middle(self.order())?;
        let h = self.order() / 2;
        let d = lincomb(1.0, self.symmetrized((h, h))?, -c, &self.f)?;
        Ok(l2_norm(&d).powi(2))
    }
}
