use std::fmt;

use crate::kernel::PiecewiseKernel;
use crate::{Error, Result};

/// A pair `(r, l)` naming the contraction `f ⋆ᵣˡ f`.
pub type Pair = (usize, usize);

/// Evaluates the self-contraction quantities of one fixed symmetric kernel.
///
/// All moment and diagnostic formulas are written against this trait, so a
/// specialised evaluator only has to answer these queries.
pub trait ContractionEngine: Send + Sync {
    fn name(&self) -> &'static str;
    /// Order `q` of the kernel.
    fn order(&self) -> usize;
    /// Number of partition cells.
    fn size(&self) -> usize;
    /// `‖f‖²`.
    fn norm_sq(&self) -> f64;
    /// `‖f‖⁴_{L⁴}`.
    fn l4_pow4(&self) -> f64;
    /// `‖f ⋆ᵣˡ f‖²` (unsymmetrized).
    fn contraction_norm_sq(&self, pair: Pair) -> Result<f64>;
    /// `⟨f ⋆̃_a f, f ⋆̃_b f⟩` for two pairs of equal result order.
    fn sym_inner(&self, a: Pair, b: Pair) -> Result<f64>;
    /// `⟨f ⋆̃ᵣˡ f, f⟩` for `r + l = q`.
    fn sym_inner_kernel(&self, pair: Pair) -> Result<f64>;
    /// `‖f ⋆̃_{q/2}^{q/2} f − c·f‖²`.
    fn middle_deviation_sq(&self, c: f64) -> Result<f64>;
}

impl fmt::Debug for dyn ContractionEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(q={}, N={})", self.name(), self.order(), self.size())
    }
}

pub(crate) fn check_pair(q: usize, (r, l): Pair) -> Result<()> {
    if r > q || l > r {
        return Err(Error::IndexRange(format!("contraction ({r}, {l}) of an order-{q} kernel")));
    }
    Ok(())
}

pub(crate) fn check_same_order(q: usize, a: Pair, b: Pair) -> Result<()> {
    check_pair(q, a)?;
    check_pair(q, b)?;
    if a.0 + a.1 != b.0 + b.1 {
        return Err(Error::Dimension(format!("contractions {a:?} and {b:?} have different orders")));
    }
    Ok(())
}

pub(crate) fn check_middle(q: usize) -> Result<()> {
    if q % 2 == 1 {
        return Err(Error::OddOrder(q));
    }
    Ok(())
}

type Factory = Box<dyn Fn(&PiecewiseKernel) -> Result<Box<dyn ContractionEngine>> + Send + Sync>;

/// Engines selectable by name.
pub struct EngineRegistry {
    entries: Vec<(String, Factory)>,
}

impl EngineRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// `dense`, `matrix-q2` and `auto` (matrix for order 2, dense otherwise).
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("dense", |f| Ok(Box::new(super::DenseEngine::new(f.clone())?)));
        reg.register("matrix-q2", |f| Ok(Box::new(super::MatrixEngine::new(f)?)));
        reg.register("auto", |f| {
            if f.order() == 2 {
                Ok(Box::new(super::MatrixEngine::new(f)?))
            } else {
                Ok(Box::new(super::DenseEngine::new(f.clone())?))
            }
        });
        reg
    }

    /// Adds or replaces an engine.
    pub fn register(
        &mut self,
        name: &str,
        factory: impl Fn(&PiecewiseKernel) -> Result<Box<dyn ContractionEngine>> + Send + Sync + 'static,
    ) {
        self.entries.retain(|(n, _)| n != name);
        self.entries.push((name.to_string(), Box::new(factory)));
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn build(&self, name: &str, f: &PiecewiseKernel) -> Result<Box<dyn ContractionEngine>> {
        let (_, factory) = self
            .entries
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownEngine(name.to_string()))?;
        factory(f)
    }
}

impl Default for EngineRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
