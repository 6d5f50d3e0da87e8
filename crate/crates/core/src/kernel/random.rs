use rand::Rng;

use super::{ops::symmetrize, IndexFunction, Partition, PiecewiseKernel};
use crate::Result;

/// Sign constraint for randomly generated kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    Signed,
    NonNegative,
    NonPositive,
}

impl SignMode {
    fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match self {
            SignMode::Signed => 2.0 * u - 1.0,
            SignMode::NonNegative => u,
            SignMode::NonPositive => -u,
        }
    }
}

/// Symmetrized kernel with i.i.d. uniform entries.
pub fn random_symmetric<R: Rng + ?Sized>(
    order: usize,
    partition: &Partition,
    rng: &mut R,
    sign: SignMode,
) -> Result<PiecewiseKernel> {
    let raw = PiecewiseKernel::from_fn(order, partition.clone(), |_| sign.draw(rng))?;
    symmetrize(&raw)
}

/// Partition with masses uniform on `[lo, hi)`.
pub fn random_partition<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Result<Partition> {
    Partition::with_masses((0..n).map(|_| rng.random_range(lo..hi)).collect())
}

impl IndexFunction {
    /// Symmetric, zero-diagonal index function with uniform entries.
    pub fn random<R: Rng + ?Sized>(order: usize, size: usize, rng: &mut R, sign: SignMode) -> Result<Self> {
        let raw = PiecewiseKernel::from_fn(order, Partition::unit(size), |i| {
            let v = sign.draw(rng);
            if super::index::has_repeat(i) {
                0.0
            } else {
                v
            }
        })?;
        let sym = symmetrize(&raw)?;
        Self::new(order, size, sym.into_values())
    }
}
