//! Homogeneous sums of independent sequences: seeded Monte Carlo, an exact
//! combinatorial moment oracle and empirical distribution statistics.

mod draws;
mod homogeneous;
mod ks;
mod moments;
mod oracle;
mod sequence;

pub use draws::run_draws;
pub use homogeneous::{homogeneous_sum, homogeneous_sum_naive};
pub use ks::{ks_distance, Ecdf};
pub use moments::{check_correspondence, mc_moments, sample_homogeneous, tamed_kernel, McConfig, McResult};
pub use oracle::{exact_moments_small, ORACLE_TUPLE_LIMIT};
pub use sequence::{
    moments_from_cumulants, CustomLaw, GaussianSeq, Intensities, PoissonNormalized, Rademacher,
    SequenceLaw, SequenceRegistry, SequenceSpec, MAX_MOMENT,
};

use crate::Result;

/// `E[X_i^k]`, `k = 1..=up_to`, for the first term of the sequence.
pub fn raw_moments(law: &dyn SequenceLaw, up_to: usize) -> Result<Vec<f64>> {
    law.raw_moments(0, up_to)
}
