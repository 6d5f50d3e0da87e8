//! Poisson and classical U-statistics on `[0,1]^d` with kernels that are
//! constant on the cells of a regular grid.

mod eval;
mod grid;
mod sim;

pub use eval::{CellCounts, Combinations, EvaluatorRegistry, UstatEvaluator};
pub use grid::{read_grid_kernel, write_grid_kernel, GridKernel};
pub use sim::{
    coupled_gap, gamma_condition_estimate, moment_ratio, sample_classical_ustat, sample_poisson_ustat,
    GammaConditionEstimate, GapEstimate, Scaling, UstatSampler,
};
