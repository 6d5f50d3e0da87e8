//! Contraction calculus and moment formulas for multiple integrals on a
//! Poisson (and Gaussian) chaos, together with the Monte Carlo machinery
//! used to check the four moments criterion for centred Gamma limits.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`kernel`]: piecewise-constant symmetric kernels over finite partitions,
//!   contractions, symmetrization and the L²/L⁴ geometry.
//! - [`chaos`]: exact third/fourth moments, the `G_p^q` operator, the
//!   four moments diagnostics and the contraction-norm identities. Evaluation
//!   goes through a [`chaos::ContractionEngine`] chosen from a registry.
//! - [`gamma`]: the centred Gamma law and its reflection.
//! - [`mc`]: homogeneous sums, seeded Monte Carlo, an exact combinatorial
//!   moment oracle and the Kolmogorov–Smirnov distance.
//! - [`ustat`]: Poisson and classical U-statistics on grid kernels.

pub mod chaos;
pub mod combinatorics;
mod error;
pub mod gamma;
pub mod kernel;
pub mod mc;
pub mod quadrature;
pub mod record;
pub mod rng;
pub mod special;
pub mod stats;
pub mod ustat;

pub use error::{Error, Result};
