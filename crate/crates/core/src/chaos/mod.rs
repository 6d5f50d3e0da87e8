//! Moments of Poisson and Gaussian multiple integrals, the four-moment
//! diagnostics for centred Gamma limits, and the identities behind them.
//!
//! Formulas are evaluated through a [`ContractionEngine`]: [`DenseEngine`]
//! materializes every contraction and works for any order, [`MatrixEngine`]
//! handles order 2 in `O(N³)`.

mod checks;
mod coeff;
mod dense;
mod diagnostics;
mod engine;
mod families;
mod matrix;
mod moments;
mod record;

pub use checks::{
    contraction_inequality_checks, symmetrization_identity_check, IdentityCheck, InequalityCheck,
    INEQUALITY_SLACK,
};
pub use dense::DenseEngine;
pub use diagnostics::{
    a_prime, a_prime_coefficients, c_constant, condition_pairs, r_term, t_decomposition,
    DiagnosticsReport, Mode, TDecomposition,
};
pub use engine::{ContractionEngine, EngineRegistry, Pair};
pub use families::{canonical_family_q2, pair_square_family_q4};
pub use matrix::MatrixEngine;
pub use moments::{
    fourth_moment_gaussian, fourth_moment_poisson, g_norm_sq, g_operator, second_moment,
    third_moment_gaussian, third_moment_poisson, MomentReport,
};
pub use record::report_record;
