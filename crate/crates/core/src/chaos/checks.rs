use super::coeff::{binom, fact};
use crate::kernel::{contract, l2_norm, symmetrize, symmetrize_exhaustive, PiecewiseKernel};
use crate::Result;

/// Both sides of an identity and their absolute gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// One side-by-side inequality evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub name: String,
    pub r: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Relative slack granted to inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-12;

fn raw_norm_sq(f: &PiecewiseKernel, p: usize) -> Result<f64> {
    Ok(l2_norm(&contract(f, f, p, p)?).powi(2))
}

/// `‖f ⋆̃₀⁰ f‖²` by explicit permutation enumeration against its closed form
/// in terms of `‖f‖⁴` and the `‖f ⋆ₚᵖ f‖²`.
pub fn symmetrization_identity_check(f: &PiecewiseKernel) -> Result<IdentityCheck> {
    f.ensure_symmetric()?;
    let q = f.order();
    let lhs = l2_norm(&symmetrize_exhaustive(&contract(f, f, 0, 0)?)?).powi(2);
    let mut bracket = 2.0 * l2_norm(f).powi(4);
    for p in 1..q {
        bracket += binom(q, p).pow(2) as f64 * raw_norm_sq(f, p)?;
    }
    let rhs = fact(q).pow(2) as f64 / fact(2 * q) as f64 * bracket;
    Ok(IdentityCheck { lhs, rhs, gap: (lhs - rhs).abs() })
}

fn holds(lhs: f64, rhs: f64, upper: bool) -> bool {
    let slack = INEQUALITY_SLACK * lhs.abs().max(rhs.abs());
    if upper {
        lhs <= rhs + slack
    } else {
        lhs >= rhs - slack
    }
}

/// Upper bounds on `‖f ⋆̃ᵣʳ f‖²` for `r = 1..q−1`, and for sign-constant `f`
/// the lower bounds for `r = 0..q−1`.
pub fn contraction_inequality_checks(f: &PiecewiseKernel) -> Result<Vec<InequalityCheck>> {
    f.ensure_symmetric()?;
    let q = f.order();
    let mut raw = Vec::with_capacity(q + 1);
    raw.push(l2_norm(f).powi(4));
    for p in 1..=q {
        raw.push(raw_norm_sq(f, p)?);
    }
    let sym_sq = |r: usize| -> Result<f64> { Ok(l2_norm(&symmetrize(&contract(f, f, r, r)?)?).powi(2)) };
    let mut out = Vec::new();
    for r in 1..q {
        let k = q - r;
        let lhs = sym_sq(r)?;
        let mut bracket = 2.0 * raw[r];
        for p in 1..k {
            bracket += binom(k, p).pow(2) as f64 * raw[p];
        }
        let rhs = fact(k).pow(2) as f64 / fact(2 * k) as f64 * bracket;
        out.push(InequalityCheck {
            name: "contraction_upper".into(),
            r,
            lhs,
            rhs,
            satisfied: holds(lhs, rhs, true),
        });
    }
    if f.sign_constancy().is_some() {
        for r in 0..q {
            let k = q - r;
            let lhs = sym_sq(r)?;
            let rhs = 2.0 * fact(k).pow(2) as f64 / fact(2 * k) as f64 * raw[r];
            out.push(InequalityCheck {
                name: "contraction_reverse".into(),
                r,
                lhs,
                rhs,
                satisfied: holds(lhs, rhs, false),
            });
        }
    }
    Ok(out)
}
