use super::coeff::{binom, fact, pairs_of_order, product_weight};
use super::engine::ContractionEngine;
use crate::kernel::{contract, l2_norm, lincomb, symmetrize, PiecewiseKernel};
use crate::{Error, Result};

/// `q!‖f‖²`.
pub fn second_moment(e: &dyn ContractionEngine) -> f64 {
    fact(e.order()) as f64 * e.norm_sq()
}

/// `q! Σ_{r+l=q} r!C(q,r)²C(r,l) ⟨f ⋆̃ᵣˡ f, f⟩`.
pub fn third_moment_poisson(e: &dyn ContractionEngine) -> Result<f64> {
    let q = e.order();
    let mut acc = 0.0;
    for r in q.div_ceil(2)..=q {
        acc += product_weight(q, r, q - r) as f64 * e.sym_inner_kernel((r, q - r))?;
    }
    Ok(fact(q) as f64 * acc)
}

/// `‖G_p f‖²`.
pub fn g_norm_sq(e: &dyn ContractionEngine, p: usize) -> Result<f64> {
    let q = e.order();
    if p > 2 * q {
        return Err(Error::IndexRange(format!("G_{p} of an order-{q} kernel")));
    }
    if p == 0 {
        return Ok((fact(q) as f64 * e.norm_sq()).powi(2));
    }
    let pairs = pairs_of_order(q, p);
    let mut acc = 0.0;
    for (i, &a) in pairs.iter().enumerate() {
        let ca = product_weight(q, a.0, a.1) as f64;
        acc += ca * ca * e.sym_inner(a, a)?;
        for &b in &pairs[i + 1..] {
            let cb = product_weight(q, b.0, b.1) as f64;
            acc += 2.0 * ca * cb * e.sym_inner(a, b)?;
        }
    }
    Ok(acc)
}

/// `Σ_p p! ‖G_p f‖²`.
pub fn fourth_moment_poisson(e: &dyn ContractionEngine) -> Result<f64> {
    let q = e.order();
    let mut acc = 0.0;
    for p in 0..=2 * q {
        acc += fact(p) as f64 * g_norm_sq(e, p)?;
    }
    Ok(acc)
}

/// Third moment of the Gaussian integral; zero for odd orders.
pub fn third_moment_gaussian(e: &dyn ContractionEngine) -> Result<f64> {
    let q = e.order();
    if q % 2 == 1 {
        return Ok(0.0);
    }
    let h = q / 2;
    let c = (fact(q).pow(3) / fact(h).pow(2)) as f64;
    Ok(c * e.sym_inner_kernel((h, h))?)
}

/// `Σ_r (r!)² C(q,r)⁴ (2q−2r)! ‖f ⋆̃ᵣʳ f‖²`.
pub fn fourth_moment_gaussian(e: &dyn ContractionEngine) -> Result<f64> {
    let q = e.order();
    let mut acc = 0.0;
    for r in 0..=q {
        let c = fact(r).pow(2) * binom(q, r).pow(4) * fact(2 * q - 2 * r);
        acc += c as f64 * e.sym_inner((r, r), (r, r))?;
    }
    Ok(acc)
}

/// `G_p f` as a dense kernel of order `p`.
pub fn g_operator(f: &PiecewiseKernel, p: usize) -> Result<PiecewiseKernel> {
    let q = f.order();
    if p > 2 * q {
        return Err(Error::IndexRange(format!("G_{p} of an order-{q} kernel")));
    }
    f.ensure_symmetric()?;
    if p == 0 {
        let v = fact(q) as f64 * l2_norm(f).powi(2);
        return Ok(PiecewiseKernel::scalar(f.partition().clone(), v));
    }
    let mut out = PiecewiseKernel::zeros(p, f.partition().clone())?;
    for (r, l) in pairs_of_order(q, p) {
        let term = symmetrize(&contract(f, f, r, l)?)?;
        out = lincomb(1.0, &out, product_weight(q, r, l) as f64, &term)?;
    }
    Ok(out)
}

/// Exact moments of `I_q(f)` and the Gamma statistic `E[I⁴] − 12E[I³]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub q: usize,
    pub n: usize,
    pub second: f64,
    pub third: f64,
    pub fourth: f64,
    pub gamma_statistic: f64,
    pub nu_hat: f64,
}

impl MomentReport {
    pub fn poisson(e: &dyn ContractionEngine) -> Result<Self> {
        Self::from_parts(e, third_moment_poisson(e)?, fourth_moment_poisson(e)?)
    }

    pub fn gaussian(e: &dyn ContractionEngine) -> Result<Self> {
        Self::from_parts(e, third_moment_gaussian(e)?, fourth_moment_gaussian(e)?)
    }

    fn from_parts(e: &dyn ContractionEngine, third: f64, fourth: f64) -> Result<Self> {
        let second = second_moment(e);
        Ok(Self {
            q: e.order(),
            n: e.size(),
            second,
            third,
            fourth,
            gamma_statistic: fourth - 12.0 * third,
            nu_hat: second / 2.0,
        })
    }
}
