use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::coeff::{binom, fact, product_weight, ratio};
use super::engine::{check_middle, ContractionEngine, Pair};
use super::moments::{fourth_moment_poisson, g_norm_sq, third_moment_poisson};
use crate::{Error, Result};

/// `c_q = 4/((q/2)!·C(q, q/2)²)`.
pub fn c_constant(q: usize) -> Result<f64> {
    if q == 0 || q % 2 == 1 {
        return Err(Error::OddOrder(q));
    }
    Ok(4.0 / (fact(q / 2) * binom(q, q / 2).pow(2)) as f64)
}

/// Target of the diagnostics: the centred Gamma law or its reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Gamma,
    Reflected,
}

impl Mode {
    /// Sign `s` such that the reflected diagnostics of `f` are the Gamma
    /// diagnostics of `s·f`.
    pub fn sign(self) -> f64 {
        match self {
            Mode::Gamma => 1.0,
            Mode::Reflected => -1.0,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Gamma => "gamma",
            Mode::Reflected => "reflected",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(Mode::Gamma),
            "reflected" => Ok(Mode::Reflected),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Contraction-norm diagnostics of a single kernel.
///
/// `contraction_norms` holds `‖f ⋆ᵣˡ f‖` for `1 ≤ r ≤ q`,
/// `1 ≤ l ≤ min(r, q−1)`, without the middle pair `(q/2, q/2)`, whose
/// symmetrized deviation from `±c_q f` is stored separately.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub mode: Mode,
    pub contraction_norms: BTreeMap<Pair, f64>,
    pub l4: f64,
    pub middle_deviation: f64,
    pub middle_deviation_reflected: f64,
    pub a_prime: f64,
    pub r_term: f64,
}

impl DiagnosticsReport {
    /// `a_prime` and `r_term` refer to `f` in gamma mode and to `−f` in
    /// reflected mode.
    pub fn compute(e: &dyn ContractionEngine, mode: Mode) -> Result<Self> {
        let q = e.order();
        check_middle(q)?;
        let c = c_constant(q)?;
        let mut contraction_norms = BTreeMap::new();
        for (r, l) in condition_pairs(q) {
            contraction_norms.insert((r, l), e.contraction_norm_sq((r, l))?.max(0.0).sqrt());
        }
        let s = mode.sign();
        Ok(Self {
            mode,
            contraction_norms,
            l4: e.l4_pow4().powf(0.25),
            middle_deviation: e.middle_deviation_sq(c)?.max(0.0).sqrt(),
            middle_deviation_reflected: e.middle_deviation_sq(-c)?.max(0.0).sqrt(),
            a_prime: a_prime_signed(e, s)?,
            r_term: r_term_signed(e, s)?,
        })
    }

    /// The middle deviation matching `mode`.
    pub fn selected_middle_deviation(&self) -> f64 {
        match self.mode {
            Mode::Gamma => self.middle_deviation,
            Mode::Reflected => self.middle_deviation_reflected,
        }
    }
}

/// Pairs `(r, l)` entering the contraction condition, middle pair excluded.
pub fn condition_pairs(q: usize) -> Vec<Pair> {
    (1..=q)
        .flat_map(|r| (1..=r.min(q.saturating_sub(1))).map(move |l| (r, l)))
        .filter(|&(r, l)| !(2 * r == q && r == l))
        .collect()
}

/// Coefficient of `‖f ⋆ₚᵖ f‖²` in the first sum of `A′` with the leading
/// numerator `k` (2 in `A′` itself, 6 after applying the reverse inequality).
fn first_sum_coefficient(q: usize, p: usize, k: i128) -> f64 {
    let h = q / 2;
    let mid = (fact(h) * fact(h - p)).pow(2) as i128;
    let qp = fact(q - p).pow(2) as i128;
    let q4 = fact(q).pow(4) as i128;
    let p2 = fact(p).pow(2) as i128;
    // (q!)⁴/(p!)² · (k/qp − 1/(2 mid)) = (q!)⁴ (2k·mid − qp) / (p!² · qp · 2 mid)
    let num = 2 * k * mid - qp;
    let den = p2 * qp * 2 * mid;
    let g = gcd(q4, den);
    ratio(q4 / g * num, den / g)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Bracketed first-sum factors `k/((q−p)!)² − 1/(2((q/2)!(q/2−p)!)²)` for
/// `p = 1..q/2−1`, as `(p, k = 2, k = 6)`. The `k = 6` form is what remains
/// after the reverse inequality is applied to the `G_p` terms.
pub fn a_prime_coefficients(q: usize) -> Result<Vec<(usize, f64, f64)>> {
    check_middle(q)?;
    Ok((1..q / 2)
        .map(|p| {
            let h = q / 2;
            let mid = (fact(h) * fact(h - p)).pow(2) as f64;
            let qp = fact(q - p).pow(2) as f64;
            let reduced = |k: f64| k / qp - 1.0 / (2.0 * mid);
            (p, reduced(2.0), reduced(6.0))
        })
        .collect())
}

fn a_prime_signed(e: &dyn ContractionEngine, s: f64) -> Result<f64> {
    let q = e.order();
    check_middle(q)?;
    let c = c_constant(q)?;
    let mut term1 = 0.0;
    for p in 1..q / 2 {
        term1 += first_sum_coefficient(q, p, 2) * e.contraction_norm_sq((p, p))?;
    }
    let mut term2 = 0.0;
    for p in (1..2 * q).filter(|&p| p != q) {
        term2 += fact(p) as f64 * g_norm_sq(e, p)?;
    }
    let mut term3 = 0.0;
    for p in q / 2 + 1..=q {
        let w = fact(p).pow(2) * binom(q, p).pow(4) * binom(p, q - p).pow(2);
        term3 += w as f64 * e.sym_inner((p, q - p), (p, q - p))?;
    }
    term3 *= fact(q) as f64;
    let term4 = 24.0 * fact(q) as f64 * e.middle_deviation_sq(s * c)? / (c * c);
    Ok(term1 + term2 + term3 + term4)
}

/// The lower bound `A′` for the remainder of the fourth-minus-third moment
/// expansion.
pub fn a_prime(e: &dyn ContractionEngine) -> Result<f64> {
    a_prime_signed(e, 1.0)
}

fn r_term_signed(e: &dyn ContractionEngine, s: f64) -> Result<f64> {
    let q = e.order();
    check_middle(q)?;
    let w = |r: usize| (fact(r) * binom(q, r).pow(2) * binom(r, q - r)) as f64;
    let mut cross = 0.0;
    for r in q / 2..=q {
        for p in q / 2..=q {
            if r != p {
                cross += w(r) * w(p) * e.sym_inner((r, q - r), (p, q - p))?;
            }
        }
    }
    let mut cubic = 0.0;
    for p in q / 2 + 1..=q {
        cubic += w(p) * e.sym_inner_kernel((p, q - p))?;
    }
    let qf = fact(q) as f64;
    Ok(qf * cross - 12.0 * qf * s * cubic)
}

/// The remainder term `R`.
pub fn r_term(e: &dyn ContractionEngine) -> Result<f64> {
    r_term_signed(e, 1.0)
}

/// `fourth − 12·third = 3(q!)²‖f‖⁴ + T1 + T2 + T3 (+ residual)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TDecomposition {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    /// Left side minus right side, divided by `|fourth| + 12|third|`.
    pub residual: f64,
}

pub fn t_decomposition(e: &dyn ContractionEngine) -> Result<TDecomposition> {
    let q = e.order();
    check_middle(q)?;
    let h = q / 2;
    let qf = fact(q) as f64;
    let mut t1 = 0.0;
    for p in (1..q).filter(|&p| p != h) {
        let c = fact(q).pow(4) / (fact(p) * fact(q - p)).pow(2);
        t1 += c as f64 * e.contraction_norm_sq((p, p))?;
    }
    for p in (1..2 * q).filter(|&p| p != q) {
        t1 += fact(p) as f64 * g_norm_sq(e, p)?;
    }
    let t2 = (fact(q).pow(4) / fact(h).pow(4)) as f64 * e.contraction_norm_sq((h, h))?
        + qf * g_norm_sq(e, q)?
        - 12.0 * qf * product_weight(q, h, h) as f64 * e.sym_inner_kernel((h, h))?;
    let mut t3 = 0.0;
    for p in h + 1..=q {
        t3 += product_weight(q, p, q - p) as f64 * e.sym_inner_kernel((p, q - p))?;
    }
    t3 *= -12.0 * qf;
    let third = third_moment_poisson(e)?;
    let fourth = fourth_moment_poisson(e)?;
    let lhs = fourth - 12.0 * third;
    let rhs = 3.0 * qf * qf * e.norm_sq().powi(2) + t1 + t2 + t3;
    let scale = fourth.abs() + 12.0 * third.abs();
    let residual = if scale > 0.0 { (lhs - rhs) / scale } else { lhs - rhs };
    Ok(TDecomposition { t1, t2, t3, residual })
}
