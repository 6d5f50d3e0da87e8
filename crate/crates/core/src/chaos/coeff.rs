//! Exact combinatorial coefficients, converted to `f64` once.

use crate::combinatorics::{binomial, factorial};

pub(crate) fn fact(n: usize) -> u128 {
    factorial(n).expect("factorial of a supported order")
}

pub(crate) fn binom(n: usize, k: usize) -> u128 {
    binomial(n, k)
}

/// `r!·C(q,r)²·C(r,l)`, the weight of `f ⋆̃ᵣˡ f` in the product formula.
pub(crate) fn product_weight(q: usize, r: usize, l: usize) -> u128 {
    fact(r) * binom(q, r).pow(2) * binom(r, l)
}

/// Pairs `(r, l)` with `2q − r − l = p`.
pub(crate) fn pairs_of_order(q: usize, p: usize) -> Vec<(usize, usize)> {
    (0..=q)
        .flat_map(|r| (0..=r).map(move |l| (r, l)))
        .filter(|&(r, l)| 2 * q == p + r + l)
        .collect()
}

pub(crate) fn ratio(num: i128, den: i128) -> f64 {
    num as f64 / den as f64
}
