//! Exact integer combinatorics. Coefficients are formed in `u128` and
//! converted to `f64` once.

use crate::{Error, Result};

pub fn factorial(n: usize) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| {
        acc.checked_mul(k)
            .ok_or_else(|| Error::Overflow(format!("{n}!")))
    })
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `n!` as a float. Panics only for `n > 34`, far beyond anything used here.
pub fn factorial_f64(n: usize) -> f64 {
    factorial(n).expect("factorial overflow") as f64
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n, k) as f64
}

/// Number of `σ ∈ Π_{2M}` whose first half shares exactly `p` elements with
/// the first half of a fixed permutation: `(M!)² · C(M, p)²`.
pub fn permutation_class_count(m: usize, p: usize) -> Result<u128> {
    if p > m {
        return Err(Error::InvalidParameter(format!("p = {p} exceeds M = {m}")));
    }
    let f = factorial(m)?;
    let c = binomial(m, p);
    let overflow = || Error::Overflow(format!("(M!)^2 C(M,p)^2 for M = {m}"));
    f.checked_mul(f)
        .and_then(|x| x.checked_mul(c))
        .and_then(|x| x.checked_mul(c))
        .ok_or_else(overflow)
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}
