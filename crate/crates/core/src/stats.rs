//! Deterministic reductions and sample statistics.

/// Pairwise (cascade) summation with a fixed split topology.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if x.len() <= LEAF {
        return x.iter().sum();
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}

pub fn mean(x: &[f64]) -> f64 {
    pairwise_sum(x) / x.len() as f64
}

/// Mean and standard error `√(s²/M)` with the unbiased sample variance.
pub fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let m = x.len();
    let mu = mean(x);
    if m < 2 {
        return (mu, 0.0);
    }
    let dev: Vec<f64> = x.iter().map(|v| (v - mu) * (v - mu)).collect();
    let var = pairwise_sum(&dev) / (m - 1) as f64;
    (mu, (var / m as f64).sqrt())
}

/// Estimates of `E[X^k]` with standard errors, `k = 1..=K`.
pub fn power_moments<const K: usize>(x: &[f64]) -> [(f64, f64); K] {
    let mut out = [(0.0, 0.0); K];
    let mut pow: Vec<f64> = vec![1.0; x.len()];
    for slot in out.iter_mut() {
        for (p, v) in pow.iter_mut().zip(x) {
            *p *= v;
        }
        *slot = mean_and_se(&pow);
    }
    out
}
