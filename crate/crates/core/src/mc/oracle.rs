use super::sequence::SequenceLaw;
use crate::kernel::{IndexFunction, MultiIndex};
use crate::{Error, Result};

/// Largest number of index tuples the exact oracle will enumerate.
pub const ORACLE_TUPLE_LIMIT: f64 = 1e7;

/// `E[Q_q(N, h, X)^k]` by expanding the power into products over `k`
/// index tuples and taking the raw moments of each independent factor.
pub fn exact_moments_small(h: &IndexFunction, law: &dyn SequenceLaw, k: usize) -> Result<f64> {
    let (q, n) = (h.order(), h.size());
    let tuples = (n as f64).powi((q * k) as i32);
    if tuples > ORACLE_TUPLE_LIMIT {
        return Err(Error::Guard(format!("exact moment enumeration of {tuples:e} tuples")));
    }
    if k == 0 {
        return Ok(1.0);
    }
    // h vanishes on diagonals, so no index occurs more than k times
    let mut moments = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = vec![1.0];
        m.extend(law.raw_moments(i, k)?);
        moments.push(m);
    }
    let mut entries = Vec::new();
    let mut idx = MultiIndex::new(n, q);
    for &v in h.values() {
        if v != 0.0 {
            entries.push((idx.current().to_vec(), v));
        }
        idx.advance();
    }
    let mut counts = vec![0usize; n];
    Ok(expand(&entries, &moments, k, 1.0, &mut counts))
}

fn expand(entries: &[(Vec<usize>, f64)], moments: &[Vec<f64>], left: usize, weight: f64, counts: &mut [usize]) -> f64 {
    if left == 0 {
        let mut prod = weight;
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                prod *= moments[i][c];
                if prod == 0.0 {
                    return 0.0;
                }
            }
        }
        return prod;
    }
    let mut acc = 0.0;
    for (tuple, v) in entries {
        for &i in tuple {
            counts[i] += 1;
        }
        acc += expand(entries, moments, left - 1, weight * v, counts);
        for &i in tuple {
            counts[i] -= 1;
        }
    }
    acc
}
