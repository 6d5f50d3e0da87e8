use crate::kernel::{IndexFunction, MultiIndex};
use crate::{Error, Result};

fn check_len(h: &IndexFunction, x: &[f64]) -> Result<()> {
    if x.len() < h.size() {
        return Err(Error::Dimension(format!("sequence of length {} for size {}", x.len(), h.size())));
    }
    Ok(())
}

/// `Q_q(N, h, x) = Σ h(i_1..i_q) x_{i_1}⋯x_{i_q}`, evaluated by contracting
/// the last index against `x` until a scalar remains.
pub fn homogeneous_sum(h: &IndexFunction, x: &[f64]) -> Result<f64> {
    check_len(h, x)?;
    let n = h.size();
    let x = &x[..n];
    if h.order() == 0 {
        return Ok(h.values()[0]);
    }
    let mut cur: Vec<f64> = h.values().chunks_exact(n).map(|row| dot(row, x)).collect();
    while cur.len() > 1 {
        cur = cur.chunks_exact(n).map(|row| dot(row, x)).collect();
    }
    Ok(cur[0])
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a * b).sum()
}

/// Tuple-by-tuple evaluation of the same sum.
pub fn homogeneous_sum_naive(h: &IndexFunction, x: &[f64]) -> Result<f64> {
    check_len(h, x)?;
    let mut idx = MultiIndex::new(h.size(), h.order());
    let mut acc = 0.0;
    for &v in h.values() {
        acc += v * idx.current().iter().map(|&i| x[i]).product::<f64>();
        idx.advance();
    }
    Ok(acc)
}
