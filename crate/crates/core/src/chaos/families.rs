use crate::kernel::{symmetrize, IndexFunction, Partition, PiecewiseKernel};
use crate::{Error, Result};

/// `h(i, j) = 1(i ≠ j)/N`.
pub fn canonical_family_q2(n: usize) -> Result<IndexFunction> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("canonical family needs N ≥ 2, got {n}")));
    }
    let v = 1.0 / n as f64;
    IndexFunction::from_fn(2, n, |i| if i[0] != i[1] { v } else { 0.0 })
}

/// Symmetrization of `g(i, j)·g(k, l)` with every diagonal entry set to zero.
pub fn pair_square_family_q4(g: &IndexFunction) -> Result<IndexFunction> {
    if g.order() != 2 {
        return Err(Error::Dimension(format!("expected an order-2 index function, got order {}", g.order())));
    }
    let n = g.size();
    let gv = g.values();
    let prod = PiecewiseKernel::from_fn(4, Partition::unit(n), |i| gv[i[0] * n + i[1]] * gv[i[2] * n + i[3]])?;
    let sym = symmetrize(&prod)?;
    let mut values = sym.into_values();
    let mut idx = crate::kernel::MultiIndex::new(n, 4);
    for v in values.iter_mut() {
        let i = idx.current();
        if (0..4).any(|a| (a + 1..4).any(|b| i[a] == i[b])) {
            *v = 0.0;
        }
        idx.advance();
    }
    IndexFunction::new(4, n, values)
}
