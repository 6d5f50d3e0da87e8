use super::index::{block_offsets, encode, MultiIndex};
use super::{tensor_len, IndexFunction, Partition, PiecewiseKernel};
use crate::{Error, Result};

/// Largest order accepted by [`symmetrize`].
pub const SYMMETRIZATION_CAP: usize = 8;
/// Largest order accepted by [`symmetrize_exhaustive`].
pub const EXHAUSTIVE_SYMMETRIZATION_CAP: usize = 6;

/// Tamed kernel `F(i) = h(i)/√(m_{i_1}⋯m_{i_q})`.
pub fn from_index_function(h: &IndexFunction, partition: &Partition) -> Result<PiecewiseKernel> {
    if h.size() != partition.len() {
        return Err(Error::Dimension(format!(
            "index function has size {}, partition has {} cells",
            h.size(),
            partition.len()
        )));
    }
    let w = partition.product_weights(h.order())?;
    let values = h.values().iter().zip(&w).map(|(v, w)| v / w.sqrt()).collect();
    Ok(PiecewiseKernel::from_parts_unchecked(h.order(), partition.clone(), values))
}

fn same_partition(f: &PiecewiseKernel, g: &PiecewiseKernel) -> Result<()> {
    if f.partition() != g.partition() {
        return Err(Error::PartitionMismatch);
    }
    Ok(())
}

fn same_shape(f: &PiecewiseKernel, g: &PiecewiseKernel) -> Result<()> {
    same_partition(f, g)?;
    if f.order() != g.order() {
        return Err(Error::Dimension(format!("orders {} and {} differ", f.order(), g.order())));
    }
    Ok(())
}

/// `f ⋆ᵣˡ g`. Arguments of the result are ordered as (identified but not
/// integrated, remaining of `f`, remaining of `g`). Within `f` and `g` the
/// integrated slots come first, then the identified ones.
pub fn contract(f: &PiecewiseKernel, g: &PiecewiseKernel, r: usize, l: usize) -> Result<PiecewiseKernel> {
    same_partition(f, g)?;
    let (p, q) = (f.order(), g.order());
    if r > p.min(q) || l > r {
        return Err(Error::IndexRange(format!(
            "contraction (r, l) = ({r}, {l}) for orders ({p}, {q})"
        )));
    }
    let n = f.size();
    let out_order = p + q - r - l;
    tensor_len(n, out_order)?;
    tensor_len(n, p + q - r)?;

    let z_f = block_offsets(n, p, 0, l);
    let z_g = block_offsets(n, q, 0, l);
    let z_w = f.partition().product_weights(l)?;
    let gam_f = block_offsets(n, p, l, r - l);
    let gam_g = block_offsets(n, q, l, r - l);
    let t_f = block_offsets(n, p, r, p - r);
    let s_g = block_offsets(n, q, r, q - r);

    let fv = f.values();
    let gv = g.values();
    let mut out = Vec::with_capacity(gam_f.len() * t_f.len() * s_g.len());
    for (gf, gg) in gam_f.iter().zip(&gam_g) {
        for t in &t_f {
            let base_f = gf + t;
            for s in &s_g {
                let base_g = gg + s;
                let mut acc = 0.0;
                for ((zf, zg), w) in z_f.iter().zip(&z_g).zip(&z_w) {
                    acc += fv[base_f + zf] * gv[base_g + zg] * w;
                }
                out.push(acc);
            }
        }
    }
    Ok(PiecewiseKernel::from_parts_unchecked(out_order, f.partition().clone(), out))
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Canonical symmetrization, computed as the mean over the distinct
/// rearrangements of each multi-index (equal to the average over all `q!`
/// permutations).
pub fn symmetrize(f: &PiecewiseKernel) -> Result<PiecewiseKernel> {
    let q = f.order();
    if q > SYMMETRIZATION_CAP {
        return Err(Error::OrderCap { order: q, cap: SYMMETRIZATION_CAP });
    }
    if q < 2 {
        return Ok(f.clone());
    }
    let n = f.size();
    let fv = f.values();
    let mut out = vec![0.0; fv.len()];
    let mut done = vec![false; fv.len()];
    let mut idx = MultiIndex::new(n, q);
    let mut perm = vec![0usize; q];
    let mut orbit = Vec::new();
    for flat in 0..fv.len() {
        if !done[flat] {
            perm.copy_from_slice(idx.current());
            perm.sort_unstable();
            orbit.clear();
            loop {
                orbit.push(encode(&perm, n));
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let mean = orbit.iter().map(|&o| fv[o]).sum::<f64>() / orbit.len() as f64;
            for &o in &orbit {
                out[o] = mean;
                done[o] = true;
            }
        }
        idx.advance();
    }
    Ok(PiecewiseKernel::from_parts_unchecked(q, f.partition().clone(), out))
}

/// Symmetrization by explicit enumeration of all `q!` permutations.
pub fn symmetrize_exhaustive(f: &PiecewiseKernel) -> Result<PiecewiseKernel> {
    let q = f.order();
    if q > EXHAUSTIVE_SYMMETRIZATION_CAP {
        return Err(Error::OrderCap { order: q, cap: EXHAUSTIVE_SYMMETRIZATION_CAP });
    }
    let n = f.size();
    let perms = crate::combinatorics::permutations(q);
    let inv = 1.0 / perms.len() as f64;
    let fv = f.values();
    let mut idx = MultiIndex::new(n, q);
    let mut moved = vec![0usize; q];
    let mut out = Vec::with_capacity(fv.len());
    for _ in 0..fv.len() {
        let cur = idx.current();
        let mut acc = 0.0;
        for pi in &perms {
            for (k, &src) in pi.iter().enumerate() {
                moved[k] = cur[src];
            }
            acc += fv[encode(&moved, n)];
        }
        out.push(acc * inv);
        idx.advance();
    }
    Ok(PiecewiseKernel::from_parts_unchecked(q, f.partition().clone(), out))
}

/// `Σ_i term(i) ∏ m_{i_k}` over all flat offsets of an order-`order` tensor.
pub(crate) fn weighted_sum(masses: &[f64], order: usize, term: impl Fn(usize) -> f64) -> f64 {
    fn rec(masses: &[f64], order: usize, base: usize, term: &dyn Fn(usize) -> f64) -> f64 {
        if order == 0 {
            return term(base);
        }
        let n = masses.len();
        let stride = n.pow(order as u32 - 1);
        masses
            .iter()
            .enumerate()
            .map(|(i, m)| m * rec(masses, order - 1, base + i * stride, term))
            .sum()
    }
    rec(masses, order, 0, &term)
}

pub fn inner(f: &PiecewiseKernel, g: &PiecewiseKernel) -> Result<f64> {
    same_shape(f, g)?;
    let (fv, gv) = (f.values(), g.values());
    Ok(weighted_sum(f.partition().masses(), f.order(), |i| fv[i] * gv[i]))
}

pub fn l2_norm(f: &PiecewiseKernel) -> f64 {
    let fv = f.values();
    weighted_sum(f.partition().masses(), f.order(), |i| fv[i] * fv[i]).sqrt()
}

pub fn l4_norm(f: &PiecewiseKernel) -> f64 {
    let fv = f.values();
    weighted_sum(f.partition().masses(), f.order(), |i| fv[i].powi(4)).powf(0.25)
}

/// `a·f + b·g`.
pub fn lincomb(a: f64, f: &PiecewiseKernel, b: f64, g: &PiecewiseKernel) -> Result<PiecewiseKernel> {
    same_shape(f, g)?;
    let values = f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect();
    Ok(PiecewiseKernel::from_parts_unchecked(f.order(), f.partition().clone(), values))
}
