use super::engine::{check_middle, check_pair, check_same_order, ContractionEngine, Pair};
use crate::kernel::PiecewiseKernel;
use crate::{Error, Result};

/// Order-2 evaluator working with `N × N` matrices only, `O(N³)` time and
/// `O(N²)` memory. With `M = diag(m)` and `A = F M F`:
///
/// * `f ⋆₁¹ f = A`, `f ⋆₂⁰ f = F∘F`, `f ⋆₂¹ f = w` with `w_b = Σ_a F_ab² m_a`,
/// * `‖f ⋆₁⁰ f‖² = ‖w‖²`,
/// * `‖f ⋆̃₁⁰ f‖² = (‖w‖² + 2X)/3` with `X = Σ_ab F_ab² A_ab m_a m_b`,
/// * `‖f ⋆̃₀⁰ f‖² = (2‖f‖⁴ + 4‖A‖²)/6`.
#[derive(Debug, Clone)]
pub struct MatrixEngine {
    n: usize,
    norm_sq: f64,
    l4_pow4: f64,
    a_sq: f64,
    w_sq: f64,
    x: f64,
    a_f: f64,
    cube: f64,
    f: Vec<f64>,
    a: Vec<f64>,
    m: Vec<f64>,
}

impl MatrixEngine {
    pub fn new(kernel: &PiecewiseKernel) -> Result<Self> {
        if kernel.order() != 2 {
            return Err(Error::Unsupported {
                engine: "matrix-q2",
                what: format!("kernels of order {}", kernel.order()),
            });
        }
        kernel.ensure_symmetric()?;
        let n = kernel.size();
        let f = kernel.values().to_vec();
        let m = kernel.partition().masses().to_vec();

        let mut a = vec![0.0; n * n];
        for i in 0..n {
            let row = &mut a[i * n..(i + 1) * n];
            for z in 0..n {
                let fz = f[i * n + z] * m[z];
                if fz == 0.0 {
                    continue;
                }
                for (dst, v) in row.iter_mut().zip(&f[z * n..(z + 1) * n]) {
                    *dst += fz * v;
                }
            }
        }

        let (mut norm_sq, mut l4_pow4, mut a_sq, mut x, mut a_f, mut cube) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let mut w = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let mm = m[i] * m[j];
                let v = f[i * n + j];
                let v2 = v * v;
                let aij = a[i * n + j];
                norm_sq += v2 * mm;
                l4_pow4 += v2 * v2 * mm;
                a_sq += aij * aij * mm;
                x += v2 * aij * mm;
                a_f += aij * v * mm;
                cube += v2 * v * mm;
                w[j] += v2 * m[i];
            }
        }
        let w_sq = w.iter().zip(&m).map(|(w, m)| w * w * m).sum();
        Ok(Self { n, norm_sq, l4_pow4, a_sq, w_sq, x, a_f, cube, f, a, m })
    }
}

impl ContractionEngine for MatrixEngine {
    fn name(&self) -> &'static str {
        "matrix-q2"
    }

    fn order(&self) -> usize {
        2
    }

    fn size(&self) -> usize {
        self.n
    }

    fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    fn l4_pow4(&self) -> f64 {
        self.l4_pow4
    }

    fn contraction_norm_sq(&self, pair: Pair) -> Result<f64> {
        check_pair(2, pair)?;
        Ok(match pair {
            (0, 0) | (2, 2) => self.norm_sq * self.norm_sq,
            (1, 0) | (2, 1) => self.w_sq,
            (1, 1) => self.a_sq,
            _ => self.l4_pow4,
        })
    }

    fn sym_inner(&self, a: Pair, b: Pair) -> Result<f64> {
        check_same_order(2, a, b)?;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Ok(match (a, b) {
            ((0, 0), _) => (2.0 * self.norm_sq * self.norm_sq + 4.0 * self.a_sq) / 6.0,
            ((1, 0), _) => (self.w_sq + 2.0 * self.x) / 3.0,
            ((1, 1), (1, 1)) => self.a_sq,
            ((1, 1), (2, 0)) => self.x,
            ((2, 0), (2, 0)) => self.l4_pow4,
            ((2, 1), _) => self.w_sq,
            _ => self.norm_sq * self.norm_sq,
        })
    }

    fn sym_inner_kernel(&self, pair: Pair) -> Result<f64> {
        check_same_order(2, pair, (2, 0))?;
        Ok(if pair == (1, 1) { self.a_f } else { self.cube })
    }

    fn middle_deviation_sq(&self, c: f64) -> Result<f64> {
        check_middle(2)?;
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = self.a[i * n + j] - c * self.f[i * n + j];
                acc += d * d * self.m[i] * self.m[j];
            }
        }
        Ok(acc)
    }
}
