use super::grid::GridKernel;
use crate::combinatorics::binomial_f64;
use crate::{Error, Result};

/// Computes `Σ_{i_1<…<i_q} h(c_{i_1}, …, c_{i_q})` for the cells `c_i` of a
/// point configuration.
pub trait UstatEvaluator: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, k: &GridKernel, cells: &[usize]) -> Result<f64>;
}

/// Enumerates increasing index tuples. Cost `C(n, q)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Combinations;

impl Combinations {
    pub fn limit(order: usize) -> usize {
        match order {
            0..=2 => 3000,
            3 => 400,
            _ => 120,
        }
    }
}

impl UstatEvaluator for Combinations {
    fn name(&self) -> &'static str {
        "combinations"
    }

    fn evaluate(&self, k: &GridKernel, cells: &[usize]) -> Result<f64> {
        let (q, n) = (k.order(), cells.len());
        if n > Self::limit(q) {
            return Err(Error::Guard(format!("{n} points exceed the combination limit {} for order {q}", Self::limit(q))));
        }
        if n < q {
            return Ok(0.0);
        }
        let mut pos: Vec<usize> = (0..q).collect();
        let mut buf = vec![0usize; q];
        let mut acc = 0.0;
        loop {
            for (b, &p) in buf.iter_mut().zip(&pos) {
                *b = cells[p];
            }
            acc += k.value(&buf);
            let mut i = q;
            loop {
                if i == 0 {
                    return Ok(acc);
                }
                i -= 1;
                if pos[i] < n - q + i {
                    break;
                }
            }
            pos[i] += 1;
            for j in i + 1..q {
                pos[j] = pos[j - 1] + 1;
            }
        }
    }
}

/// Groups points by cell: a cell multiset with multiplicities `k_a`
/// contributes `h·∏ C(n_a, k_a)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CellCounts;

impl UstatEvaluator for CellCounts {
    fn name(&self) -> &'static str {
        "cell-counts"
    }

    fn evaluate(&self, k: &GridKernel, cells: &[usize]) -> Result<f64> {
        let c = k.cells();
        let mut counts = vec![0usize; c];
        for &i in cells {
            *counts.get_mut(i).ok_or_else(|| Error::IndexRange(format!("cell {i} of {c}")))? += 1;
        }
        let occupied: Vec<usize> = (0..c).filter(|&a| counts[a] > 0).collect();
        let mut tuple = Vec::with_capacity(k.order());
        Ok(multisets(k, &counts, &occupied, 0, &mut tuple, 1.0))
    }
}

fn multisets(k: &GridKernel, counts: &[usize], occupied: &[usize], from: usize, tuple: &mut Vec<usize>, weight: f64) -> f64 {
    let q = k.order();
    if tuple.len() == q {
        return weight * k.value(tuple);
    }
    let mut acc = 0.0;
    for (pos, &a) in occupied.iter().enumerate().skip(from) {
        let room = q - tuple.len();
        for mult in 1..=room.min(counts[a]) {
            for _ in 0..mult {
                tuple.push(a);
            }
            acc += multisets(k, counts, occupied, pos + 1, tuple, weight * binomial_f64(counts[a], mult));
            tuple.truncate(tuple.len() - mult);
        }
    }
    acc
}

/// Evaluators selectable by name.
pub struct EvaluatorRegistry {
    entries: Vec<Box<dyn UstatEvaluator>>,
}

impl EvaluatorRegistry {
    /// `cell-counts` (default) and `combinations`.
    pub fn builtin() -> Self {
        Self { entries: vec![Box::new(CellCounts), Box::new(Combinations)] }
    }

    pub fn register(&mut self, e: Box<dyn UstatEvaluator>) {
        self.entries.retain(|x| x.name() != e.name());
        self.entries.push(e);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn UstatEvaluator> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownEngine(name.to_string()))
    }
}

impl Default for EvaluatorRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn counts_pairs() {
        let ones = GridKernel::new(2, 1, 3, vec![1.0; 9], None).unwrap();
        let cells = [0, 2, 1, 1, 0];
        assert_eq!(Combinations.evaluate(&ones, &cells).unwrap(), 10.0);
        assert_eq!(CellCounts.evaluate(&ones, &cells).unwrap(), 10.0);
        assert_eq!(CellCounts.evaluate(&ones, &[1]).unwrap(), 0.0);
        assert!(CellCounts.evaluate(&ones, &[3]).is_err());
    }

    #[test]
    fn evaluators_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for q in [2, 3, 4] {
            let k = GridKernel::from_fn(q, 1, 3, |i| {
                let mut s = i.to_vec();
                s.sort_unstable();
                s.iter().enumerate().map(|(a, &b)| ((a + 1) * (b + 2)) as f64).product::<f64>().sin()
            })
            .unwrap();
            let cells: Vec<usize> = (0..30).map(|_| rng.random_range(0..3)).collect();
            let a = Combinations.evaluate(&k, &cells).unwrap();
            let b = CellCounts.evaluate(&k, &cells).unwrap();
            assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()), "q={q}: {a} vs {b}");
        }
    }

    #[test]
    fn registry_and_guard() {
        let reg = EvaluatorRegistry::builtin();
        assert_eq!(reg.names(), vec!["cell-counts", "combinations"]);
        assert!(reg.get("nope").is_err());
        let k = GridKernel::new(4, 1, 1, vec![1.0], None).unwrap();
        let cells = vec![0; 121];
        assert!(matches!(reg.get("combinations").unwrap().evaluate(&k, &cells), Err(Error::Guard(_))));
        assert_eq!(reg.get("cell-counts").unwrap().evaluate(&k, &cells).unwrap(), binomial_f64(121, 4));
    }
}
