/// Row-major odometer over `{0..n}^order`.
#[derive(Debug, Clone)]
pub struct MultiIndex {
    n: usize,
    digits: Vec<usize>,
}

impl MultiIndex {
    pub fn new(n: usize, order: usize) -> Self {
        Self { n, digits: vec![0; order] }
    }

    pub fn current(&self) -> &[usize] {
        &self.digits
    }

    /// Steps to the next multi-index; wraps to all zeros after the last one.
    pub fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.n {
                return;
            }
            *d = 0;
        }
    }
}

pub(crate) fn encode(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

pub(crate) fn has_repeat(idx: &[usize]) -> bool {
    (0..idx.len()).any(|a| (a + 1..idx.len()).any(|b| idx[a] == idx[b]))
}

/// Flat offsets contributed by a block of `count` consecutive positions
/// starting at `start` inside a tensor of order `order`, enumerated in
/// row-major order over the block.
pub(crate) fn block_offsets(n: usize, order: usize, start: usize, count: usize) -> Vec<usize> {
    let mut out = vec![0usize];
    for k in 0..count {
        let stride = n.pow((order - 1 - (start + k)) as u32);
        let prev = std::mem::take(&mut out);
        out.reserve(prev.len() * n);
        for p in prev {
            out.extend((0..n).map(|i| p + i * stride));
        }
    }
    out
}
