use rayon::prelude::*;

use crate::{Error, Result};

/// Evaluates `draw(i)` for `i = 0..count` on `lanes` worker threads
/// (`0` uses the global pool) and returns the results in index order.
pub fn run_draws<T, F>(count: usize, lanes: usize, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let work = || (0..count as u64).into_par_iter().map(&draw).collect::<Result<Vec<T>>>();
    if lanes == 0 {
        return work();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(lanes)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(work)
}
