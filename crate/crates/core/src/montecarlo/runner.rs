use rayon::prelude::*;
use rayon::ThreadPoolBuilder;

use crate::error::Result;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SPECTRA_THREADS";

/// Thread cap from `SPECTRA_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `trial(0..trials)` in parallel and returns the results in trial order.
///
/// Each trial must be a pure function of its index, so the output does not depend on
/// scheduling or on the thread count.
pub fn run_trials<T, F>(trials: u32, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u32) -> Result<T> + Sync + Send,
{
    let pool = ThreadPoolBuilder::new()
        .num_threads(thread_cap().unwrap_or(0))
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials).into_par_iter().map(&trial).collect())
}
