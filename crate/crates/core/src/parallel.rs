//! Worker pool and deterministic reductions.
//!
//! The pool size comes from `MENGER_THREADS` (default: available
//! parallelism). Every parallel loop collects its partial results in index
//! order and reduces them with [`pairwise_sum`], so results do not depend on
//! the worker count.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "MENGER_THREADS";

static POOL: OnceLock<ThreadPool> = OnceLock::new();

/// Parses a worker count: a positive integer.
pub fn parse_thread_count(s: &str) -> Option<usize> {
    s.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

/// Worker count from the environment, falling back to the machine's
/// available parallelism when unset or invalid.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| parse_thread_count(&s))
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn pool() -> &'static ThreadPool {
    POOL.get_or_init(|| {
        ThreadPoolBuilder::new()
            .num_threads(thread_count())
            .build()
            .expect("thread pool")
    })
}

/// Sizes the shared pool explicitly. Returns `false` if the pool already
/// exists, in which case its size is unchanged.
pub fn init_thread_pool(threads: usize) -> bool {
    let mut fresh = false;
    POOL.get_or_init(|| {
        fresh = true;
        ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .expect("thread pool")
    });
    fresh
}

/// Runs `f` inside the shared pool.
pub(crate) fn install<R: Send, F: FnOnce() -> R + Send>(f: F) -> R {
    pool().install(f)
}

/// Sum over a fixed binary tree.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
