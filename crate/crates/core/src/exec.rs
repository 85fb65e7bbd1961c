//! Replica execution.
//!
//! Replicas are mapped in parallel and collected in replica order, so every
//! reduction over them is independent of the thread count.

use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;

#[derive(Clone)]
pub struct Executor {
    pool: Option<Arc<ThreadPool>>,
    threads: usize,
}

impl Executor {
    /// `threads = 0` uses rayon's default; `1` runs inline.
    pub fn new(threads: usize) -> Self {
        let pool = (threads != 1).then(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("failed to build thread pool"),
            )
        });
        Executor { pool, threads }
    }

    pub fn sequential() -> Self {
        Executor::new(1)
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// `f(0), f(1), …, f(count − 1)` in index order.
    pub fn map<T, F>(&self, count: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match &self.pool {
            None => (0..count).map(f).collect(),
            Some(pool) => pool.install(|| (0..count).into_par_iter().map(f).collect()),
        }
    }
}

impl Default for Executor {
    fn default() -> Self {
        Executor::new(0)
    }
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor").field("threads", &self.threads).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = Executor::sequential().map(1000, |i| i * i);
        let par = Executor::new(4).map(1000, |i| i * i);
        assert_eq!(seq, par);
    }
}
