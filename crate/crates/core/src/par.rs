//! Execution strategy for the data-parallel loops (per-node scoring,
//! per-seed experiment runs).
//!
//! With the `parallel` feature the work is spread over rayon's pool;
//! without it every [`Execution`] runs sequentially. Results are collected
//! in index order either way, so output never depends on thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run in parallel.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..len).map(f)` collected in order, with one scratch value per worker.
pub fn map_indexed_with<S, T, I, F>(exec: Execution, len: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Send + Sync,
    F: Fn(&mut S, usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map_init(&init, |s, i| f(s, i)).collect();
    }
    let _ = exec;
    let mut scratch = init();
    (0..len).map(|i| f(&mut scratch, i)).collect()
}

/// `items.iter().map(f)` collected in order.
pub fn map_slice<A, T, F>(exec: Execution, items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Runs `f` with at most `jobs` worker threads. `None` uses the global
/// default pool; `Some(1)` forces sequential execution.
pub fn with_jobs<R, F>(jobs: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce(Execution) -> R + Send,
{
    match jobs {
        Some(0) | Some(1) => f(Execution::Sequential),
        None => f(Execution::Parallel),
        #[cfg(feature = "parallel")]
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| f(Execution::Parallel)),
            Err(_) => f(Execution::Sequential),
        },
        #[cfg(not(feature = "parallel"))]
        Some(_) => f(Execution::Sequential),
    }
}
