//! Optional fixed-size worker pools. Callers collect results in index order, so
//! output never depends on the number of workers.

/// Runs `f` inside a pool of `jobs` threads, or on the global pool when `None`.
pub(crate) fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}
