//! Replica-level data parallelism.
//!
//! With the `parallel` feature (default) replica maps run on the rayon pool;
//! without it they run in a plain loop. Output is always in replica order, so
//! downstream aggregation is independent of the thread count.

pub fn map_sequential<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
    T: Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

/// Evaluate `f(0), ..., f(count-1)`, in parallel when the feature is on.
pub fn map_replicas<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(count, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(count, f)
    }
}

/// Run `op` with replica maps limited to `threads` workers.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, op: impl FnOnce() -> R + Send) -> R {
    op()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RngHandle;
    use rand::RngCore;

    #[test]
    fn replica_results_do_not_depend_on_thread_count() {
        let run = || map_replicas(64, |i| RngHandle::replica(11, i as u64).next_u64());
        let one = with_threads(1, run);
        let four = with_threads(4, run);
        assert_eq!(one, four);
        assert_eq!(one, map_sequential(64, |i| RngHandle::replica(11, i as u64).next_u64()));
    }
}
