// SPDX-License-Identifier: Apache-2.0

//! Execution strategy for the data-parallel kernels.
//!
//! With the `parallel` feature (default) [`Strategy::Parallel`] fans work out
//! over the rayon pool; without it every strategy runs sequentially, so the
//! rest of the crate is written once against [`par_map`].

/// How a data-parallel kernel is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Plain iterator on the calling thread.
    Sequential,
    /// Rayon work stealing when compiled with `parallel`, else sequential.
    #[default]
    Parallel,
}

impl Strategy {
    /// True when this strategy will actually use more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn par_map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if strategy == Strategy::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Runs `f` inside a pool limited to `jobs` threads (0 = default pool).
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(f);
            }
        }
    }
    let _ = jobs;
    f()
}
