//! Execution strategy for the data-parallel loops (erasure subsets, sphere sampling).
//!
//! With the `parallel` feature the work is spread over the rayon pool; without it,
//! or with [`Execution::Sequential`], the same closures run in order. Results never
//! depend on the schedule.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether work will actually run on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `range`, keeping index order in the output.
pub(crate) fn map_range<R, F>(exec: Execution, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Smallest element of `range` satisfying `pred`.
pub(crate) fn find_first<F>(exec: Execution, range: Range<u64>, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().find_first(|&i| pred(i));
    }
    let _ = exec;
    range.into_iter().find(|&i| pred(i))
}
