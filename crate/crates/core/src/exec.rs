//! Sequential / data-parallel execution switch.
//!
//! Callers get the parallel path by default when the `parallel` feature is
//! on. Work is always split into fixed-size chunks whose boundaries do not
//! depend on the thread count, so both modes produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Items per work chunk. Also the unit of RNG stream addressing.
pub const CHUNK: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Runs `f(chunk_index, range)` for each fixed-size chunk of `0..len` and
/// concatenates the results in chunk order.
pub fn map_chunks<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, std::ops::Range<usize>) -> Vec<T> + Sync + Send,
{
    let n_chunks = len.div_ceil(CHUNK);
    let run = |c: usize| f(c, c * CHUNK..((c + 1) * CHUNK).min(len));
    match exec {
        Execution::Sequential => (0..n_chunks).flat_map(run).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n_chunks).into_par_iter().flat_map_iter(run).collect(),
    }
}

/// Applies `f` to each index of `0..len`, preserving order.
pub fn map_indices<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..len).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
    }
}

/// Counts items matching `pred`.
pub fn count_where<T, F>(exec: Execution, items: &[T], pred: F) -> usize
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().filter(|x| pred(x)).count(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().filter(|x| pred(x)).count(),
    }
}

pub(crate) fn sort_by_key<T, K, F>(exec: Execution, items: &mut [T], key: F)
where
    T: Send,
    K: Ord,
    F: Fn(&T) -> K + Sync,
{
    match exec {
        Execution::Sequential => items.sort_by_key(key),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_sort_by_key(key),
    }
}
