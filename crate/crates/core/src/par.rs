//! Thin layer over rayon so that every caller also compiles without the `parallel` feature.
//!
//! Callers pass `parallel: bool`; with the feature disabled it is ignored and
//! everything runs on the calling thread.

use std::cmp::Ordering;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether the crate was built with the rayon backend.
pub const PARALLEL_ENABLED: bool = cfg!(feature = "parallel");

pub fn available_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs `f` on a pool of `threads` workers (0 means all cores), passing whether
/// data-parallel iteration should be used.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce(bool) -> R + Send) -> R {
    let threads = if threads == 0 { available_threads() } else { threads };
    #[cfg(feature = "parallel")]
    if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to build thread pool");
        return pool.install(|| f(true));
    }
    let _ = threads;
    f(false)
}

/// Minimum of `f(i)` over `0..count` under a total order; the result does not depend on scheduling.
pub(crate) fn min_by<T, F, C>(count: usize, parallel: bool, f: F, cmp: C) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
    C: Fn(&T, &T) -> Ordering + Sync + Send,
{
    let pick = |a: T, b: T| if cmp(&b, &a) == Ordering::Less { b } else { a };
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().filter_map(f).reduce_with(pick);
    }
    let _ = parallel;
    (0..count).filter_map(f).reduce(pick)
}

/// First `i` in index order with `f(i)` present.
pub(crate) fn find_first<T, F>(count: usize, parallel: bool, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().find_map_first(f);
    }
    let _ = parallel;
    (0..count).find_map(f)
}

/// `f` applied to `0..count`, in index order.
pub(crate) fn map<T, F>(count: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..count).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let f = |i: usize| ((i * 7919) % 1000 == 3).then_some(i);
        for par in [false, true] {
            let first = with_threads(if par { 4 } else { 1 }, |p| find_first(100_000, p, f));
            assert_eq!(first, (0..100_000).find_map(f));
            let min = with_threads(4, |p| min_by(5000, p && par, |i| Some((i * 31) % 977), |a, b| a.cmp(b)));
            assert_eq!(min, Some(0));
            let v = with_threads(3, |p| map(10, p && par, |i| i * i));
            assert_eq!(v, (0..10).map(|i| i * i).collect::<Vec<_>>());
        }
    }
}
