//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the `Parallel` mode runs on the
//! rayon pool; without it both modes run on the calling thread. Results are
//! always returned in index order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// `(0..n).map(f)` in order, possibly in parallel.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// The first index (in index order) for which `f` returns `Some`, with its value.
pub fn find_first<T, F>(n: usize, exec: Execution, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().find_map_first(|i| f(i).map(|t| (i, t))),
        _ => (0..n).find_map(|i| f(i).map(|t| (i, t))),
    }
}

/// Runs `f` with at most `jobs` worker threads when given.
pub fn with_threads<R, F>(jobs: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    if let Some(n) = jobs {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = jobs;
    f()
}

pub fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| i * i % 7;
        assert_eq!(map_indexed(100, Execution::Sequential, f), map_indexed(100, Execution::Parallel, f));
        let g = |i: usize| (i % 13 == 12).then_some(i);
        assert_eq!(find_first(100, Execution::Parallel, g), Some((12, 12)));
        assert_eq!(find_first(100, Execution::Sequential, g), Some((12, 12)));
        assert_eq!(with_threads(Some(2), || 5), 5);
    }
}
