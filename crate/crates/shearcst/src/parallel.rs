//! Row/slice parallelism switch.
//!
//! With the default `parallel` feature the indexed maps below fan out over
//! rayon's global pool; without it they are plain sequential loops. Public
//! `*_seq` entry points elsewhere in the crate call [`map_indexed_seq`]
//! directly so benches can compare both paths in one build.

/// Maps `f` over `0..n`, collecting results in index order (parallel when
/// the `parallel` feature is enabled).
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, collecting results in index order (sequential
/// build of the same entry point).
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    map_indexed_seq(n, f)
}

/// Always-sequential indexed map; the fallback body and the bench baseline.
pub(crate) fn map_indexed_seq<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Fallible [`map_indexed`]: collects `Ok` results in index order, or the
/// first error encountered.
pub(crate) fn try_map_indexed<T: Send, E: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<T, E> + Sync + Send,
) -> Result<Vec<T>, E> {
    map_indexed(n, f).into_iter().collect()
}
