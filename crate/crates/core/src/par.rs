//! Data-parallel map helper with a sequential fallback.
//!
//! With the `parallel` feature (default) enabled, `par_map` fans out over the
//! rayon pool when asked to; without it the call is always sequential. The
//! output order equals the input order either way, which keeps every artifact
//! byte-stable across thread counts.

#[cfg(feature = "parallel")]
pub fn par_map<T: Sync, U: Send, F>(items: &[T], parallel: bool, f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Sync, U: Send, F>(items: &[T], _parallel: bool, f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Number of worker threads the parallel path would use.
pub fn effective_threads(parallel: bool) -> usize {
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return rayon::current_num_threads();
        }
    }
    let _ = parallel;
    1
}
