//! Data-parallel helpers.
//!
//! With the `parallel` feature the batch loops (box scans, per-tree stratum
//! enumeration, per-stratum lattice computations) run on the rayon pool.
//! Without it, or when [`Parallelism::Sequential`] is requested, they run on
//! the calling thread. Output order is the input order in both cases.

/// Execution strategy for batch computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

/// Order-preserving map over a slice.
pub fn map<T, U, F>(items: &[T], par: Parallelism, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Order-preserving flat map over a slice.
pub fn flat_map<T, U, F>(items: &[T], par: Parallelism, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    map(items, par, f).into_iter().flatten().collect()
}

/// Returns true iff `pred` holds for every item. Short-circuits.
pub fn all<T, F>(items: &[T], par: Parallelism, pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            items.par_iter().all(pred)
        }
        _ => items.iter().all(pred),
    }
}

/// The first `Some` in input order. The sequential path stops early.
pub fn find_map_first<T, U, F>(items: &[T], par: Parallelism, f: F) -> Option<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            items.par_iter().find_map_first(f)
        }
        _ => items.iter().find_map(f),
    }
}
