//! Data-parallel map/reduce with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Strategy::Parallel`] runs on
//! the rayon global pool; without it every strategy runs sequentially. All
//! reductions used in this crate are associative and commutative (exact
//! integer sums), so both strategies give identical results.

/// How to run an embarrassingly parallel loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Folds each item into an accumulator created by `identity`, then merges
    /// the accumulators with `reduce`.
    #[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
    pub fn map_reduce<T, A, Id, F, R>(self, items: &[T], identity: Id, fold: F, reduce: R) -> A
    where
        T: Sync,
        A: Send,
        Id: Fn() -> A + Sync + Send,
        F: Fn(A, &T) -> A + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Strategy::Parallel => {
                use rayon::prelude::*;
                items
                    .par_iter()
                    .fold(&identity, &fold)
                    .reduce(&identity, &reduce)
            }
            _ => items.iter().fold(identity(), fold),
        }
    }
}
