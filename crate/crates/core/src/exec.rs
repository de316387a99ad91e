//! Execution strategy for the data-parallel kernels.
//!
//! Every kernel that scans pairs, grid cells or interval parameters takes an
//! [`Execution`]. With the `parallel` feature (default) `Parallel` fans the
//! index range out over rayon; without it, `Parallel` degrades to the
//! sequential loop. Reductions are min/max/first-match over a total order, so
//! results do not depend on the schedule.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this build can actually run kernels on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Minimum of `f` over `range`, skipping `None`.
    pub fn min_over<T, F>(self, range: Range<usize>, f: F) -> Option<T>
    where
        T: Ord + Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().filter_map(f).min();
        }
        range.filter_map(f).min()
    }

    /// Maximum of `f` over `range`, skipping `None`.
    pub fn max_over<T, F>(self, range: Range<usize>, f: F) -> Option<T>
    where
        T: Ord + Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().filter_map(f).max();
        }
        range.filter_map(f).max()
    }

    /// First (lowest index) `Some` produced by `f`.
    pub fn find_first<T, F>(self, range: Range<usize>, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().find_map_first(f);
        }
        range.into_iter().find_map(f)
    }

    /// `f` evaluated at every index, in index order.
    pub fn map_collect<T, F>(self, range: Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }
}
