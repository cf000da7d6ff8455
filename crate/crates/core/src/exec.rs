//! Execution strategy for the data-parallel inner loops.
//!
//! Every sum in this crate is exact, so the parallel and sequential paths
//! produce identical values. Without the `parallel` feature,
//! [`Exec::Parallel`] silently runs sequentially.

use crate::error::Result;
use crate::value::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    #[default]
    Sequential,
    Parallel,
}

impl Exec {
    /// Whether work will actually be spread over a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Exact sum of `f` over `items`; the first error wins.
pub fn try_sum<T, V, F>(exec: Exec, items: &[T], f: F) -> Result<V>
where
    T: Sync,
    V: Value,
    F: Fn(&T) -> Result<V> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).try_reduce(V::zero, |a, b| Ok(a + b));
    }
    let _ = exec;
    items.iter().try_fold(V::zero(), |acc, item| Ok(acc + f(item)?))
}
