//! Execution strategy for exhaustive scans.
//!
//! With the `parallel` feature the scans fan out over rayon; without it, or
//! when `Exec::Sequential` is requested, they run on the calling thread. Both
//! paths return results in the same order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Indices in `0..n` satisfying `pred`, in increasing order.
pub fn filter_range<F>(exec: Exec, n: u64, pred: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().filter(|&i| pred(i)).collect();
    }
    let _ = exec;
    (0..n).filter(|&i| pred(i)).collect()
}

/// `f(i)` for every `i` in `0..n` whose result is `Some`, in index order.
pub fn filter_map_range<T, F>(exec: Exec, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().filter_map(&f).collect();
    }
    let _ = exec;
    (0..n).filter_map(f).collect()
}

/// Maps over a slice, preserving order.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(&f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `0..n`, preserving order.
pub fn map_range<R, F>(exec: Exec, n: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(&f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Whether every element of the slice satisfies `pred`.
pub fn all_slice<T, F>(exec: Exec, items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().all(&pred);
    }
    let _ = exec;
    items.iter().all(pred)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let pred = |i: u64| i % 7 == 3;
        assert_eq!(filter_range(Exec::Sequential, 1000, pred), filter_range(Exec::Parallel, 1000, pred));
        let sq = |i: u64| i * i;
        assert_eq!(map_range(Exec::Sequential, 100, sq), map_range(Exec::Parallel, 100, sq));
    }
}
