//! Data-parallel helpers with a sequential fallback.
//!
//! Every enumeration in the crate funnels through [`map_collect`], so the
//! choice between rayon and a plain loop is made in one place. Results are
//! always returned in input order, which keeps outputs deterministic.

/// Execution strategy for the enumeration kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise behaves
    /// like [`Strategy::Sequential`].
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

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, R, F>(items: Vec<T>, strategy: Strategy, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match strategy {
        Strategy::Sequential => items.into_iter().map(f).collect(),
        Strategy::Parallel => par_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..500).collect();
        let seq = map_collect(xs.clone(), Strategy::Sequential, |x| x * x);
        let par = map_collect(xs, Strategy::Parallel, |x| x * x);
        assert_eq!(seq, par);
    }
}
