//! Sequential / data-parallel execution of independent work items.
//!
//! With the `parallel` feature, [`Strategy::Parallel`] fans work out over
//! the rayon global pool. Without it, both strategies run sequentially.
//! Output order always matches input order, so merged reports are
//! identical under either strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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
    /// Whether this strategy actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

pub(crate) fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

pub(crate) fn flat_map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().flat_map_iter(f).collect();
    }
    let _ = strategy;
    items.iter().flat_map(f).collect()
}

pub(crate) fn count<T, F>(strategy: Strategy, items: &[T], pred: F) -> usize
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().filter(|x| pred(x)).count();
    }
    let _ = strategy;
    items.iter().filter(|x| pred(x)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let a = map(Strategy::Sequential, &items, |x| x * x);
        let b = map(Strategy::Parallel, &items, |x| x * x);
        assert_eq!(a, b);
        let fa = flat_map(Strategy::Sequential, &items, |&x| vec![x; (x % 3) as usize]);
        let fb = flat_map(Strategy::Parallel, &items, |&x| vec![x; (x % 3) as usize]);
        assert_eq!(fa, fb);
        assert_eq!(count(Strategy::Parallel, &items, |x| x % 7 == 0), 143);
    }
}
