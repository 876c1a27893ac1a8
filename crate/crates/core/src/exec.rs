//! Order-preserving map and fixed-shape reductions, sequential or parallel.

use alloc::vec::Vec;

/// Runs independent work items. Implementations must return results in input order.
pub trait Executor: Sync {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}

/// Pairwise tree reduction whose shape depends only on `items.len()`, so the
/// result is identical for every executor.
pub fn tree_reduce<E, R, F>(exec: &E, mut items: Vec<R>, zero: R, op: F) -> R
where
    E: Executor,
    R: Send + Sync + Clone,
    F: Fn(&R, &R) -> R + Sync + Send,
{
    if items.is_empty() {
        return zero;
    }
    while items.len() > 1 {
        let odd = if items.len() % 2 == 1 { items.pop() } else { None };
        let pairs: Vec<(R, R)> = {
            let mut it = items.into_iter();
            let mut v = Vec::new();
            while let (Some(a), Some(b)) = (it.next(), it.next()) {
                v.push((a, b));
            }
            v
        };
        items = exec.map(&pairs, |(a, b)| op(a, b));
        if let Some(o) = odd {
            items.push(o);
        }
    }
    items.pop().unwrap_or(zero)
}
