//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) these run on the rayon pool; without
//! it they degrade to plain sequential loops with identical results. Every
//! reduction used here is associative and commutative (sum, min, max) or
//! order-restoring (map + collect), so results never depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f(i)` for every `i in 0..n`, collected in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// `f(item)` for every item of a slice, collected in order.
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Fallible map over `0..n`; the first error in index order wins.
pub fn try_map_range<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_range(n, f).into_iter().collect()
}

/// Index of the lowest `i in 0..n` with `f(i) = Some(_)`, along with the value.
///
/// The parallel variant may evaluate indices past the winner, but the
/// returned pair is always the lowest successful index.
pub fn find_first<T, F>(n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .filter_map(|i| f(i).map(|v| (i, v)))
            .min_by_key(|(i, _)| *i)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(|i| f(i).map(|v| (i, v)))
    }
}

pub fn sum_range<F>(n: usize, f: F) -> u128
where
    F: Fn(usize) -> u128 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).sum()
    }
}

pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_returns_lowest_index() {
        let hit = find_first(1000, |i| (i % 7 == 3 && i > 100).then_some(i * 2));
        assert_eq!(hit, Some((101, 202)));
        assert_eq!(find_first(10, |_| None::<u8>), None);
    }

    #[test]
    fn sum_matches_sequential() {
        assert_eq!(sum_range(100, |i| i as u128), 4950);
    }
}
