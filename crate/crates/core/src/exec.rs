//! Horizon-sweep execution strategy.
//!
//! Row evaluations in this crate are independent of one another, so sweeps
//! are expressed through [`map_rows`], which fans out over rayon when the
//! `parallel` feature (default) is enabled and otherwise degrades to a plain
//! sequential loop. [`map_rows_seq`] is always the sequential loop; the
//! criterion benches compare the two on the real row kernels.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every row index in `0..rows`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_rows<T, F>(rows: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..rows).into_par_iter().map(f).collect()
}

/// Applies `f` to every row index in `0..rows`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_rows<T, F>(rows: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    map_rows_seq(rows, f)
}

/// Sequential fallback, compiled unconditionally.
pub fn map_rows_seq<T, F>(rows: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..rows).map(f).collect()
}

/// Counts `n` in `lo..=hi` satisfying `pred`, chunked across threads when
/// parallel.
#[cfg(feature = "parallel")]
pub fn count_range<F>(lo: u64, hi: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    if hi < lo {
        return 0;
    }
    // Chunk manually: u64 ranges are not IndexedParallelIterator-friendly
    // and per-item spawning would swamp the predicate cost.
    let len = hi - lo + 1;
    let chunks = (rayon::current_num_threads() as u64 * 8).max(1).min(len);
    let chunk = len.div_ceil(chunks);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = lo + c * chunk;
            let end = (start + chunk - 1).min(hi);
            (start..=end).filter(|&n| pred(n)).count() as u64
        })
        .sum()
}

/// Counts `n` in `lo..=hi` satisfying `pred`.
#[cfg(not(feature = "parallel"))]
pub fn count_range<F>(lo: u64, hi: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    count_range_seq(lo, hi, pred)
}

/// Sequential counting fallback, compiled unconditionally.
pub fn count_range_seq<F>(lo: u64, hi: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool,
{
    if hi < lo {
        return 0;
    }
    (lo..=hi).filter(|&n| pred(n)).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_rows_matches_seq() {
        let par: Vec<usize> = map_rows(100, |n| n * n);
        let seq: Vec<usize> = map_rows_seq(100, |n| n * n);
        assert_eq!(par, seq);
    }

    #[test]
    fn count_range_matches_seq() {
        let pred = |n: u64| n % 3 == 0;
        assert_eq!(count_range(0, 10_000, pred), count_range_seq(0, 10_000, pred));
        assert_eq!(count_range(5, 4, pred), 0);
        assert_eq!(count_range(9, 9, pred), 1);
    }
}
