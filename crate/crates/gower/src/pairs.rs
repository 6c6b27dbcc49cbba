//! Condensed indexing for unit pairs.
//!
//! The `m = n(n-1)/2` unordered pairs `(i, j)` with `i < j` map bijectively
//! onto offsets `0..m` in lexicographic order: all pairs with `i = 0` first,
//! then `i = 1`, and so on.

/// Number of unordered pairs among `n` units.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Condensed offset of the pair `(i, j)`; requires `i < j < n`.
pub fn pair_offset(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// The pair `(i, j)` stored at `offset`; inverse of [`pair_offset`].
pub fn pair_at(n: usize, offset: usize) -> (usize, usize) {
    debug_assert!(offset < pair_count(n));
    // Estimate i from the quadratic, then correct for rounding.
    let nf = n as f64;
    let kf = offset as f64;
    let mut i = ((2.0 * nf - 1.0 - ((2.0 * nf - 1.0).powi(2) - 8.0 * kf).sqrt()) / 2.0) as usize;
    i = i.min(n - 2);
    while pair_offset(n, i, i + 1) > offset {
        i -= 1;
    }
    while i + 2 < n && pair_offset(n, i + 1, i + 2) <= offset {
        i += 1;
    }
    let j = offset - pair_offset(n, i, i + 1) + i + 1;
    (i, j)
}

/// All pairs `(i, j)` with `i < j`, in condensed-offset order.
pub fn pair_iter(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}
