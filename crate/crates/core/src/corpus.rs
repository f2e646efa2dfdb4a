//! Grid corpora of small vectors: exhaustive enumeration and seeded samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Rational;
use crate::vector::FinVec;

/// `{±1, ±1/2, ±2}`.
pub fn standard_grid() -> Vec<Rational> {
    ["1", "-1", "1/2", "-1/2", "2", "-2"].iter().map(|s| s.parse().unwrap()).collect()
}

/// `{±1, ±1/2}`.
pub fn small_grid() -> Vec<Rational> {
    ["1", "-1", "1/2", "-1/2"].iter().map(|s| s.parse().unwrap()).collect()
}

/// Number of vectors with support in `[1, window]` and entries in `grid ∪ {0}`.
pub fn grid_size(window: usize, grid_len: usize) -> usize {
    (grid_len + 1).pow(window as u32)
}

/// The vector with mixed-radix code `code`: digit `j` (least significant
/// first) selects the entry at index `j + 1`, with digit 0 meaning zero.
pub fn grid_vector(code: usize, window: usize, grid: &[Rational]) -> FinVec {
    let base = grid.len() + 1;
    let mut c = code;
    let mut pairs = Vec::new();
    for i in 1..=window {
        let d = c % base;
        c /= base;
        if d > 0 {
            pairs.push((i, grid[d - 1].clone()));
        }
    }
    FinVec::from_pairs(pairs).expect("indices start at 1")
}

/// Every vector of the grid corpus, zero first, in code order.
pub fn grid_vectors(window: usize, grid: &[Rational]) -> impl Iterator<Item = FinVec> + '_ {
    (0..grid_size(window, grid.len())).map(move |c| grid_vector(c, window, grid))
}

/// `count` corpus vectors drawn uniformly with replacement.
pub fn sample_vectors(window: usize, grid: &[Rational], count: usize, seed: u64) -> Vec<FinVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid_size(window, grid.len());
    (0..count).map(|_| grid_vector(rng.gen_range(0..n), window, grid)).collect()
}

/// `count` ordered pairs of corpus vectors.
pub fn sample_pairs(window: usize, grid: &[Rational], count: usize, seed: u64) -> Vec<(FinVec, FinVec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid_size(window, grid.len());
    (0..count)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            (grid_vector(a, window, grid), grid_vector(b, window, grid))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        let g = vec![Rational::one(), -Rational::one()];
        let all: Vec<FinVec> = grid_vectors(4, &g).collect();
        assert_eq!(all.len(), 81);
        assert!(all[0].is_zero());
        assert_eq!(all[1], FinVec::basis(1));
        let distinct: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 81);
        assert!(all.iter().all(|v| v.max_index().is_none_or(|m| m <= 4)));
    }

    #[test]
    fn samples_are_reproducible() {
        let g = standard_grid();
        assert_eq!(sample_vectors(6, &g, 20, 7), sample_vectors(6, &g, 20, 7));
        assert_ne!(sample_vectors(6, &g, 20, 7), sample_vectors(6, &g, 20, 8));
        assert_eq!(sample_pairs(3, &g, 5, 1).len(), 5);
    }
}
