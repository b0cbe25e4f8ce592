//! Fixed-order summation.
//!
//! Every reduction in the crate goes through [`pairwise_sum`] over buffers whose
//! layout depends only on the grid, never on the number of worker threads, so
//! results are bit-identical for any thread count.

const BLOCK: usize = 8;

/// Pairwise (tree) sum with a fixed split point at `len / 2`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}
