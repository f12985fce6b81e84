//! Inputs shared by the benchmarks.

use locality_core::enumerate::sample_magmas;
use locality_core::FinitePartialMagma;

/// Reproducible random tables on `n` elements.
pub fn random_magmas(n: usize, count: usize) -> Vec<FinitePartialMagma> {
    sample_magmas(n, count, 0x5eed).expect("size within the sampling limit")
}
