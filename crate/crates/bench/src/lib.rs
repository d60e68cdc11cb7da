//! Benchmark fixtures shared by the criterion benches.

use qmc_anova::pointsets::{balanced_sigma, hammersley_2d, random_pointset};
use qmc_anova::{PointSet, Weights};

/// Balanced Hammersley set with `2^m` points.
pub fn hammersley(m: usize) -> PointSet {
    hammersley_2d(m, &balanced_sigma(m)).expect("valid m")
}

/// Uniform random set with a fixed seed.
pub fn random(d: usize, n: usize) -> PointSet {
    random_pointset(d, n, 0x5eed).expect("valid sizes")
}

/// Product weights `γ_j = 0.5` with every subset active.
pub fn product_weights(d: usize) -> Weights {
    Weights::product(&vec![0.5; d]).expect("valid weights")
}
