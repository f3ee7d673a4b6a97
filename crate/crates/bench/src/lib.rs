//! Fixtures shared by the benchmarks.

use polyslip::{Mat2, ShearFrame, Vec2};

/// Deterministic unit-determinant matrices spread over a range of stretches
/// and shears.
pub fn sample_matrices(n: usize) -> Vec<Mat2> {
    (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let rho = std::f64::consts::TAU * t;
            let beta = 0.5 + 0.7 * ((7.0 * t).sin() * 0.5 + 0.5);
            let gamma = 2.0 * (11.0 * t).cos();
            ShearFrame::new(rho, beta, gamma, Vec2::from_angle(3.0 * rho)).reconstruct()
        })
        .collect()
}

/// Evenly spread texture angles in `[0, π)`.
pub fn texture(k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| std::f64::consts::PI * (i as f64 + 0.37) / k as f64)
        .collect()
}
