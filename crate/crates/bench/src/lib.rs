//! Fixtures shared by the benchmarks in `benches/`.

use randop_core::pointproc::sample;
use randop_core::{Matrix, PointConfiguration, ProcessSpec, Window};

/// A Poisson configuration on `[-half_width, half_width)`, fixed by `seed`.
pub fn poisson_config(intensity: f64, half_width: f64, seed: u64) -> PointConfiguration {
    let window = Window::symmetric(half_width).expect("positive half width");
    sample(&ProcessSpec::Poisson { intensity }, window, seed).expect("valid process")
}

/// A dense symmetric matrix with entries in `[-1, 1]`, from a fixed LCG.
pub fn symmetric_matrix(n: usize, seed: u64) -> Matrix {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = next();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}
