//! Shared random-generation helpers for the integration suites.

#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;

use valfield_core::{FieldDescriptor, Matrix, SampleGrid, ValuedScalar};

pub fn q(p: u64) -> FieldDescriptor {
    FieldDescriptor::p_adic(p).unwrap()
}

pub fn laurent() -> FieldDescriptor {
    FieldDescriptor::laurent("t").unwrap()
}

pub fn random_matrix(
    grid: &SampleGrid,
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
) -> Matrix {
    let mut m = Matrix::zeros(&grid.descriptor, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, grid.random_scalar(rng));
        }
    }
    m
}

pub fn random_vector(grid: &SampleGrid, rng: &mut ChaCha8Rng, len: usize) -> Vec<ValuedScalar> {
    (0..len).map(|_| grid.random_scalar(rng)).collect()
}

/// A random matrix that is unimodular over the valuation ring: a product
/// of integral elementary operations applied to the identity.
pub fn random_unimodular(grid: &SampleGrid, rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    use rand::Rng;
    let d = &grid.descriptor;
    let mut m = Matrix::identity(d, n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if n > 1 {
            while j == i {
                j = rng.gen_range(0..n);
            }
        }
        if i == j {
            continue;
        }
        let c = grid.random_integral(rng);
        // row_i += c * row_j keeps the determinant a unit
        let mut row_op = Matrix::identity(d, n);
        row_op.set(i, j, c);
        m = row_op.mul(&m).unwrap();
    }
    m
}
