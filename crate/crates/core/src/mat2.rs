//! 2×2 matrices over any [`Scalar`]; row-major, `m[i][j]` is row i, column j.

use crate::jet::{Jet2, Scalar};

pub type Mat2<T> = [[T; 2]; 2];

pub fn trace<T: Scalar>(m: &Mat2<T>) -> T {
    m[0][0] + m[1][1]
}

pub fn det<T: Scalar>(m: &Mat2<T>) -> T {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn mul<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn apply<T: Scalar>(m: &Mat2<T>, x: &[T; 2]) -> [T; 2] {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

pub fn transpose<T: Scalar>(m: &Mat2<T>) -> Mat2<T> {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

/// Inverse through the adjugate; the caller guarantees `det != 0`.
pub fn inverse<T: Scalar>(m: &Mat2<T>) -> Mat2<T> {
    let d = det(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

pub fn sub<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn scale<T: Scalar>(a: &Mat2<T>, s: f64) -> Mat2<T> {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn values(m: &Mat2<Jet2>) -> Mat2<f64> {
    [[m[0][0].value(), m[0][1].value()], [m[1][0].value(), m[1][1].value()]]
}

pub fn identity() -> Mat2<f64> {
    [[1.0, 0.0], [0.0, 1.0]]
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat2<f64>) -> f64 {
    m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()))
}
