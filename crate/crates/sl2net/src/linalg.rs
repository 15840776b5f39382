//! Small dense complex matrices on two and three spin-1/2 legs.
//!
//! Basis ordering: leg 1 is the most significant bit, so `|a b>` sits at
//! index `2a + b` and `|a b c>` at `4a + 2b + c`.

use crate::error::{Error, Result};
use nalgebra::{Matrix2, Matrix4, SMatrix};
use num_complex::Complex64;

pub type C = Complex64;
pub type Mat2 = Matrix2<C>;
pub type Mat4 = Matrix4<C>;
pub type Mat8 = SMatrix<C, 8, 8>;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);
pub const I: C = C::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// 4x4 matrix from row-major entries.
pub fn mat4(rows: [[C; 4]; 4]) -> Mat4 {
    Mat4::from_fn(|i, j| rows[i][j])
}

/// Matrix with the six-vertex/face sparsity pattern:
/// `diag(a0, [[b, c],[cb, bb]], a3)`.
pub fn face4(a0: C, b: C, c: C, cb: C, bb: C, a3: C) -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = a0;
    m[(1, 1)] = b;
    m[(1, 2)] = c;
    m[(2, 1)] = cb;
    m[(2, 2)] = bb;
    m[(3, 3)] = a3;
    m
}

/// Symmetric eight-vertex pattern with weights a, b, c, d.
pub fn sym8(a: C, b: C, c: C, d: C) -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = a;
    m[(3, 3)] = a;
    m[(1, 1)] = b;
    m[(2, 2)] = b;
    m[(1, 2)] = c;
    m[(2, 1)] = c;
    m[(0, 3)] = d;
    m[(3, 0)] = d;
    m
}

pub fn diag4(d: [C; 4]) -> Mat4 {
    Mat4::from_diagonal(&nalgebra::Vector4::new(d[0], d[1], d[2], d[3]))
}

/// Leg swap on two spin-1/2 legs.
pub fn swap() -> Mat4 {
    let mut p = Mat4::zeros();
    p[(0, 0)] = ONE;
    p[(1, 2)] = ONE;
    p[(2, 1)] = ONE;
    p[(3, 3)] = ONE;
    p
}

/// `P M P`, i.e. the same operator with its legs exchanged.
pub fn flip(m: &Mat4) -> Mat4 {
    let p = swap();
    p * m * p
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|i, j| a[(i >> 1, j >> 1)] * b[(i & 1, j & 1)])
}

pub fn pauli(k: usize) -> Mat2 {
    match k {
        0 => Mat2::identity(),
        1 => Mat2::new(ZERO, ONE, ONE, ZERO),
        2 => Mat2::new(ZERO, -I, I, ZERO),
        3 => Mat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Partial transpose on the second leg.
pub fn pt2(m: &Mat4) -> Mat4 {
    Mat4::from_fn(|r, col| {
        let (i, j) = (r >> 1, r & 1);
        let (k, l) = (col >> 1, col & 1);
        m[(2 * i + l, 2 * k + j)]
    })
}

/// Partial transpose on the first leg.
pub fn pt1(m: &Mat4) -> Mat4 {
    Mat4::from_fn(|r, col| {
        let (i, j) = (r >> 1, r & 1);
        let (k, l) = (col >> 1, col & 1);
        m[(2 * k + j, 2 * i + l)]
    })
}

pub fn inv4(m: &Mat4) -> Result<Mat4> {
    m.try_inverse()
        .ok_or_else(|| Error::Singular("4x4 matrix is not invertible".into()))
}

/// Embed a two-leg operator into legs `(i, j)` (1-based, `i < j`) of three legs.
pub fn embed(m: &Mat4, legs: (usize, usize)) -> Mat8 {
    let (i, j) = legs;
    assert!(i < j && j <= 3 && i >= 1, "legs must satisfy 1 <= i < j <= 3");
    let other = 6 - i - j;
    let bit = |idx: usize, leg: usize| (idx >> (3 - leg)) & 1;
    Mat8::from_fn(|a, b| {
        if bit(a, other) != bit(b, other) {
            return ZERO;
        }
        m[(2 * bit(a, i) + bit(a, j), 2 * bit(b, i) + bit(b, j))]
    })
}

/// Single-leg operator acting on `leg` of three legs.
pub fn embed1(m: &Mat2, leg: usize) -> Mat8 {
    let bit = |idx: usize, l: usize| (idx >> (3 - l)) & 1;
    Mat8::from_fn(|a, b| {
        for l in 1..=3 {
            if l != leg && bit(a, l) != bit(b, l) {
                return ZERO;
            }
        }
        m[(bit(a, leg), bit(b, leg))]
    })
}

/// Projector on basis state `k` of one leg, embedded in three legs.
pub fn leg_projector(leg: usize, k: usize) -> Mat8 {
    let mut p = Mat2::zeros();
    p[(k, k)] = ONE;
    embed1(&p, leg)
}

/// Max-modulus entry of a matrix.
pub fn max_abs<const R: usize, const K: usize>(m: &SMatrix<C, R, K>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff<const R: usize, const K: usize>(a: &SMatrix<C, R, K>, b: &SMatrix<C, R, K>) -> f64 {
    max_abs(&(a - b))
}

pub fn is_finite4(m: &Mat4) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
