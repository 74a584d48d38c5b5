//! Small dense helpers shared by the calculus and wedge modules.
//!
//! Real points of ℝ²ⁿ are stored interleaved, `(x_1, y_1, x_2, y_2, …)`, so
//! that the standard structure is block diagonal with 2×2 blocks
//! `[[0, -1], [1, 0]]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// Standard complex structure on ℝ²ⁿ.
pub fn j_standard(n: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = -1.0;
        j[(2 * k + 1, 2 * k)] = 1.0;
    }
    j
}

pub fn to_real(z: &[C64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect()
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn op_norm_real(m: &RMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|c| c.conj())
}

/// Inverse, refused when the condition number exceeds `cond_max`.
pub fn inverse_checked(m: &CMatrix, cond_max: f64) -> Option<CMatrix> {
    let sv = m.clone().svd(false, false).singular_values;
    let (lo, hi) = (sv.min(), sv.max());
    if !(lo > 0.0) || hi / lo > cond_max {
        return None;
    }
    m.clone().try_inverse()
}

pub fn inverse_checked_real(m: &RMatrix, cond_max: f64) -> Option<RMatrix> {
    let sv = m.clone().svd(false, false).singular_values;
    let (lo, hi) = (sv.min(), sv.max());
    if !(lo > 0.0) || hi / lo > cond_max {
        return None;
    }
    m.clone().try_inverse()
}

/// Real 2n×2n matrix of the conjugate-linear map `v ↦ A v̄`.
pub fn conj_linear_to_real(a: &CMatrix) -> RMatrix {
    let n = a.nrows();
    let mut l = RMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let e = a[(r, c)];
            // (re + i im)(x - i y) = (re x + im y) + i (im x - re y)
            l[(2 * r, 2 * c)] = e.re;
            l[(2 * r, 2 * c + 1)] = e.im;
            l[(2 * r + 1, 2 * c)] = e.im;
            l[(2 * r + 1, 2 * c + 1)] = -e.re;
        }
    }
    l
}

/// Real 2n×2n matrix of the complex-linear map `v ↦ M v`.
pub fn complex_linear_to_real(m: &CMatrix) -> RMatrix {
    let n = m.nrows();
    let mut l = RMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let e = m[(r, c)];
            l[(2 * r, 2 * c)] = e.re;
            l[(2 * r, 2 * c + 1)] = -e.im;
            l[(2 * r + 1, 2 * c)] = e.im;
            l[(2 * r + 1, 2 * c + 1)] = e.re;
        }
    }
    l
}

pub fn apply_real(m: &RMatrix, x: &[f64]) -> Vec<f64> {
    let v = m * DVector::from_column_slice(x);
    v.iter().copied().collect()
}

pub fn cvec_norm_max(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn cvec_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn cvec_norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Row vector times matrix.
pub fn row_times(row: &[C64], m: &CMatrix) -> Vec<C64> {
    (0..m.ncols())
        .map(|c| row.iter().enumerate().map(|(r, v)| v * m[(r, c)]).sum())
        .collect()
}

/// Matrix times column vector.
pub fn mat_vec(m: &CMatrix, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}

/// Solve a small real linear system by LU; `None` when singular.
pub fn solve_real(m: &RMatrix, b: &[f64]) -> Option<Vec<f64>> {
    m.clone()
        .lu()
        .solve(&DVector::from_column_slice(b))
        .map(|v| v.iter().copied().collect())
}
