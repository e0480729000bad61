//! Constant cubic basis matrices.
//!
//! Every curve form used here evaluates as `xᵀ · M · [t³, t², t, 1]ᵀ`, so row
//! `k` of `M` holds the power coefficients of the `k`-th basis function.

use super::rational::{rat, RationalMatrix};
use super::Mat4;

const HERMITE: [[i64; 4]; 4] = [[2, -3, 0, 1], [-2, 3, 0, 0], [1, -2, 1, 0], [1, -1, 0, 0]];

const BEZIER: [[i64; 4]; 4] = [[-1, 3, -3, 1], [3, -6, 3, 0], [-3, 3, 0, 0], [1, 0, 0, 0]];

// uniform cubic B-spline segment, in sixths
const BSPLINE_SIXTHS: [[i64; 4]; 4] = [[-1, 3, -3, 1], [3, -6, 0, 4], [-3, 3, 3, 1], [1, 0, 0, 0]];

// [(1-t)³, (1-t)², 1-t, 1]ᵀ = T · [t³, t², t, 1]ᵀ
const REVERSAL: [[i64; 4]; 4] = [[-1, 3, -3, 1], [0, 1, -2, 1], [0, 0, -1, 1], [0, 0, 0, 1]];

fn to_mat4(m: &[[i64; 4]; 4], denom: f64) -> Mat4 {
    Mat4::from_fn(|i, j| m[i][j] as f64 / denom)
}

/// Hermite basis `M_H` for controls `[P(0), P(1), P'(0), P'(1)]`.
pub fn hermite() -> Mat4 {
    to_mat4(&HERMITE, 1.0)
}

/// Bernstein basis `M_B`.
pub fn bezier() -> Mat4 {
    to_mat4(&BEZIER, 1.0)
}

/// Uniform cubic B-spline segment basis `M_S`.
pub fn bspline() -> Mat4 {
    to_mat4(&BSPLINE_SIXTHS, 6.0)
}

/// Parameter reversal `T`: maps the power vector of `t` to that of `1 - t`.
pub fn reversal() -> Mat4 {
    to_mat4(&REVERSAL, 1.0)
}

pub fn hermite_exact() -> RationalMatrix {
    RationalMatrix::from_i64_rows(&HERMITE)
}

pub fn bezier_exact() -> RationalMatrix {
    RationalMatrix::from_i64_rows(&BEZIER)
}

pub fn bspline_exact() -> RationalMatrix {
    let mut m = RationalMatrix::from_i64_rows(&BSPLINE_SIXTHS);
    for i in 0..4 {
        for j in 0..4 {
            let v = m.get(i, j) / rat(6);
            m.set(i, j, v);
        }
    }
    m
}

pub fn reversal_exact() -> RationalMatrix {
    RationalMatrix::from_i64_rows(&REVERSAL)
}

/// `[t³, t², t, 1]`.
pub fn power_vector(t: f64) -> [f64; 4] {
    [t * t * t, t * t, t, 1.0]
}

/// Derivative of [`power_vector`], `[3t², 2t, 1, 0]`.
pub fn power_vector_deriv(t: f64) -> [f64; 4] {
    [3.0 * t * t, 2.0 * t, 1.0, 0.0]
}
