use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};

/// Dense 4×4 matrix of `f64`, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat4(pub [[f64; 4]; 4]);

impl Mat4 {
    pub const ZERO: Mat4 = Mat4([[0.0; 4]; 4]);
    pub const IDENTITY: Mat4 = Mat4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f(i, j);
            }
        }
        Mat4(m)
    }

    pub fn scaled(s: f64) -> Self {
        Mat4::from_fn(|i, j| if i == j { s } else { 0.0 })
    }

    pub fn transpose(&self) -> Self {
        Mat4::from_fn(|i, j| self.0[j][i])
    }

    pub fn row(&self, i: usize) -> [f64; 4] {
        self.0[i]
    }

    pub fn col(&self, j: usize) -> [f64; 4] {
        [self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j]]
    }

    pub fn mul_vec(&self, v: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| dot(&self.0[i], v))
    }

    /// Row vector times matrix, `vᵀ·M`.
    pub fn vec_mul(v: &[f64; 4], m: &Mat4) -> [f64; 4] {
        std::array::from_fn(|j| dot(v, &m.col(j)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// `Aᵀ · self · A`, the congruence used for every change of basis.
    pub fn congruence(&self, a: &Mat4) -> Mat4 {
        a.transpose() * *self * *a
    }

    fn minor3(&self, r: usize, c: usize) -> f64 {
        let rows: Vec<usize> = (0..4).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..4).filter(|&j| j != c).collect();
        let m = |i: usize, j: usize| self.0[rows[i]][cols[j]];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    }

    fn cofactor(&self, r: usize, c: usize) -> f64 {
        let sign = if (r + c).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * self.minor3(r, c)
    }

    pub fn determinant(&self) -> f64 {
        (0..4).map(|j| self.0[0][j] * self.cofactor(0, j)).sum()
    }

    /// Inverse by cofactor expansion (adjugate over determinant).
    ///
    /// Rejects matrices whose determinant is below `1e-12 · scale⁴`, where
    /// `scale` is the largest absolute entry.
    pub fn inverse(&self) -> Result<Mat4> {
        let det = self.determinant();
        let scale = self.max_abs();
        if !det.is_finite() || scale == 0.0 || det.abs() <= 1e-12 * scale.powi(4) {
            return Err(Error::Singular { det });
        }
        Ok(Mat4::from_fn(|i, j| self.cofactor(j, i) / det))
    }
}

/// Free-function form of [`Mat4::inverse`].
pub fn mat4_inverse(m: &Mat4) -> Result<Mat4> {
    m.inverse()
}

pub(crate) fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

impl Mul for Mat4 {
    type Output = Mat4;

    fn mul(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| dot(&self.0[i], &rhs.col(j)))
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl From<[[f64; 4]; 4]> for Mat4 {
    fn from(m: [[f64; 4]; 4]) -> Self {
        Mat4(m)
    }
}
