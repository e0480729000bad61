//! Change of basis between Hermite, Bézier and uniform B-spline cubics.
//!
//! Two control vectors describe the same curve when `pᵀ M_from = qᵀ M_to`,
//! hence `qᵀ = pᵀ · M_from · M_to⁻¹`. Patches transform by congruence with the
//! same matrix on both sides.

use crate::algebra::rational::RationalMatrix;
use crate::algebra::Mat4;
use crate::patch::{Basis, CurveControl, GeometricPatch};

/// Exact `M_from · M_to⁻¹`.
pub fn conversion_matrix_exact(from: Basis, to: Basis) -> RationalMatrix {
    if from == to {
        return RationalMatrix::identity(4);
    }
    let inv = to
        .matrix_exact()
        .inverse()
        .expect("basis matrices are invertible");
    from.matrix_exact().mul(&inv)
}

/// `M_from · M_to⁻¹`, rounded from the exact product.
pub fn conversion_matrix(from: Basis, to: Basis) -> Mat4 {
    conversion_matrix_exact(from, to).to_mat4()
}

pub fn convert_curve(c: &CurveControl, from: Basis, to: Basis) -> CurveControl {
    if from == to {
        return *c;
    }
    CurveControl(Mat4::vec_mul(&c.0, &conversion_matrix(from, to)))
}

pub fn convert_patch(p: &GeometricPatch, to: Basis) -> GeometricPatch {
    if p.basis == to {
        return *p;
    }
    let m = conversion_matrix(p.basis, to);
    p.map_coords(to, |x| x.congruence(&m))
}
