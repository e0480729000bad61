//! Batch versions of the per-patch operations. Output order always matches input order.

use crate::analysis::{degree_audit, DegreeAudit};
use crate::convert::convert_patch;
use crate::error::Result;
use crate::hs::{build_hs_patch, HsPatch, HsPatchInput, Policy};
use crate::mesh::{tessellate_with, TessPattern, TriangleMesh};
use crate::par::{self, Exec};
use crate::patch::{Basis, GeometricPatch};

pub fn build_many(
    inputs: &[HsPatchInput],
    policy: Policy,
    tol: f64,
    exec: Exec,
) -> Vec<Result<HsPatch>> {
    par::map(exec, inputs, |i| build_hs_patch(i, policy, tol))
}

pub fn convert_many(patches: &[GeometricPatch], to: Basis, exec: Exec) -> Vec<GeometricPatch> {
    par::map(exec, patches, |p| convert_patch(p, to))
}

pub fn audit_many(
    patches: &[GeometricPatch],
    grid_n: usize,
    tol: f64,
    exec: Exec,
) -> Vec<Result<DegreeAudit>> {
    par::map(exec, patches, |p| degree_audit(p, grid_n, tol))
}

/// Tessellate every patch; each patch's rows run sequentially so the pool is
/// only used across patches.
pub fn tessellate_many(
    patches: &[GeometricPatch],
    n: usize,
    pattern: TessPattern,
    exec: Exec,
) -> Result<Vec<TriangleMesh>> {
    par::map(exec, patches, |p| {
        tessellate_with(p, n, pattern, Exec::Sequential)
    })
    .into_iter()
    .collect()
}
