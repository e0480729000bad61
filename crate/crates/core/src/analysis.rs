//! Degree audits along tessellation edges and continuity checks between
//! adjacent patches.

use std::fmt;

use crate::algebra::Mat4;
use crate::error::{Error, Result};
use crate::patch::{
    cross, effective_degree, eval_patch_jet, monomial_coeffs, norm, restrict_monomials, Basis,
    GeometricPatch, Jet, ParamMode, Slope,
};

/// Maximum effective degree of the patch restricted to each family of grid edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DegreeAudit {
    /// Lines `v = j/n`.
    pub horizontal: usize,
    /// Lines `u = i/n`.
    pub vertical: usize,
    /// Cell diagonals along `v = u + k/n`.
    pub slope_up: usize,
    /// Cell diagonals along `v = -u + k/n`.
    pub slope_down: usize,
}

impl DegreeAudit {
    pub fn max(&self) -> usize {
        self.horizontal
            .max(self.vertical)
            .max(self.slope_up)
            .max(self.slope_down)
    }

    fn merge(self, o: DegreeAudit) -> DegreeAudit {
        DegreeAudit {
            horizontal: self.horizontal.max(o.horizontal),
            vertical: self.vertical.max(o.vertical),
            slope_up: self.slope_up.max(o.slope_up),
            slope_down: self.slope_down.max(o.slope_down),
        }
    }
}

/// Audit every edge of an `n × n` grid, in all four tessellation directions.
pub fn degree_audit(p: &GeometricPatch, grid_n: usize, tol: f64) -> Result<DegreeAudit> {
    p.require_basis(Basis::Hermite)?;
    if grid_n == 0 {
        return Err(Error::InvalidArgument("grid_n must be at least 1".into()));
    }
    Ok(p.coords()
        .iter()
        .map(|x| audit_coord(x, grid_n, tol))
        .fold(DegreeAudit::default(), DegreeAudit::merge))
}

fn audit_coord(x: &Mat4, n: usize, tol: f64) -> DegreeAudit {
    let c = monomial_coeffs(x);
    let nf = n as f64;
    let mut audit = DegreeAudit::default();

    for k in 0..=n {
        let s = k as f64 / nf;
        let pw = [s * s * s, s * s, s, 1.0];
        // v fixed: coefficient of u^(3-i) is Σ_j C[i][j] v^(3-j)
        let along_u: [f64; 4] = std::array::from_fn(|i| (0..4).map(|j| c.0[i][j] * pw[j]).sum());
        let along_v: [f64; 4] = std::array::from_fn(|j| (0..4).map(|i| c.0[i][j] * pw[i]).sum());
        audit.horizontal = audit.horizontal.max(effective_degree(&along_u, tol));
        audit.vertical = audit.vertical.max(effective_degree(&along_v, tol));
    }

    let n = n as i64;
    for k in -(n - 1)..=(n - 1) {
        let d = restrict_monomials(&c, Slope::Up, k as f64 / nf);
        audit.slope_up = audit.slope_up.max(d.effective_degree(tol));
    }
    for k in 1..=(2 * n - 1) {
        let d = restrict_monomials(&c, Slope::Down, k as f64 / nf);
        audit.slope_down = audit.slope_down.max(d.effective_degree(tol));
    }
    audit
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `u = 0`, parameterized by `v`.
    U0,
    /// `u = 1`, parameterized by `v`.
    U1,
    /// `v = 0`, parameterized by `u`.
    V0,
    /// `v = 1`, parameterized by `u`.
    V1,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::U0, Side::U1, Side::V0, Side::V1];

    fn param(self, t: f64) -> (f64, f64) {
        match self {
            Side::U0 => (0.0, t),
            Side::U1 => (1.0, t),
            Side::V0 => (t, 0.0),
            Side::V1 => (t, 1.0),
        }
    }

    /// Cross-boundary derivative pointing out of the patch.
    fn outward(self, jet: &Jet) -> [f64; 3] {
        match self {
            Side::U0 => jet.du.map(|x| -x),
            Side::U1 => jet.du,
            Side::V0 => jet.dv.map(|x| -x),
            Side::V1 => jet.dv,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::U0 => "u0",
            Side::U1 => "u1",
            Side::V0 => "v0",
            Side::V1 => "v1",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Side::ALL
            .into_iter()
            .find(|side| side.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown side {s:?}")))
    }
}

/// One side of a patch, optionally traversed backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub side: Side,
    pub reversed: bool,
}

impl Edge {
    pub fn new(side: Side) -> Self {
        Edge {
            side,
            reversed: false,
        }
    }

    pub fn reversed(side: Side) -> Self {
        Edge {
            side,
            reversed: true,
        }
    }

    fn param(self, t: f64) -> (f64, f64) {
        self.side.param(if self.reversed { 1.0 - t } else { t })
    }
}

impl From<Side> for Edge {
    fn from(side: Side) -> Self {
        Edge::new(side)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityTolerances {
    pub c0: f64,
    pub c1: f64,
    /// Radians.
    pub g1: f64,
}

impl Default for ContinuityTolerances {
    fn default() -> Self {
        ContinuityTolerances {
            c0: 1e-9,
            c1: 1e-9,
            g1: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityReport {
    pub max_c0_gap: f64,
    pub max_c1_mismatch: f64,
    /// Largest angle between tangent planes, over samples with two usable normals.
    pub max_g1_angle: f64,
    pub samples: usize,
    /// Samples skipped for G1 because a normal was degenerate.
    pub degenerate_normals: usize,
    pub c0_pass: bool,
    pub c1_pass: bool,
    /// C1 implies G1, so this is also true whenever `c1_pass` is.
    pub g1_pass: bool,
}

/// Compare side `ea` of `a` with side `eb` of `b` at `samples` equally spaced points.
///
/// C1 compares the outward cross derivative of `a` with the inward cross
/// derivative of `b`. G1 compares unoriented tangent planes.
pub fn continuity_check(
    a: &GeometricPatch,
    ea: impl Into<Edge>,
    b: &GeometricPatch,
    eb: impl Into<Edge>,
    samples: usize,
    tols: ContinuityTolerances,
) -> Result<ContinuityReport> {
    a.require_basis(Basis::Hermite)?;
    b.require_basis(Basis::Hermite)?;
    if samples < 2 {
        return Err(Error::InvalidArgument(
            "continuity needs at least 2 samples".into(),
        ));
    }
    let (ea, eb) = (ea.into(), eb.into());
    let mut report = ContinuityReport {
        max_c0_gap: 0.0,
        max_c1_mismatch: 0.0,
        max_g1_angle: 0.0,
        samples,
        degenerate_normals: 0,
        c0_pass: true,
        c1_pass: true,
        g1_pass: true,
    };
    for k in 0..samples {
        let t = k as f64 / (samples - 1) as f64;
        let (ua, va) = ea.param(t);
        let (ub, vb) = eb.param(t);
        let ja = eval_patch_jet(a, ua, va, ParamMode::Strict)?;
        let jb = eval_patch_jet(b, ub, vb, ParamMode::Strict)?;

        let gap = distance(&ja.point, &jb.point);
        let oa = ea.side.outward(&ja);
        let ob = eb.side.outward(&jb);
        let c1 = norm(&[oa[0] + ob[0], oa[1] + ob[1], oa[2] + ob[2]]);
        report.max_c0_gap = report.max_c0_gap.max(gap);
        report.max_c1_mismatch = report.max_c1_mismatch.max(c1);

        match (unit_normal(&ja), unit_normal(&jb)) {
            (Some(na), Some(nb)) => {
                report.max_g1_angle = report.max_g1_angle.max(plane_angle(&na, &nb));
            }
            _ => report.degenerate_normals += 1,
        }
    }
    report.c0_pass = report.max_c0_gap <= tols.c0;
    report.c1_pass = report.c0_pass && report.max_c1_mismatch <= tols.c1;
    report.g1_pass = report.c1_pass || (report.c0_pass && report.max_g1_angle <= tols.g1);
    Ok(report)
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

/// Unit normal of a jet, or `None` when `‖P_u × P_v‖ ≤ 1e-12 · ‖P_u‖‖P_v‖`.
pub fn unit_normal(jet: &Jet) -> Option<[f64; 3]> {
    let n = jet.cross();
    let len = norm(&n);
    let scale = norm(&jet.du) * norm(&jet.dv);
    (len > 1e-12 * scale && len > 0.0).then(|| n.map(|x| x / len))
}

/// Angle in `[0, π/2]` between the lines spanned by two unit vectors.
fn plane_angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let s = norm(&cross(a, b));
    let c = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs();
    s.atan2(c)
}
