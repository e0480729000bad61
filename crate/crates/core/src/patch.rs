//! Hermite cubic curves, bicubic tensor-product patches, and the exact
//! polynomial restriction of a patch to lines of slope ±1 in the u–v domain.
//!
//! A scalar patch coordinate is `x(u, v) = uᵀ Mᵀ X M v` with
//! `u = [u³, u², u, 1]ᵀ`. In Hermite form the control matrix holds
//!
//! ```text
//!     [ P(0,0)   P(0,1)   Pv(0,0)   Pv(0,1)  ]
//!     [ P(1,0)   P(1,1)   Pv(1,0)   Pv(1,1)  ]
//!     [ Pu(0,0)  Pu(0,1)  Puv(0,0)  Puv(0,1) ]
//!     [ Pu(1,0)  Pu(1,1)  Puv(1,0)  Puv(1,1) ]
//! ```

use std::fmt;

use crate::algebra::basis::{self, power_vector, power_vector_deriv};
use crate::algebra::rational::RationalMatrix;
use crate::algebra::{dot, Mat4};
use crate::error::{Error, Result};

/// Relative tolerance used to decide the effective degree of a restricted curve.
pub const EFFECTIVE_DEGREE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Hermite,
    Bezier,
    BSpline,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Hermite, Basis::Bezier, Basis::BSpline];

    pub fn matrix(self) -> Mat4 {
        match self {
            Basis::Hermite => basis::hermite(),
            Basis::Bezier => basis::bezier(),
            Basis::BSpline => basis::bspline(),
        }
    }

    pub fn matrix_exact(self) -> RationalMatrix {
        match self {
            Basis::Hermite => basis::hermite_exact(),
            Basis::Bezier => basis::bezier_exact(),
            Basis::BSpline => basis::bspline_exact(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Hermite => "hermite",
            Basis::Bezier => "bezier",
            Basis::BSpline => "bspline",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hermite" => Ok(Basis::Hermite),
            "bezier" => Ok(Basis::Bezier),
            "bspline" => Ok(Basis::BSpline),
            other => Err(Error::InvalidArgument(format!("unknown basis {other:?}"))),
        }
    }
}

/// How out-of-range parameters are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParamMode {
    /// Reject parameters outside `[0, 1]`.
    #[default]
    Strict,
    /// Clamp parameters into `[0, 1]`.
    Clamp,
}

impl ParamMode {
    fn apply(self, name: &'static str, t: f64) -> Result<f64> {
        match self {
            _ if (0.0..=1.0).contains(&t) => Ok(t),
            ParamMode::Clamp if !t.is_nan() => Ok(t.clamp(0.0, 1.0)),
            _ => Err(Error::ParameterOutOfRange { name, value: t }),
        }
    }
}

/// Control values of one coordinate of a cubic curve.
///
/// In Hermite form: `[P(0), P(1), P'(0), P'(1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveControl(pub [f64; 4]);

/// Evaluate a Hermite curve coordinate at `t`.
pub fn eval_curve(c: &CurveControl, t: f64, mode: ParamMode) -> Result<f64> {
    eval_curve_in(c, Basis::Hermite, t, mode)
}

/// Evaluate a curve coordinate given in any basis.
pub fn eval_curve_in(c: &CurveControl, basis: Basis, t: f64, mode: ParamMode) -> Result<f64> {
    let t = mode.apply("t", t)?;
    Ok(dot(&Mat4::vec_mul(&c.0, &basis.matrix()), &power_vector(t)))
}

/// A bicubic patch: one 4×4 control matrix per spatial coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricPatch {
    pub x: Mat4,
    pub y: Mat4,
    pub z: Mat4,
    pub basis: Basis,
}

impl GeometricPatch {
    pub fn new(x: Mat4, y: Mat4, z: Mat4, basis: Basis) -> Self {
        GeometricPatch { x, y, z, basis }
    }

    pub fn coords(&self) -> [&Mat4; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn map_coords(&self, basis: Basis, f: impl Fn(&Mat4) -> Mat4) -> Self {
        GeometricPatch::new(f(&self.x), f(&self.y), f(&self.z), basis)
    }

    /// Largest absolute control value over all coordinates.
    pub fn max_abs(&self) -> f64 {
        self.coords()
            .iter()
            .fold(0.0_f64, |acc, m| acc.max(m.max_abs()))
    }

    pub fn require_basis(&self, expected: Basis) -> Result<()> {
        if self.basis == expected {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected,
                found: self.basis,
            })
        }
    }

    /// Point evaluation in whatever basis the patch is stored in.
    pub fn eval(&self, u: f64, v: f64, mode: ParamMode) -> Result<[f64; 3]> {
        let u = mode.apply("u", u)?;
        let v = mode.apply("v", v)?;
        let m = self.basis.matrix();
        let bu = m.mul_vec(&power_vector(u));
        let bv = m.mul_vec(&power_vector(v));
        Ok(self.coords().map(|c| bilinear_form(&bu, c, &bv)))
    }
}

/// `aᵀ · X · b`.
pub(crate) fn bilinear_form(a: &[f64; 4], x: &Mat4, b: &[f64; 4]) -> f64 {
    dot(a, &x.mul_vec(b))
}

/// Position and first partial derivatives at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub point: [f64; 3],
    pub du: [f64; 3],
    pub dv: [f64; 3],
}

impl Jet {
    /// Unnormalized normal `P_u × P_v`.
    pub fn cross(&self) -> [f64; 3] {
        cross(&self.du, &self.dv)
    }
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Evaluate a Hermite patch and its first partials at `(u, v)`.
pub fn eval_patch_jet(p: &GeometricPatch, u: f64, v: f64, mode: ParamMode) -> Result<Jet> {
    p.require_basis(Basis::Hermite)?;
    let u = mode.apply("u", u)?;
    let v = mode.apply("v", v)?;
    let mh = basis::hermite();
    let hu = mh.mul_vec(&power_vector(u));
    let hv = mh.mul_vec(&power_vector(v));
    let dhu = mh.mul_vec(&power_vector_deriv(u));
    let dhv = mh.mul_vec(&power_vector_deriv(v));
    Ok(Jet {
        point: p.coords().map(|c| bilinear_form(&hu, c, &hv)),
        du: p.coords().map(|c| bilinear_form(&dhu, c, &hv)),
        dv: p.coords().map(|c| bilinear_form(&hu, c, &dhv)),
    })
}

/// Scalar Hermite evaluation without range checks.
pub fn eval_hermite_scalar(x: &Mat4, u: f64, v: f64) -> f64 {
    let mh = basis::hermite();
    bilinear_form(
        &mh.mul_vec(&power_vector(u)),
        x,
        &mh.mul_vec(&power_vector(v)),
    )
}

/// Power-basis coefficient matrix `C = M_Hᵀ X M_H` of a Hermite coordinate.
///
/// `C[i][j]` multiplies `u^(3-i) · v^(3-j)`.
pub fn monomial_coeffs(x: &Mat4) -> Mat4 {
    x.congruence(&basis::hermite())
}

/// Direction of a parameter line `v = ±u + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    Up,
    Down,
}

impl Slope {
    pub const BOTH: [Slope; 2] = [Slope::Up, Slope::Down];

    pub fn sign(self) -> i32 {
        match self {
            Slope::Up => 1,
            Slope::Down => -1,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Slope::Up),
            -1 => Ok(Slope::Down),
            other => Err(Error::InvalidArgument(format!(
                "slope must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// The `u`-interval on which `v = slope·u + offset` stays inside the unit square.
pub fn line_domain(slope: Slope, offset: f64) -> Option<(f64, f64)> {
    if !offset.is_finite() {
        return None;
    }
    let (lo, hi) = match slope {
        Slope::Up => ((-offset).max(0.0), (1.0 - offset).min(1.0)),
        Slope::Down => ((offset - 1.0).max(0.0), offset.min(1.0)),
    };
    (hi > lo).then_some((lo, hi))
}

/// Degree-6 polynomial in `u`, coefficients in descending powers `a6 … a0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiagonalPoly {
    pub coeffs: [f64; 7],
}

impl DiagonalPoly {
    pub fn from_ascending(asc: [f64; 7]) -> Self {
        let mut coeffs = asc;
        coeffs.reverse();
        DiagonalPoly { coeffs }
    }

    /// Coefficient of `u^k`.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[6 - k]
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc * u + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }

    pub fn effective_degree(&self, tol: f64) -> usize {
        effective_degree(&self.coeffs, tol)
    }

    pub fn max_abs_diff(&self, other: &DiagonalPoly) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Highest power whose coefficient exceeds `tol · max(1, max|a|)`.
///
/// `descending` lists coefficients from the highest power down to the constant.
pub fn effective_degree(descending: &[f64], tol: f64) -> usize {
    let scale = descending.iter().fold(1.0_f64, |acc, c| acc.max(c.abs()));
    let n = descending.len();
    descending
        .iter()
        .position(|c| c.abs() > tol * scale)
        .map_or(0, |i| n - 1 - i)
}

const BINOMIAL: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// Exact polynomial of a Hermite coordinate along `v = slope·u + offset`.
///
/// Expands `Σ c_pq u^p (slope·u + offset)^q` term by term.
pub fn line_restriction_coeffs(x: &Mat4, slope: Slope, offset: f64) -> Result<DiagonalPoly> {
    if line_domain(slope, offset).is_none() {
        return Err(Error::LineOutsideDomain {
            slope: slope.sign(),
            offset,
        });
    }
    Ok(restrict_monomials(&monomial_coeffs(x), slope, offset))
}

pub(crate) fn restrict_monomials(c: &Mat4, slope: Slope, offset: f64) -> DiagonalPoly {
    let s = f64::from(slope.sign());
    let s_pow = [1.0, s, 1.0, s];
    let mut o_pow = [1.0; 4];
    for k in 1..4 {
        o_pow[k] = o_pow[k - 1] * offset;
    }
    let mut asc = [0.0; 7];
    for i in 0..4 {
        let p = 3 - i;
        for j in 0..4 {
            let q = 3 - j;
            let cij = c.0[i][j];
            if cij == 0.0 {
                continue;
            }
            for r in 0..=q {
                asc[p + r] += cij * BINOMIAL[q][r] * s_pow[r] * o_pow[q - r];
            }
        }
    }
    DiagonalPoly::from_ascending(asc)
}

/// Independent check of [`line_restriction_coeffs`]: sample the patch at seven
/// Chebyshev points of the line and solve the Vandermonde system.
#[allow(clippy::needless_range_loop)]
pub fn fit_line_oracle(x: &Mat4, slope: Slope, offset: f64) -> Result<DiagonalPoly> {
    let (lo, hi) = line_domain(slope, offset).ok_or(Error::LineOutsideDomain {
        slope: slope.sign(),
        offset,
    })?;
    if hi - lo < 1e-6 {
        return Err(Error::LineTooShort {
            slope: slope.sign(),
            offset,
        });
    }
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let s = f64::from(slope.sign());

    // fit in the centred variable t = (u - mid) / half for conditioning
    let mut vander = [[0.0; 7]; 7];
    let mut rhs = [0.0; 7];
    for k in 0..7 {
        let t = ((2 * k + 1) as f64 * std::f64::consts::PI / 14.0).cos();
        let u = mid + half * t;
        let mut tp = 1.0;
        for m in 0..7 {
            vander[k][m] = tp;
            tp *= t;
        }
        rhs[k] = eval_hermite_scalar(x, u, s * u + offset);
    }
    let d = solve7(vander, rhs);

    // Σ d_m ((u - mid)/half)^m  →  ascending powers of u
    let mut asc = [0.0; 7];
    let mut binom = [[0.0; 7]; 7];
    for n in 0..7 {
        binom[n][0] = 1.0;
        for r in 1..=n {
            binom[n][r] = binom[n - 1][r - 1] + if r < n { binom[n - 1][r] } else { 0.0 };
        }
    }
    for (m, dm) in d.iter().enumerate() {
        let scale = dm / half.powi(m as i32);
        for r in 0..=m {
            asc[r] += scale * binom[m][r] * (-mid).powi((m - r) as i32);
        }
    }
    Ok(DiagonalPoly::from_ascending(asc))
}

/// [`fit_line_oracle`] for all three coordinates of a Hermite patch.
pub fn fit_line_oracle_patch(
    p: &GeometricPatch,
    slope: Slope,
    offset: f64,
) -> Result<[DiagonalPoly; 3]> {
    p.require_basis(Basis::Hermite)?;
    Ok([
        fit_line_oracle(&p.x, slope, offset)?,
        fit_line_oracle(&p.y, slope, offset)?,
        fit_line_oracle(&p.z, slope, offset)?,
    ])
}

// Gaussian elimination with partial pivoting; the Chebyshev system is well conditioned.
#[allow(clippy::needless_range_loop)]
fn solve7(mut a: [[f64; 7]; 7], mut b: [f64; 7]) -> [f64; 7] {
    for c in 0..7 {
        let p = (c..7)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..7 {
            let f = a[r][c] / a[c][c];
            for j in c..7 {
                a[r][j] -= f * a[c][j];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [0.0; 7];
    for r in (0..7).rev() {
        let tail: f64 = (r + 1..7).map(|j| a[r][j] * x[j]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    x
}
