//! Hermite bicubic patches whose diagonal and anti-diagonal curves are cubic
//! ("HS-patches").
//!
//! The crate derives the diagonal-degree constraint system in exact rational
//! arithmetic, completes the four twist vectors of a patch from its twelve
//! corner and tangent controls, converts between Hermite, Bézier and B-spline
//! forms, tessellates patches into triangle meshes and checks degree and
//! continuity properties of the result.
//!
//! ```
//! use hspatch::hs::{build_hs_patch, CoordInput, HsPatchInput, Policy, DEFAULT_TOL};
//!
//! // f(u, v) = uv: corners, then P_v and P_u tangents
//! let uv = CoordInput::new([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
//! let hs = build_hs_patch(&HsPatchInput::new(uv, uv, uv), Policy::Strict, DEFAULT_TOL).unwrap();
//! assert_eq!(hs.patch.x.0[2][2], 1.0);
//! ```

pub mod algebra;
pub mod analysis;
pub mod batch;
pub mod convert;
mod error;
pub mod hs;
pub mod mesh;
pub mod par;
pub mod patch;

pub use algebra::{Mat4, RationalMatrix};
pub use error::{Error, Result};
pub use par::Exec;
pub use patch::{Basis, GeometricPatch};
