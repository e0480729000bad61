use thiserror::Error;

use crate::patch::Basis;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },

    #[error("parameter {name} = {value} lies outside [0, 1]")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("expected a patch in {expected:?} basis, found {found:?}")]
    BasisMismatch { expected: Basis, found: Basis },

    #[error("line v = {slope}*u + {offset} does not cross the unit square")]
    LineOutsideDomain { slope: i32, offset: f64 },

    #[error("line v = {slope}*u + {offset} is too short inside the unit square to fit 7 samples")]
    LineTooShort { slope: i32, offset: f64 },

    #[error("product of two symbolic matrices is not linear in the control values")]
    NonLinearProduct,

    #[error("patch is not HS-representable: residuals (x, y, z) = {residuals:?}")]
    Infeasible { residuals: [f64; 3] },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
