//! Fixed-size float matrices, exact rational matrices, symbolic linear forms
//! and the constant cubic basis matrices.

pub mod basis;
pub mod linform;
mod mat4;
pub mod rational;

pub use linform::{linform_mat_mul, FormMatrix, LinearForm, Operand};
pub use mat4::{mat4_inverse, Mat4};
pub use rational::{rank_exact, RationalMatrix};

pub(crate) use mat4::dot;
