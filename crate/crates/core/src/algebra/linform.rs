//! Linear forms over the sixteen Hermite control symbols.
//!
//! A [`LinearForm`] is the coefficient vector of an expression that is linear
//! in `ξ = [x11, x12, x13, x14, x21, …, x44]`. Multiplying a constant matrix by
//! a matrix of such forms stays linear, which is all that is needed to derive
//! the diagonal-degree conditions without writing out the 16×16 expansion.

use std::array;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::RationalMatrix;
use crate::error::{Error, Result};

pub const SYMBOLS: usize = 16;

/// Position of control symbol `x_{ij}` (1-based `i`, `j`) in `ξ`.
pub const fn symbol_index(i: usize, j: usize) -> usize {
    (i - 1) * 4 + (j - 1)
}

/// Human-readable name of the symbol at position `k` of `ξ`.
pub fn symbol_name(k: usize) -> String {
    format!("x{}{}", k / 4 + 1, k % 4 + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: [BigRational; SYMBOLS],
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm {
            coeffs: array::from_fn(|_| BigRational::zero()),
        }
    }

    /// The form that picks out symbol `k`.
    pub fn unit(k: usize) -> Self {
        let mut f = Self::zero();
        f.coeffs[k] = BigRational::one();
        f
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        LinearForm {
            coeffs: array::from_fn(|k| &self.coeffs[k] * s),
        }
    }

    /// `self += c · f`, touching only the nonzero coefficients of `f`.
    pub fn add_scaled(&mut self, f: &LinearForm, c: &BigRational) {
        for (a, b) in self.coeffs.iter_mut().zip(&f.coeffs) {
            if !b.is_zero() {
                *a += b * c;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    /// Evaluate the form at concrete control values.
    pub fn eval(&self, xi: &[BigRational; SYMBOLS]) -> BigRational {
        self.coeffs
            .iter()
            .zip(xi)
            .fold(BigRational::zero(), |acc, (c, x)| acc + c * x)
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;

    fn add(self, rhs: &LinearForm) -> LinearForm {
        LinearForm {
            coeffs: array::from_fn(|k| &self.coeffs[k] + &rhs.coeffs[k]),
        }
    }
}

impl Add for LinearForm {
    type Output = LinearForm;

    fn add(self, rhs: LinearForm) -> LinearForm {
        &self + &rhs
    }
}

impl AddAssign<&LinearForm> for LinearForm {
    fn add_assign(&mut self, rhs: &LinearForm) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;

    fn sub(self, rhs: &LinearForm) -> LinearForm {
        LinearForm {
            coeffs: array::from_fn(|k| &self.coeffs[k] - &rhs.coeffs[k]),
        }
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;

    fn neg(self) -> LinearForm {
        LinearForm {
            coeffs: array::from_fn(|k| -&self.coeffs[k]),
        }
    }
}

/// 4×4 matrix of linear forms.
pub type FormMatrix = [[LinearForm; 4]; 4];

/// The symbolic control matrix `X`, entry `(i, j)` being the unit form of `x_{i+1, j+1}`.
pub fn symbolic_controls() -> FormMatrix {
    array::from_fn(|i| array::from_fn(|j| LinearForm::unit(i * 4 + j)))
}

/// Operand of [`linform_mat_mul`]: a constant 4×4 rational matrix or a matrix of forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Scalar(RationalMatrix),
    Symbolic(Box<FormMatrix>),
}

impl Operand {
    pub fn symbolic(m: FormMatrix) -> Self {
        Operand::Symbolic(Box::new(m))
    }

    pub fn into_forms(self) -> Option<FormMatrix> {
        match self {
            Operand::Symbolic(m) => Some(*m),
            Operand::Scalar(_) => None,
        }
    }
}

/// Exact product of two 4×4 operands, at most one of which is symbolic.
///
/// Scalar·scalar stays scalar; any product with a symbolic side is symbolic.
pub fn linform_mat_mul(a: &Operand, b: &Operand) -> Result<Operand> {
    match (a, b) {
        (Operand::Symbolic(_), Operand::Symbolic(_)) => Err(Error::NonLinearProduct),
        (Operand::Scalar(x), Operand::Scalar(y)) => {
            check_square4(x);
            check_square4(y);
            Ok(Operand::Scalar(x.mul(y)))
        }
        (Operand::Scalar(s), Operand::Symbolic(f)) => {
            check_square4(s);
            Ok(Operand::symbolic(array::from_fn(|i| {
                array::from_fn(|j| {
                    (0..4).fold(LinearForm::zero(), |mut acc, k| {
                        let c = s.get(i, k);
                        if !c.is_zero() {
                            acc.add_scaled(&f[k][j], c);
                        }
                        acc
                    })
                })
            })))
        }
        (Operand::Symbolic(f), Operand::Scalar(s)) => {
            check_square4(s);
            Ok(Operand::symbolic(array::from_fn(|i| {
                array::from_fn(|j| {
                    (0..4).fold(LinearForm::zero(), |mut acc, k| {
                        let c = s.get(k, j);
                        if !c.is_zero() {
                            acc.add_scaled(&f[i][k], c);
                        }
                        acc
                    })
                })
            })))
        }
    }
}

fn check_square4(m: &RationalMatrix) {
    assert!(m.rows() == 4 && m.cols() == 4, "operand must be 4×4");
}

/// Stack forms as the rows of a `len × 16` rational matrix.
pub fn forms_to_matrix(forms: &[LinearForm]) -> RationalMatrix {
    RationalMatrix::from_rows(forms.iter().map(|f| f.coeffs.to_vec()).collect())
}
