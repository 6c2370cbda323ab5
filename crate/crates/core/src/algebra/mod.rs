//! Exact arithmetic over the Gaussian rationals Q(i): polynomials, reduced
//! rational functions, partial fractions, and root finding that stays exact
//! whenever the roots are Gaussian rationals.

mod gaussian;
mod partial;
mod poly;
mod rational;
mod roots;

use num_complex::Complex64;
use thiserror::Error;

pub use gaussian::{ratio_to_f64, GaussianRational};
pub use partial::{
    laurent_exact, laurent_numeric, partial_fractions, residue_exact, taylor_shift_complex,
    PartialFractions, PrincipalPart,
};
pub use poly::{eval_complex, Polynomial};
pub use rational::{MobiusCoeffs, RationalMap};
pub use roots::{aberth, roots, Root, DEFAULT_ROOT_TOL};

/// Tolerance for verification residuals (re-summation, identities).
pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    ZeroDenominator,
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("root finding did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// A complex number that is either known exactly or only numerically.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(GaussianRational),
    Numeric(Complex64),
}

impl Value {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(g) => g.to_complex(),
            Value::Numeric(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            Value::Exact(g) => Some(g),
            Value::Numeric(_) => None,
        }
    }

    /// Exact comparison when both sides are exact, otherwise distance `<= tol`.
    pub fn approx_eq(&self, other: &Value, tol: f64) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => (self.to_complex() - other.to_complex()).norm() <= tol,
        }
    }

    /// Real test: exact when exact, `|Im| <= tol` otherwise.
    pub fn is_real(&self, tol: f64) -> bool {
        match self {
            Value::Exact(g) => g.is_real(),
            Value::Numeric(z) => z.im.abs() <= tol,
        }
    }
}

impl From<GaussianRational> for Value {
    fn from(g: GaussianRational) -> Self {
        Value::Exact(g)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Numeric(z)
    }
}
