use thiserror::Error;

use crate::tensor::Variance;

/// Errors raised by the algebra, geometry and solver layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("chart dimension {0} is unsupported (must be even, 2..={max})", max = crate::poly::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("variance mismatch: expected {expected:?}, found {found:?}")]
    VarianceMismatch { expected: Variance, found: Variance },

    #[error("tensor is not skew-symmetric")]
    NotSkew,

    #[error("2-form is not closed")]
    NotClosed,

    #[error("diamond power n = 0 is undefined")]
    ZeroDiamondPower,

    #[error("perturbation series has a nonzero hbar^0 coefficient")]
    NonzeroLeadingPerturbation,

    #[error("perturbation power k = 0; perturbations must start at hbar^1")]
    ZeroPerturbationPower,

    #[error("singular matrix: {0}")]
    Singular(&'static str),

    #[error("connection symbols are not fully symmetric at ({0}, {1}, {2})")]
    AsymmetricConnection(usize, usize, usize),

    #[error("symplectic form check failed: {0}")]
    InvalidSymplecticForm(&'static str),

    #[error("curvature convention violated: {0}")]
    ConventionViolation(String),

    #[error("form is not divisible by hbar")]
    NotDivisibleByHbar,

    #[error("operand is not homogeneous in form degree")]
    NonHomogeneousForm,

    #[error("fixed-point sweep left filtration degree {0}")]
    DegreeViolation(u32),

    #[error("order {order} is out of range (need {min}..={max})")]
    OrderOutOfRange { order: usize, min: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown variable x{index} for chart dimension {dim}")]
    UnknownVariable { index: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
