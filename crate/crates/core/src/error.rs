use thiserror::Error;

/// Errors raised by the arithmetic, geometry and counting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid discriminant {disc}: {reason}")]
    InvalidDiscriminant { disc: i64, reason: &'static str },

    #[error("operands live in different fields (D = {0} and D = {1})")]
    FieldMismatch(i64, i64),

    #[error("the zero lattice has no fundamental domain")]
    ZeroLattice,

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("{0} is not a unit of the ring of integers")]
    NotAUnit(String),

    #[error("third coordinate is zero: {0}")]
    ZeroThirdCoordinate(&'static str),

    #[error("not a chain: q(P) = {0} is not positive")]
    NotAChain(String),

    #[error("infinite chain: the polar point has zero last coordinate")]
    InfiniteChain,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("element is not loxodromic ({0})")]
    NotLoxodromic(String),

    #[error("element is reducible over K: {0}")]
    Reducible(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge: estimated error {achieved:e} exceeds {target:e}")]
    Quadrature { achieved: f64, target: f64 },

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
