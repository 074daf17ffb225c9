use alloc::boxed::Box;

use crate::transform::IterationTrace;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative skew part {0:.3e})")]
    NotHermitian(f64),
    #[error("{0} did not converge within its iteration budget")]
    NoConvergence(&'static str),
    #[error("negative power of a singular positive matrix")]
    SingularNegativePower,
    #[error("matrix has a negative eigenvalue {0:.3e} beyond rounding")]
    NotPositiveSemidefinite(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("invalid matrix shape: {0} entries for dimension {1}")]
    BadShape(usize, usize),
    #[error("lambda = {0} is outside (0, 1)")]
    LambdaOutOfRange(f64),
    #[error("iteration stopped with {:?} after {} steps", .0.stop_reason, .0.n_steps)]
    DidNotConverge(Box<IterationTrace>),
    #[error("matrix is not diagonalizable")]
    NotDiagonalizable,
    #[error("diagonal point has a zero entry at index {0}")]
    SingularD(usize),
    #[error("matrix is not a tangent vector: entry ({0}, {1}) must vanish")]
    NotTangent(usize, usize),
    #[error("singular matrix in linear solve")]
    Singular,
    #[error("not enough data for a rate fit ({0} usable points)")]
    InsufficientData(usize),
    #[error("construction failed: {0}")]
    ConstructionFailed(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}
