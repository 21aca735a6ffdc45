use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("diagonal is not all ones (max deviation {0:e})")]
    NotUnitDiagonal(f64),

    #[error("spec is not conjugate symmetric (max deviation {0:e})")]
    NotConjugateSymmetric(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("state has dimension {0}, expected a qubit")]
    NotQubit(usize),

    #[error("unsupported tuple length n = {0}")]
    BadN(usize),

    #[error("edge parameter t = {0} outside [0, 1]")]
    BadT(f64),

    #[error("phase {0} outside [0, 2π)")]
    PhaseOutOfRange(f64),

    #[error("tuple has zero invariant, only scale 0 is reachable")]
    ZeroInvariant,

    #[error("value {re}{im:+}i is not in the circulant invariant set for n = {n}")]
    NotMember { re: f64, im: f64, n: usize },

    #[error("real value {c} outside the window [{lo}, 1]")]
    OutOfWindow { c: f64, lo: f64 },

    #[error("value with modulus {0} is outside the open unit disk plus {{1}}")]
    OutsideClosure(f64),

    #[error("numerical tolerance exceeded: {0}")]
    Tolerance(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
