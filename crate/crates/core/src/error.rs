use thiserror::Error;

/// Errors raised by the algebra and cohomology routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter m = {0} is outside the supported range {1}")]
    UnsupportedM(u32, &'static str),

    #[error("attempted to invert zero in F_{0}")]
    DivisionByZero(u32),

    #[error("the point (y, z) = ({y}, {z}) does not lie on the curve")]
    NotOnCurve { y: u32, z: u32 },

    #[error("local expansion vanished to order {0}; increase the truncation order")]
    IncreaseOrder(usize),

    #[error("tuple {0:?} is not in the index set")]
    NotInIndexSet([i64; 4]),

    #[error("cocycle condition df = w_inf - w_0 fails")]
    NotACocycle,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("module is not a BT1 Dieudonne module: {0}")]
    NotBt1(String),

    #[error("module has positive p-rank ({0}); operation requires p-rank 0")]
    PositivePRank(usize),

    #[error("automorphism does not have order dividing {0}")]
    BadTauOrder(u32),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
