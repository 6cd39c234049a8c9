use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("unsupported root type `{0}`")]
    UnknownType(String),
    #[error("rank {0} exceeds the supported maximum")]
    RankTooLarge(usize),
    #[error("Weyl group enumeration refused: |W| would exceed {0}")]
    WeylTooLarge(usize),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("weight {weight} is not in Lambda_P for parabolic {parabolic}")]
    NotInLambdaP { weight: String, parabolic: String },
    #[error("invalid simple root index {0}")]
    BadSimpleRoot(usize),
    #[error("invalid word: {0}")]
    BadWord(String),
    #[error("p = {p} is below the Coxeter number {h}")]
    PrimeTooSmall { p: i64, h: i64 },
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("weight {0} is not p-regular")]
    NotRegular(String),
    #[error("KL window of size {0} does not close")]
    WindowTooSmall(i64),
    #[error("alcove outside the KL window: {0}")]
    CutoffExceeded(String),
    #[error("unsupported catalog family `{0}`")]
    UnsupportedFamily(String),
    #[error("module construction failed: {0}")]
    Module(String),
    #[error("non-integral division: {0}")]
    NonIntegral(String),
    #[error("ledger parse error on line {line}: {msg}")]
    LedgerParse { line: usize, msg: String },
    #[error("cache error: {0}")]
    Cache(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
