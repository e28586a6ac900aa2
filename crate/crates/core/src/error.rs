use thiserror::Error;

/// Everything that can go wrong while evaluating a check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series {0} has zero constant term and is not invertible")]
    NotInvertible(String),
    #[error("denominator {den} is divisible by the prime {prime}")]
    BadPrime { den: String, prime: u64 },
    #[error(
        "pole-order violation at residue step t_{step}: {poles} vanishing pole factors, {zeros} vanishing zero factors"
    )]
    PoleOrder { step: usize, poles: usize, zeros: usize },
    #[error("sampler exhausted after {0} rejected candidates")]
    Exhausted(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("depth overflow: index {index} exceeds cap {cap}")]
    DepthOverflow { index: usize, cap: usize },
    #[error("usage: {0}")]
    Usage(String),
    #[error("singular matrix")]
    Singular,
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Errors that a fresh sample point can cure.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::NotInvertible(_)
                | Error::BadPrime { .. }
                | Error::PoleOrder { .. }
                | Error::Degenerate(_)
                | Error::Singular
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
