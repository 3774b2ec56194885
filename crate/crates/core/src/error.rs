use thiserror::Error;

use crate::reduction::ReductionTrace;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse index `{0}`")]
    IndexParse(String),

    #[error("index entry {0} exceeds the 2^31 representation limit")]
    EntryOverflow(u64),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("nonzero remainder in polynomial division: {0}")]
    NonPolynomial(String),

    #[error("reduction did not terminate: {reason}")]
    FuelExhausted {
        reason: String,
        trace: Box<ReductionTrace>,
    },

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("evaluation at or near a pole: {0}")]
    Pole(String),

    #[error("Cauchy extraction aliasing: {0}")]
    Alias(String),

    #[error("quadrature did not stabilize: {0}")]
    Tolerance(String),

    #[error("regularization fit unstable: {0}")]
    Fit(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("cannot parse tau `{0}`")]
    TauParse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures raised by the numerical evaluator.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_)
                | Error::Pole(_)
                | Error::Alias(_)
                | Error::Tolerance(_)
                | Error::Fit(_)
                | Error::NonFinite(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
