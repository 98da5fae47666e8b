use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument fell outside the range where the quantity is defined.
    #[error("{name} = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("bad variable index: {0}")]
    Index(String),

    /// Binary coding parameters violate the input-weight constraint.
    #[error("infeasible coding parameters: {0}")]
    Infeasible(String),

    /// Correlation coefficient at the boundary where the Gaussian rates diverge.
    #[error("degenerate correlation rho = {0}: informed input is fully determined by the state")]
    DegenerateCorrelation(f64),

    #[error("covariance is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("region query: {0}")]
    Region(String),

    /// Schema violation in an input file, located by JSON pointer.
    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, range: impl Into<String>) -> Self {
        Error::Domain {
            name,
            value,
            range: range.into(),
        }
    }
}
