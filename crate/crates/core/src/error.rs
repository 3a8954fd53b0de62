use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimate {estimate} with error {error} after {evaluations} evaluations")]
    Quadrature { estimate: f64, error: f64, evaluations: usize },

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The objective returned a non-finite value; `trace` holds the point.
    #[error("search failed: {reason} at {trace:?}")]
    Search { reason: String, trace: Vec<f64> },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("simulation failed: {0}")]
    Simulation(String),

    /// Input file does not have the expected layout.
    #[error("format error: {0}")]
    Format(String),

    #[error("data error at line {line}: {message}")]
    Data { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical routine (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::Bracket { .. }
                | Error::Search { .. }
                | Error::Estimation(_)
                | Error::Simulation(_)
        )
    }

    /// True for problems with an input dataset.
    pub fn is_data(&self) -> bool {
        matches!(self, Error::Format(_) | Error::Data { .. } | Error::Io(_))
    }
}
