use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// The root-finding bracket does not straddle a sign change.
    #[error("root not bracketed on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A quadrature or iterative routine ran out of budget.
    #[error("tolerance not reached: estimate {estimate}, residual {residual}")]
    Convergence { estimate: f64, residual: f64 },

    /// The satellite never rises above the requested elevation.
    #[error("no visibility: {0}")]
    NoVisibility(String),

    /// Two angular rates coincide, so the requested period is unbounded.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// The configuration document could not be parsed.
    #[error("config parse error at {path} (line {line}, column {column}): {message}")]
    ConfigParse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    /// The configuration parsed but violates one or more invariants.
    #[error("invalid config: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigParse { .. } | Error::Validation(_) | Error::Domain { .. } => 2,
            Error::Bracket { .. }
            | Error::Convergence { .. }
            | Error::NoVisibility(_)
            | Error::Degenerate(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
