use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the region where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bracketed root search found no sign change.
    #[error("no root in [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoRoot {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A function evaluation produced NaN or infinity.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("gaussian fit failed: {0}")]
    FitFailed(String),

    #[error("optimization failed: {message}\n{scan}")]
    OptimizationFailed { message: String, scan: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable, machine-parsable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NoRoot { .. } => "no-root",
            Error::Numeric(_) => "numeric",
            Error::InsufficientData(_) => "insufficient-data",
            Error::FitFailed(_) => "fit-failed",
            Error::OptimizationFailed { .. } => "optimization-failed",
            Error::Format(_) => "format",
            Error::Config(_) => "config",
            Error::Io(_) | Error::Csv(_) => "io",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Domain(_) => 3,
            Error::NoRoot { .. } | Error::Numeric(_) => 4,
            Error::InsufficientData(_) | Error::FitFailed(_) => 5,
            Error::OptimizationFailed { .. } => 6,
            Error::Format(_) => 7,
            Error::Io(_) | Error::Csv(_) => 8,
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
