use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("config error ({location}): {msg}")]
    Config { location: String, msg: String },

    #[error(
        "system is not asymptotically stable (max Re eig = {max_re:.6e}); no steady state exists"
    )]
    Unstable { max_re: f64 },

    #[error("system is marginally stable (max Re eig = {max_re:.6e}, within margin {margin:.1e}); steady state is not unique")]
    Marginal { max_re: f64, margin: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unknown mode `{0}` (expected one of: b1, b2, as, a)")]
    UnknownMode(String),

    #[error("mode `{0}` is not present in this system")]
    ModeAbsent(&'static str),

    #[error("degenerate coupling configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("unphysical covariance: {0}")]
    UnphysicalCovariance(String),

    #[error("unknown figure preset `{name}`; available presets: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("sweep spec error: {0}")]
    Sweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
