use std::path::PathBuf;

/// Errors raised by the numerical pipeline and its front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {what} = {value} (requires {requirement})")]
    Domain {
        what: &'static str,
        value: f64,
        requirement: String,
    },

    #[error("range error: {what} = {value} outside [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("resource error: {0}")]
    Resource(String),

    #[error("bracket failure for {what} at {at}: {detail}")]
    Bracket {
        what: &'static str,
        at: f64,
        detail: String,
    },

    #[error("no convergence for {what} at {at} after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        at: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("iteration underflow: step {step} reached {value} below T0 = {t0}")]
    Underflow { step: usize, value: f64, t0: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("membership violation at r = {r}: {value} not in [{lo}, {hi}]")]
    Membership { r: usize, value: f64, lo: f64, hi: f64 },

    #[error("clamping violation: {value} lies {excess:e} outside [{lo}, {hi}]")]
    Clamp {
        value: f64,
        lo: f64,
        hi: f64,
        excess: f64,
    },

    #[error("quadrature did not converge{}: estimated error {error:e} > tolerance {tolerance:e}", entry.map(|(m, n)| format!(" for entry ({m}, {n})")).unwrap_or_default())]
    Quadrature {
        entry: Option<(usize, usize)>,
        component: usize,
        error: f64,
        tolerance: f64,
    },

    #[error("cache format error in {path}: {detail}")]
    Format { path: PathBuf, detail: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, requirement: impl Into<String>) -> Self {
        Error::Domain {
            what,
            value,
            requirement: requirement.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
