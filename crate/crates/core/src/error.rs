use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("evaluation point coincides with the pole at puncture {k}")]
    PoleAtEvaluationPoint { k: u64 },

    #[error("head {head} is below the required cutoff {required} for a certified tail")]
    InvalidHead { head: u64, required: u64 },

    #[error("value with ln|f| = {log_modulus:.3e} is outside the floating-point range")]
    Unrepresentable { log_modulus: f64 },

    #[error("degenerate region: {0}")]
    DegenerateRegion(String),

    #[error("region meets the pole at puncture {k}")]
    RegionMeetsPole { k: u64 },

    #[error("contour passes through (or too close to) a zero: |f| = {modulus:e}")]
    ContourThroughZero { modulus: f64 },

    #[error("argument jump {jump:.3} rad exceeds the aliasing threshold with {samples} samples")]
    AliasedContour { jump: f64, samples: usize },

    #[error("winding analysis failed at puncture {k}: {source}")]
    AtPuncture {
        k: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
