use thiserror::Error;

/// Errors raised by evaluation, classification and transformation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeunError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument |x| = {abs_x:.6e} outside safe region (limit {limit:.6e})")]
    Domain { abs_x: f64, limit: f64 },

    #[error("series did not converge within {terms} terms (tail bound {tail:.3e})")]
    NoConvergence { terms: usize, tail: f64 },

    #[error("recurrence shape error: {0}")]
    Shape(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no column at {0} in P-symbol")]
    MissingColumn(String),

    #[error("inconsistent branch table: {0}")]
    InconsistentBranching(String),

    #[error("parameter at excluded puncture: {0}")]
    Puncture(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("singular e-map: {0}")]
    SingularEMap(String),

    #[error("leading coefficient vanishes; proportionality constant undefined")]
    ZeroLeadingCoefficient,

    #[error("group closure exceeded {0} elements")]
    ClosureOverflow(usize),
}

pub type Result<T> = std::result::Result<T, HeunError>;
