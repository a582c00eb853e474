use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-finite coordinate or length")]
    NonFinite,

    #[error("infeasible: tangent length t_{index} = {value} is not positive")]
    Infeasible { index: usize, value: f64 },

    #[error("unsolvable: alternating side-length sum is {alternating_sum}, expected 0")]
    Unsolvable { alternating_sum: f64 },

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("closure violated: tangent angles sum to {angle_sum} rad, expected 2π")]
    ClosureViolated { angle_sum: f64 },

    #[error("not tangential: side-line distances from the best center spread by {spread}")]
    NotTangential { spread: f64 },

    #[error("polygon is not strictly convex")]
    NotConvex,

    #[error("wrong arity: {0}")]
    WrongArity(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("extension spec has {got} entries, polygon needs {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("Pitot condition violated: a + c = {ac}, b + d = {bd}")]
    PitotViolated { ac: f64, bd: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "degenerate_input",
            Error::NonFinite => "non_finite",
            Error::Infeasible { .. } => "infeasible",
            Error::Unsolvable { .. } => "unsolvable",
            Error::MissingParameter(_) => "missing_parameter",
            Error::ClosureViolated { .. } => "closure_violated",
            Error::NotTangential { .. } => "not_tangential",
            Error::NotConvex => "not_convex",
            Error::WrongArity(_) => "wrong_arity",
            Error::InvalidIndex(_) => "invalid_index",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::PitotViolated { .. } => "pitot_violated",
            Error::InvalidConfig(_) => "invalid_config",
        }
    }
}
