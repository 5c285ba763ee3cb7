use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input that does not have the expected shape (non-square tables,
    /// NaN or negative distances, unsorted grids, ...).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A point (or argument) lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The quantitative premise of a local statement does not hold.
    #[error("premise violated: {what} ({lhs} > {rhs})")]
    Premise { what: String, lhs: f64, rhs: f64 },

    #[error("metric closure cannot be sufficient: zero off-diagonal entry at ({0}, {1})")]
    SufficiencyUnachievable(usize, usize),

    /// Bracket doubling for the inverse integral never exceeded the target,
    /// so the integral looks bounded (the weight is not normal).
    #[error("integral stayed below {target} after {doublings} doublings; divergence assumption violated")]
    Divergence { target: f64, doublings: u32 },

    #[error("sequence tail is open; limit is undetermined")]
    UndeterminedTail,

    /// A derived object failed a check that is a theorem for valid inputs.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Parse-level problems versus precondition-level problems; the CLI maps
    /// these onto distinct exit codes.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Malformed(_))
    }
}
