use thiserror::Error;

pub type Result<T> = std::result::Result<T, TautError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TautError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} budget exceeded: {requested} > {cap}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("value does not fit the supported integer range: {0}")]
    TooLarge(String),

    #[error("b_{index} = {value} is not divisible by q = {q}")]
    Divisibility { q: u32, index: usize, value: String },

    #[error("digit rule ambiguity for x = {word:?} at position {position}: {candidates} admissible partner digits")]
    DigitRule {
        word: Vec<u32>,
        position: usize,
        candidates: usize,
    },

    #[error("leaves are linked: {0}")]
    Linked(String),

    #[error("endpoint {numerator}/{q}^{scale} is not on the {q}^{target} grid")]
    OffGrid {
        q: u32,
        numerator: u64,
        scale: u32,
        target: u32,
    },

    #[error("component length {length} (in units of q^-{n}) is not a power of two")]
    NotPowerOfTwo { length: u64, n: u32 },

    #[error("invalid extension choice {choice}: f(c) has {available} children")]
    InvalidChoice { choice: usize, available: usize },

    #[error("option {target} has zero multiplicity at vertex {vertex}")]
    ZeroMultiplicity { vertex: u32, target: u32 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unknown output format '{0}'")]
    UnknownFormat(String),
}

impl TautError {
    /// Stable short identifier used by machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            TautError::InvalidParameter(_) => "invalid_parameter",
            TautError::BudgetExceeded { .. } => "budget_exceeded",
            TautError::TooLarge(_) => "too_large",
            TautError::Divisibility { .. } => "divisibility",
            TautError::DigitRule { .. } => "digit_rule",
            TautError::Linked(_) => "linked",
            TautError::OffGrid { .. } => "off_grid",
            TautError::NotPowerOfTwo { .. } => "not_power_of_two",
            TautError::InvalidChoice { .. } => "invalid_choice",
            TautError::ZeroMultiplicity { .. } => "zero_multiplicity",
            TautError::Invariant(_) => "invariant",
            TautError::UnknownFormat(_) => "unknown_format",
        }
    }
}

pub(crate) fn check_q(q: u32, min: u32) -> Result<()> {
    if q < min {
        return Err(TautError::InvalidParameter(format!(
            "q must be at least {min}, got {q}"
        )));
    }
    Ok(())
}

/// `q^exp` as a u64, or `TooLarge`.
pub(crate) fn pow_u64(q: u32, exp: u32) -> Result<u64> {
    (q as u64)
        .checked_pow(exp)
        .ok_or_else(|| TautError::TooLarge(format!("{q}^{exp}")))
}
