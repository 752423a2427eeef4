use thiserror::Error;

/// Errors surfaced by series construction and identity verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series constant term must be +1 or -1 to invert")]
    NonUnitConstant,

    #[error("division by a q^0 z-factor: denominator atom (1 - {0}) must be cancelled first")]
    UncancelledQ0Denominator(String),

    #[error("non-cancellable q^0 denominator (1 - {0}); use windowed expansion instead")]
    NonCancellableQ0(String),

    #[error("window lower bound {0} exceeds upper bound {1}")]
    BadWindow(i64, i64),

    #[error(
        "windowed expansion requires q^0 poles of the form 1/(1 - z^e) with e > 0, got (1 - {0})"
    )]
    UnsupportedPole(String),

    #[error("substitution exponent r must be positive")]
    NonPositiveSubstitution,

    #[error("substitution produced a factor with negative q-exponent {0}")]
    NegativeSubstitutedExponent(i64),

    #[error("bracket shift f = {f} must satisfy f < m = {m}; reduce f mod m")]
    BracketShiftTooLarge { f: u64, m: u64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("brute-force guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),

    #[error("identity {id}: {msg}")]
    BadIdentityParams { id: String, msg: String },

    #[error("identity {0} requires a z-window (uncancellable q^0 pole)")]
    WindowRequired(String),
}
