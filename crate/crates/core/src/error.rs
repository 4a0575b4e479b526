use thiserror::Error;

/// Every failure the engine can report.
///
/// Mathematical surprises (a counterexample to an open conjecture) are
/// carried as ordinary report data, never as errors; `CounterexampleFound`
/// is only raised by operations whose contract demands an answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("modulus {0:?} is not a monic irreducible polynomial of the requested degree")]
    ReducibleModulus(Vec<u32>),
    #[error("ring order {order} exceeds the cap {cap}")]
    OrderTooLarge { order: u64, cap: u64 },
    #[error("bad ring spec `{0}`")]
    BadSpec(String),
    #[error("element set is not an ideal of the ring")]
    NotAnIdeal,
    #[error("the whole ring cannot be used here; a proper ideal is required")]
    ImproperIdeal,
    #[error("family is not intersection-closed: {a:#b} ∩ {b:#b} is missing")]
    NotIntersectionClosed { a: u32, b: u32 },
    #[error("family must contain both the empty set and the full universe")]
    MissingTopOrBottom,
    #[error("no element lies in at most half of the members of {0}")]
    CounterexampleFound(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("{what} exceeds the cap {cap}")]
    CapExceeded { what: String, cap: u64 },
    #[error("map is not an involution on its domain")]
    NotAnInvolution,
    #[error("quadratic ideal is not proper")]
    NotProper,
    #[error("certificate rejected: {0}")]
    CertificateInvalid(String),
    #[error("lift witness does not commute with the quotient map")]
    LiftMismatch,
    #[error("no proper nonzero covering ideal for monoid {0:?}")]
    NoCoveringIdeal(Vec<u32>),
    #[error("search domain of size {size} exceeds the limit {limit}")]
    DomainTooLarge { size: usize, limit: usize },
    #[error("ring is not local")]
    NotLocal,
    #[error("ring is a field")]
    IsField,
    #[error("set is not an extended submonoid: {0}")]
    NotExtendedSubmonoid(String),
    #[error("cache entry {0} is corrupt")]
    CacheCorrupt(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
