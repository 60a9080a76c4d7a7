use thiserror::Error;

/// Semantic errors raised by game construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{element}` in set `{set}`")]
    DuplicateElement { set: String, element: String },

    /// Two interfaces that were required to coincide do not.
    #[error("interface mismatch: expected {expected}, found {found}")]
    InterfaceMismatch { expected: String, found: String },

    /// An enumeration would exceed the configured cap.
    #[error("domain too large: {what} needs {count} cases, cap is {cap}")]
    DomainTooLarge { what: String, count: u128, cap: u64 },

    /// A decision was asked to choose from a set with no elements.
    #[error("decision has an empty choice set")]
    EmptyChoiceSet,

    /// Equilibria were requested for a game with a nontrivial outer interface.
    #[error("game is not closed: {0}")]
    NotClosed(String),

    #[error("permutation of length {perm} does not match {ports} ports")]
    LengthMismatch { perm: usize, ports: usize },

    /// A payoff label could not be read as an exact rational number.
    #[error("outcome label `{0}` is not a rational number")]
    NonNumericOutcome(String),
}
