//! Error type shared by every layer of the library.

use thiserror::Error;

/// Everything that can go wrong while building or evaluating the models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Some group element has a non-integral age (the action is not in SL(3)).
    #[error("group is not in SL(3): {0}")]
    NonSL(String),
    /// A non-identity element of the declared abstract group acts trivially on C^3.
    #[error("group action is not effective: {0}")]
    Ineffective(String),
    /// The group is trivial.
    #[error("the group is trivial")]
    TrivialGroup,
    /// The group exceeds the configured order cap.
    #[error("group order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    /// An operation was requested outside its domain of definition.
    #[error("not applicable: {0}")]
    NotApplicable(String),
    /// An internal consistency check failed; indicates a bug upstream.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    /// Triangulation enumeration exceeded the node budget.
    #[error("triangulation search exceeded the node budget of {0}")]
    TooLarge(usize),
    /// The requested edge is a boundary edge, i.e. a non-compact curve.
    #[error("edge ({0},{1}) is not a compact curve")]
    NotCompact(usize, usize),
    /// No choice of one star edge per exceptional divisor gives a Z-basis.
    #[error("no star-edge selection yields a Z-basis of the relation lattice")]
    NoBasisFound,
    /// The brane segment is not a boundary edge on the side v1 v2.
    #[error("segment ({0},{1}) is not a boundary edge on the side v1 v2")]
    NotOnV1V2(usize, usize),
    /// Gamma-ratio arguments do not differ by an integer.
    #[error("gamma ratio arguments {0} and {1} do not differ by an integer")]
    NonIntegerDifference(String, String),
    /// A Gamma ratio with a pole in the numerator only was met inside a sum.
    #[error("gamma ratio {0}/{1} diverges")]
    Divergent(String, String),
    /// Torus-weight parameter a is not in (1/|G|) Z.
    #[error("framing parameter a = {0} is not admissible")]
    WeightNotAdmissible(String),
    /// Series operands have incompatible variables or truncations.
    #[error("truncation or variable mismatch: {0}")]
    TruncationMismatch(String),
    /// A comparison met a coefficient with a non-integral formal phase.
    #[error("non-integral phase in comparison at exponent {0}")]
    NonIntegralPhaseInComparison(String),
    /// A matrix that must be invertible is singular.
    #[error("singular matrix: {0}")]
    Singular(String),
    /// The operation requires the effective case |G0| = 1.
    #[error("operation requires an effective action on the z0-axis")]
    NotEffective,
    /// Malformed input (group spec, rational literal, CLI argument).
    #[error("parse error: {0}")]
    Parse(String),
    /// File-system failure.
    #[error("i/o error: {0}")]
    Io(String),
}

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;
