use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkzError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The generators do not span the full integer lattice.
    #[error("generators span a proper sublattice of Z^{rank} (elementary divisors {divisors:?})")]
    SpanDeficient { rank: usize, divisors: Vec<String> },

    /// No linear form takes the value 1 on every generator.
    #[error("no grading form h with h(a_i) = 1 for all generators")]
    NoGradingForm,

    #[error("the cone spanned by the generators is not full-dimensional")]
    DegenerateCone,

    #[error("no point l in [0, {p})^N with psi(l) = {beta}")]
    EmptyFiber { beta: String, p: u64 },

    #[error("prime {p} is too small: facet margin requires {reason}")]
    PrimeTooSmall { p: u64, reason: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {p} divides the common denominator {denominator}")]
    PrimeDividesDenominator { p: u64, denominator: String },

    #[error("the configuration is not saturated: C(A) ∩ Z^r has points outside the semigroup")]
    NotSaturated,

    #[error("the system is reducible for these parameters")]
    Reducible,

    #[error("no torus chart: {0}")]
    NonConvergentDirection(String),

    #[error("gamma does not project onto alpha")]
    GammaMismatch,

    #[error("series operation needs constant term 1")]
    NotUnitSeries,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = GkzError> = std::result::Result<T, E>;
