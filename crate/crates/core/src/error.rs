use crate::Rat;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors. The CLI maps every variant to a stable machine-readable
/// code; `Indeterminate*` variants get their own process exit status because
/// they mean "the precision cap, not the mathematics, blocked the answer".
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("unknown type letter {0:?} (expected one of A B C D E F G)")]
    UnknownType(String),
    #[error("rank {rank} out of range for type {kind}: {why}")]
    RankOutOfRange { kind: char, rank: usize, why: String },
    #[error("empty component list")]
    EmptyComponents,
    #[error("lattice generator matrix is not a lattice between the root lattice and the weight lattice: {0}")]
    BadLattice(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("root coordinates {0:?} do not name a root of this datum")]
    NoSuchRoot(Vec<crate::Int>),
    #[error("subsystem is not closed: {0}")]
    NotClosed(String),
    #[error("group order exceeds the enumeration cap ({order} > {cap}); use the closed formula instead")]
    CapExceeded { order: u128, cap: u128 },
    #[error("Weyl order overflows the supported integer range at this rank")]
    OrderOverflow,
    #[error("not a diagram automorphism: {0}")]
    BadAutomorphism(String),
    #[error("field context parameters invalid: {0}")]
    BadContext(String),
    #[error("field contexts differ between operands")]
    ContextMismatch,
    #[error("exponent {0} is not on the 1/{1} grid of this context")]
    BadExponent(Rat, i64),
    #[error("coefficient array longer than the residue degree")]
    BadCoefficient,
    #[error("inversion of an element that vanishes to the precision cap")]
    InvertZero,
    #[error("valuation indeterminate at precision: no term below exponent {bound}, cap is {cap}")]
    IndeterminateValuation { bound: Rat, cap: Rat },
    #[error("depth indeterminate at precision")]
    IndeterminateDepth,
    #[error("nth root needs gcd(n, p) = 1 and n >= 1, got n = {n}, p = {p}")]
    BadRootIndex { n: i64, p: u64 },
    #[error("exponent {0} is not p-integral (p = {1} divides the denominator)")]
    NotPIntegral(Rat, u64),
    #[error("nth root of a non-one-unit (valuation of x - 1 must be positive)")]
    NotOneUnit,
    #[error("group element values must be one-units (valuation of value - 1 must be positive)")]
    ValueNotOneUnit,
    #[error("residue characteristic hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("depth of a group element must be positive, got {0}")]
    NonPositiveDepth(Rat),
    #[error("coordinate count {got} does not match rank {want}")]
    WrongCoordinateCount { got: usize, want: usize },
    #[error("embedding requires coefficients in the prime field and integral exponents: {0}")]
    NotEmbeddable(String),
    #[error("internal postcondition failed: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    BadInput(String),
}

impl Error {
    /// Stable machine-readable code for the CLI error envelope.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            UnknownType(_) => "unknown-type",
            RankOutOfRange { .. } => "rank-out-of-range",
            EmptyComponents => "empty-components",
            BadLattice(_) => "bad-lattice",
            NotPrime(_) => "not-prime",
            NoSuchRoot(_) => "no-such-root",
            NotClosed(_) => "not-closed",
            CapExceeded { .. } => "cap-exceeded",
            OrderOverflow => "order-overflow",
            BadAutomorphism(_) => "bad-automorphism",
            BadContext(_) => "bad-context",
            ContextMismatch => "context-mismatch",
            BadExponent(..) => "bad-exponent",
            BadCoefficient => "bad-coefficient",
            InvertZero => "invert-zero",
            IndeterminateValuation { .. } => "indeterminate-valuation",
            IndeterminateDepth => "indeterminate-depth",
            BadRootIndex { .. } => "bad-root-index",
            NotPIntegral(..) => "not-p-integral",
            NotOneUnit => "not-one-unit",
            ValueNotOneUnit => "value-not-one-unit",
            HypothesisFailure(_) => "hypothesis-failure",
            NonPositiveDepth(_) => "non-positive-depth",
            WrongCoordinateCount { .. } => "wrong-coordinate-count",
            NotEmbeddable(_) => "not-embeddable",
            Internal(_) => "internal",
            BadInput(_) => "bad-input",
        }
    }

    /// True when the failure is a precision artifact rather than a domain error.
    pub fn is_indeterminate(&self) -> bool {
        matches!(
            self,
            Error::IndeterminateValuation { .. } | Error::IndeterminateDepth
        )
    }
}
