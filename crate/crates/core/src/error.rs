use crate::ring::Coord;

/// Errors produced by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An element was asked to be divided by a coordinate it is not a
    /// multiple of.
    #[error("element is not divisible by {0}")]
    NotDivisible(Coord),

    /// Zero was passed to an operation that is undefined on zero
    /// (degree, valuation, ...).
    #[error("operation undefined on the zero element")]
    ZeroInput,

    /// Division by an expression that is not a monomial in x, y, z.
    #[error("division only by nonzero monomials in x, y, z")]
    NonMonomialDivisor,

    /// Evaluation hit a vanishing denominator: the point lies outside the
    /// chart where the element is defined.
    #[error("denominator vanishes at the given point")]
    DivisionByZero,

    /// The point does not satisfy x^2 + y^2 + z^2 = 1.
    #[error("point does not lie on the unit sphere")]
    NotOnSphere,

    /// The valuation search exceeded its configured order cap.
    #[error("valuation search exceeded the order cap {0}")]
    ValuationCapExceeded(usize),

    /// A vector-field triple violates x*f1 + y*f2 + z*f3 = 0.
    #[error("coefficients do not define a tangent field: x*f1 + y*f2 + z*f3 != 0")]
    NotTangent,

    /// delta(i, j) with i = j, or an index outside 1..=3.
    #[error("invalid rotation-field indices ({0}, {1})")]
    BadDeltaIndices(usize, usize),

    /// The requested weight exponent (alpha ± m)/2 is not an integer.
    #[error("(alpha {sign} m)/2 is not an integer for m = {m}, alpha = {alpha}")]
    NonIntegralExponent { m: usize, alpha: String, sign: char },

    /// Mixed weights where equal weights are required.
    #[error("weight mismatch: ({0}) vs ({1})")]
    WeightMismatch(String, String),

    /// Index out of the valid range of an operation (summand index etc.).
    #[error("index {index} out of range {max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// closure::generate received no generators.
    #[error("no generators supplied")]
    EmptyGenerators,

    /// The closure basis exceeded the configured dimension cap.
    #[error("closure basis exceeded the dimension cap {0}")]
    WindowOverflow(usize),

    /// An element does not fit in the requested window.
    #[error("element outside the window: {0}")]
    OutsideWindow(String),

    /// An element that must have pure z-power denominators has others.
    #[error("denominator is not a pure power of z")]
    NotZLocal,

    /// A probe could not reach a decision inside its window.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Inversion of a localized element that is not a monomial unit.
    #[error("element is not invertible in the localized ring")]
    NotInvertible,

    /// Syntax error in an input expression, with a byte position.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
