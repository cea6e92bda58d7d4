//! Exact abstract continued fractions.
//!
//! Codes in the multimonoid of nonnegative extended-modular matrices, their
//! graph-directed iterated function systems, the associated Gauss-type maps,
//! and checks on purely periodic quadratic points.
//!
//! The arithmetic layers (`exact`, `modular`, the interval unions and the
//! dyadic twin) are generic over an [`exact::Int`] scalar. The aliases below
//! fix it to `i128`, which is what the higher layers and the CLI use.

pub mod attractor;
pub mod cfspec;
pub mod dynamics;
pub mod exact;
pub mod minkowski;
pub mod modular;
pub mod plot;
pub mod report;
pub mod transducer;
pub mod words;

use thiserror::Error;

/// Scalar used by the concrete aliases.
pub type Z = i128;

pub type Quadratic = exact::Quad<Z>;
pub type QNum = exact::Point<Z>;
pub type Key = exact::CircKey<Z>;
pub type Form = exact::QuadForm<Z>;
pub type Mat = modular::Matrix<Z>;
pub type Interval = modular::UnimodInterval<Z>;
pub type Union = attractor::IntervalUnion<Z>;
pub type Arc = attractor::CircArc<Z>;

pub use attractor::{AttractorDesc, Gdifs, Side, Verdict};
pub use cfspec::{CfSpec, Code, CodeVerdict};
pub use words::{Arrow, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different quadratic fields")]
    MixedField,
    #[error("division by zero")]
    DivByZero,
    #[error("negative discriminant")]
    NegativeDiscriminant,
    #[error("discriminant is a perfect square")]
    RationalRoots,
    #[error("discriminant must be positive, non-square and 0 or 1 mod 4")]
    BadDiscriminant,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error at {at}: {msg}")]
    Validation { at: String, msg: String },
    #[error("`{0}` is not a prefix")]
    NotAPrefix(String),
    #[error("arrows do not compose: node {0} vs {1}")]
    NodeMismatch(usize, usize),
    #[error("matrix is the identity")]
    IdentityMatrix,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("point {0} lies outside the interval")]
    NotInInterval(String),
    #[error("point {0} lies outside the attractor")]
    NotInAttractor(String),
    #[error("conjugated tail map is not parabolic")]
    WitnessNotParabolic,
    #[error("G matrix is not irreducible")]
    NotIrreducible,
    #[error("two tokens met at one transducer node")]
    TwoTokens,
    #[error("all transducer tokens died")]
    AllTokensDied,
    #[error("no cycle found within the step budget")]
    CycleNotFound,
    #[error("step budget exceeded")]
    StepBudgetExceeded,
    #[error("rational point has a finite jump orbit")]
    RationalPoint,
    #[error("no return to R within the budget")]
    NoReturn,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
