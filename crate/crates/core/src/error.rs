use crate::classifier::PatternMismatch;
use crate::invariants::QuadricClass;
use crate::smallness::SmallnessVerdict;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("all quadric coefficients are zero")]
    AllZero,

    #[error("non-finite coefficient in input")]
    NonFinite,

    #[error("rotation is not orthonormal with det +1 (deviation {deviation:e})")]
    InvalidMotion { deviation: f64 },

    #[error("quadric is a {class}, not an ellipsoid")]
    NotAnEllipsoid { class: QuadricClass },

    #[error("degenerate quadric: {quantity} = {value:e} must be positive")]
    Degenerate { quantity: &'static str, value: f64 },

    #[error("quadric class {class} is not supported here")]
    UnsupportedClass { class: QuadricClass },

    #[error("parameter ordering violated: {0}")]
    BadOrdering(String),

    #[error("smallness condition violated{}: {}", .piece.map(|z| format!(" for zone {z}")).unwrap_or_default(), .verdict.failed_names().join(", "))]
    SmallnessViolated {
        piece: Option<usize>,
        verdict: Box<SmallnessVerdict>,
    },

    #[error("{0}")]
    PatternMismatch(Box<PatternMismatch>),

    #[error("quadric has a nonzero quadratic part; not a plane")]
    NotAPlane,

    #[error("plane normal is zero")]
    ZeroNormal,

    #[error("coefficient {name} = {value:e} should vanish (band {band:e})")]
    StructuralZero {
        name: &'static str,
        value: f64,
        band: f64,
    },

    #[error("ellipsoid lies in sign cell {signs} which names no zone of the scene")]
    NoMatchingZone { signs: String },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("leading coefficient is zero; the polynomial is not a quartic")]
    LeadingZero,
}
