use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("filtration is not admissible: {0}")]
    NotAdmissible(String),
    #[error("map does not respect filtrations: {0}")]
    FiltrationNotRespected(String),
    #[error("map is not a chain map: {0}")]
    NotAChainMap(String),
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("not closed under decomposition: {0}")]
    NotClosedUnderDecomposition(String),
    #[error("curvature mismatch: {0}")]
    CurvatureMismatch(String),
    #[error("not a twisting morphism: {0}")]
    NotATwistingMorphism(String),
    #[error("not conilpotent: {0}")]
    NotConilpotent(String),
    #[error("semisimple part does not split over Q: {0}")]
    NonSplitSemisimple(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
