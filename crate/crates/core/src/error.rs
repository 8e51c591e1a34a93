use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid physical parameter {name} = {value}: must be finite and positive")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("invalid Laguerre index combination n = {n}, alpha = {alpha}")]
    InvalidLaguerre { n: usize, alpha: i64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("quadrature order {0} outside 1..=200")]
    QuadratureOrder(usize),

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("label ({n}, {l}) does not fit below cutoff {cutoff}")]
    LabelExceedsCutoff { n: usize, l: usize, cutoff: usize },

    #[error("both operands carry a Gaussian factor; the bidifferential series does not terminate")]
    NonTerminatingSeries,

    #[error("observable is not real-valued")]
    NonRealObservable,

    #[error("state is not normalized: trace {trace}")]
    NotNormalized { trace: f64 },

    #[error("moment order {0} outside 1..=8")]
    MomentOrder(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
