use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HullError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial of degree {degree} does not fit a degree-{bound} section")]
    DegreeExceeded { degree: u32, bound: u32 },

    #[error("section is not homogeneous: term of total degree {total} in a degree-{degree} section")]
    NotHomogeneous { total: u32, degree: u32 },

    #[error("invalid affine chart: {0}")]
    InvalidChart(String),

    #[error("evaluation at the pole a_{index}")]
    Pole { index: usize },

    #[error("evaluation at the rotated pole e^(2 pi i {l}/{k}) a_{k}")]
    RotatedPole { k: usize, l: usize },

    #[error("point outside the evaluation domain: {0}")]
    Domain(String),

    #[error("pole of order {order} at {pole} is not simple")]
    UnsupportedPole { pole: Complex64, order: u32 },

    #[error("degree cap violated: degree {degree} needs basis dimension {dim}, cap is {cap} (samples / 4)")]
    DegreeCap { degree: u32, dim: usize, cap: usize },

    #[error("every Gram eigenvalue is below the cutoff")]
    SingularGram,

    #[error("linear program is unbounded (too few samples for degree {degree})")]
    UnboundedLp { degree: u32 },

    #[error("Blaschke product vanishes at {0}")]
    BlaschkeZero(Complex64),

    #[error("no feasible disk found; best penalty {best_penalty:e}")]
    Infeasible { best_penalty: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HullError>;
