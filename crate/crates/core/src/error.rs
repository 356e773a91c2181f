use thiserror::Error;

use crate::jet::JetError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),

    #[error("degenerate induced metric: det g = {det:.3e}")]
    DegenerateMetric { det: f64 },
    #[error("degenerate normal: <N, N> = {norm2:.3e}")]
    DegenerateNormal { norm2: f64 },
    #[error("not an immersion: psi, psi_u, psi_v are linearly dependent")]
    NotImmersed,
    #[error("point ({u}, {v}) is outside the chart domain")]
    OutOfDomain { u: f64, v: f64 },
    #[error("point ({u}, {v}) is off the space form: <x, x> - c = {defect:.3e}")]
    OffSpace { u: f64, v: f64, defect: f64 },
    #[error("inconsistent frame: {0}")]
    InconsistentFrame(String),
    #[error("singular basis")]
    InvalidBasis,
    #[error("insufficient jet order {have}, need {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("identity violated: {name} residual {residual:.3e} exceeds {tolerance:.1e}")]
    IdentityViolation {
        name: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error("at grid point ({i}, {j}) = ({u}, {v}): {source}")]
    AtGridPoint {
        i: usize,
        j: usize,
        u: f64,
        v: f64,
        source: Box<Error>,
    },
    #[error("need at least {need} sample points, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("grid must be at least {min}x{min}, got {n}x{m}")]
    GridTooSmall { n: usize, m: usize, min: usize },

    #[error("empty slice: {0}")]
    EmptySlice(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("invalid complex radius a = {a}, b = {b}: need a^2 - b^2 = -1 and ab != 0")]
    InvalidComplexRadius { a: f64, b: f64 },
    #[error("bad initial frame: {0}")]
    BadInitialFrame(String),
    #[error("frame drift {drift:.3e} exceeds {tolerance:.1e}; reduce the step")]
    StepTooLarge { drift: f64, tolerance: f64 },
    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("bad parameter `{key}`: {reason}")]
    BadParam { key: String, reason: String },
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
}

impl Error {
    pub(crate) fn at_grid(self, i: usize, j: usize, u: f64, v: f64) -> Self {
        Error::AtGridPoint {
            i,
            j,
            u,
            v,
            source: Box::new(self),
        }
    }

    pub(crate) fn bad_param(key: &str, reason: impl Into<String>) -> Self {
        Error::BadParam {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}
