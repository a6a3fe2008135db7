use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument |z| = {abs} outside the evaluation domain |z| <= {limit}")]
    DomainOverflow { abs: f64, limit: f64 },

    #[error("pole at z = 0")]
    Pole,

    #[error("order l = {l} exceeds the supported maximum {max}")]
    OrderOverflow { l: usize, max: usize },

    #[error("non-finite value produced in {context}")]
    NonFinite { context: &'static str },

    #[error("function nearly vanishes on the contour at ({re}, {im})")]
    BoundaryZero { re: f64, im: f64 },

    #[error("phase could not be resolved along the contour: {0}")]
    Resolution(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("degenerate first fundamental form (condition number {cond:.3e})")]
    DegenerateMetric { cond: f64 },

    #[error("curvature must be positive, got {0}")]
    NonPositiveCurvature(f64),

    #[error("singular matrix at pivot {0}")]
    Singular(usize),

    #[error("empty resonance set")]
    EmptySet,

    #[error("missing first-string entries for modes {0:?}")]
    MissingModes(Vec<usize>),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// `true` for failures of an iterative or adaptive numerical method, as
    /// opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_)
                | Error::Resolution(_)
                | Error::BoundaryZero { .. }
                | Error::Singular(_)
                | Error::NonFinite { .. }
        )
    }
}
