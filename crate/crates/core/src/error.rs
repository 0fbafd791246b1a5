use thiserror::Error;

use crate::quadrature::QuadResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid Mittag-Leffler parameters: alpha = {alpha}, beta = {beta} ({reason})")]
    InvalidParams {
        alpha: f64,
        beta: f64,
        reason: &'static str,
    },

    #[error("gamma function has a pole at x = {0}")]
    GammaPole(f64),

    #[error("gamma function overflows at x = {0}")]
    GammaOverflow(f64),

    #[error("Mittag-Leffler evaluation did not converge at z = {re} + {im}i")]
    NonConvergence { re: f64, im: f64 },

    #[error("argument outside the decay sector: |arg z| = {arg} <= {bound}")]
    SectorViolation { arg: f64, bound: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("quadrature budget exhausted after {evaluations} evaluations")]
    BudgetExceeded { evaluations: usize, best: Box<QuadResult> },

    #[error("divergent integral: zero at {location} of multiplicity {multiplicity} with local exponent {exponent}")]
    DivergentIntegral {
        location: f64,
        multiplicity: u32,
        exponent: f64,
    },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid amplitude: {0}")]
    InvalidAmplitude(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("derivative condition violated: min |D^k P| = {min_value} < {required}")]
    DerivativeCondition { min_value: f64, required: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("need at least 3 points for a fit, got {0}")]
    InsufficientPoints(usize),

    #[error("fit requires positive coordinates, got ({0}, {1})")]
    NonPositiveValue(f64, f64),

    #[error("delta = {0} is outside the verified range (1/3, 1)")]
    CaseRouting(f64),

    #[error("zero discriminant")]
    ZeroDiscriminant,
}

impl Error {
    /// True for errors caused by violated harness or operation preconditions.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::DerivativeCondition { .. }
                | Error::Precondition(_)
                | Error::ZeroDiscriminant
                | Error::SectorViolation { .. }
        )
    }
}
