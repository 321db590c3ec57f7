use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants fall into two groups: argument problems (bad inputs, caught before
/// any numerics run) and numerical failures (the computation ran and hit a
/// singular or unstable configuration). [`Error::is_numerical`] tells them
/// apart, which the command-line front end maps onto exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no radius below {max_radius} where |V| <= {epsilon_tail}")]
    RangeNotFound { max_radius: f64, epsilon_tail: f64 },

    #[error("Numerov step failed at r = {r}: vanishing denominator (reduce dr)")]
    StepFailure { r: f64 },

    #[error("solution overflowed at r = {r} (reduce dr)")]
    Instability { r: f64 },

    #[error("zero numerical derivative at the matching radius")]
    DegenerateDerivative,

    #[error("effective range undefined for a = 0")]
    EffectiveRangeUndefined,

    #[error("u(R) = 0: normalization to the outside solution is singular")]
    MatchingSingular,

    #[error("solution is not normalized")]
    NotNormalized,

    #[error("u(R) = 0: logarithmic derivative undefined")]
    LogDerivativeUndefined,

    #[error("no bound state for a = {a} (requires a > 0)")]
    NoBoundState { a: f64 },

    #[error("finite-range formula invalid: 2 r0 / a = {ratio} >= 1")]
    FiniteRangeInvalid { ratio: f64 },

    #[error("divergence: parameter {parameter} is within {distance:e} of the pole at {pole} ({note})")]
    Divergence {
        parameter: f64,
        pole: f64,
        distance: f64,
        note: &'static str,
    },

    #[error("no bracket on [{lo}, {hi}]: objective does not change sign ({detail})")]
    NoBracket { lo: f64, hi: f64, detail: String },

    #[error("tuning did not converge after {iterations} outer iterations (a = {last_a}, r0 = {last_r0})")]
    ConvergenceFailure {
        iterations: usize,
        last_a: f64,
        last_r0: f64,
    },
}

impl Error {
    /// True for failures raised by the numerics rather than by input validation.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidArgument(_) | Error::Unsupported(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
