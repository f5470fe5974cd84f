use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("temperature parameter tau = {0} must exceed 2")]
    InvalidTemperature(f64),

    #[error("tree order k = {0} must be at least 2")]
    InvalidOrder(u32),

    #[error("constraint violated: u_-1 + u_1 = {sum} must be below tau = {tau}")]
    ConstraintViolation { sum: f64, tau: f64 },

    #[error("degenerate problem: {0}")]
    EmptyProblem(&'static str),

    #[error("{value} is not a root (|p(r)| = {residual:e})")]
    NotARoot { value: f64, residual: f64 },

    #[error("no count transition between tau = {lo} and tau = {hi} (count {count} at both ends)")]
    NoTransition { lo: f64, hi: f64, count: usize },

    #[error("enumeration of {size} configurations exceeds the limit of {limit}")]
    Oversized { size: u128, limit: u128 },

    #[error("radius {radius} exceeds the supported maximum {max}")]
    RadiusTooLarge { radius: u32, max: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
