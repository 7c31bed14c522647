use thiserror::Error;

/// Errors raised anywhere in the certification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("binomial coefficient C({0}, k) exceeds the exact integer range (n <= 62)")]
    BinomialOverflow(usize),

    #[error("degenerate nodes: minimum pairwise separation {separation:e} is below {floor:e}")]
    DegenerateNodes { separation: f64, floor: f64 },

    #[error("ill-conditioned node system (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("power-sum bound violated at m = {m}: ratio {ratio}")]
    BoundViolation { m: usize, ratio: f64 },

    #[error(
        "witness polynomial disagrees with its defining sum (relative error {relative_error:e})"
    )]
    WitnessMismatch { relative_error: f64 },

    #[error("node {index} lies outside the frame (normalized modulus {modulus})")]
    FrameViolation { index: usize, modulus: f64 },

    #[error("apolarity gate failed: relative residual {relative_residual:e} exceeds {tol:e}")]
    ApolarityGate { relative_residual: f64, tol: f64 },

    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    NotConverged {
        iterations: usize,
        max_residual: f64,
    },

    #[error("polynomial degree {0} exceeds the supported maximum of 64")]
    DegreeTooLarge(usize),

    #[error("perturbation could not separate nodes: separation {separation:e} below {required:e}")]
    DegenerateConfiguration { separation: f64, required: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
