use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole {
        function: &'static str,
        at: Complex64,
    },
    #[error("{function} is not defined at {at}: {reason}")]
    Domain {
        function: &'static str,
        at: Complex64,
        reason: String,
    },
    #[error("branch condition violated at {at}: {reason}")]
    Branch { at: Complex64, reason: String },
    #[error("argument {arg} lies on the branch cut of the logarithm")]
    Cut { arg: Complex64 },
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("invalid integration path: {0}")]
    InvalidPath(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} is outside the supported evaluator range")]
    OutOfRange(Complex64),
    #[error("function nearly vanishes on the contour near {at}")]
    BoundaryZero { at: Complex64 },
    #[error("newton iteration failed from seed {seed}: {reason}")]
    Newton { seed: Complex64, reason: String },
    #[error("tile [{sigma_min}, {sigma_max}] x [{t_min}, {t_max}]: {source}")]
    Tile {
        sigma_min: f64,
        sigma_max: f64,
        t_min: f64,
        t_max: f64,
        source: Box<Error>,
    },
    #[error("config: {0}")]
    Config(String),
}
