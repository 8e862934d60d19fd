use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {re}{im:+}i lies outside the open unit disc")]
    OutsideDisc { re: f64, im: f64 },

    #[error("boundary homeomorphism check failed: {0}")]
    NotHomeomorphism(String),

    #[error("quadrature did not converge on [{a}, {b}] (estimate {estimate}, error {error})")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },

    #[error("root finding did not converge for target {re}{im:+}i (residual {residual})")]
    RootFinding { re: f64, im: f64, residual: f64 },

    #[error("non-positive Jacobian {jacobian} at {re}{im:+}i")]
    DistortionViolation { re: f64, im: f64, jacobian: f64 },

    #[error("Monte Carlo exclusions {excluded} of {total} exceed the allowed fraction")]
    TooManyExclusions { excluded: usize, total: usize },
}

impl Error {
    pub(crate) fn outside(z: crate::C64) -> Self {
        Error::OutsideDisc { re: z.re, im: z.im }
    }
}
