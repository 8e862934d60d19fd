//! Integral means, Hardy norms, boundary and maximal `Lᵖ` norms, weighted area integrals and
//! the average derivative.
//!
//! Conventions: [`integral_mean`] returns `M_p(r)ᵖ = (1/2π)∫|f(re^{iθ})|ᵖ dθ` and the area
//! functionals return the integral itself; every function named `*_norm` (and
//! [`maximal_lp`]) returns a norm, i.e. the `1/p`-th power of the corresponding mean.

mod area;
mod maximal;
mod means;

use crate::classify::Classification;

pub use area::{
    area_integral, area_integral_af, area_integral_af_with, area_integral_with, average_derivative,
    AfEstimate, AreaSettings, DerivativeKind,
};
pub use maximal::{maximal_lp, maximal_lp_with, nt_maximal, MaximalSettings, NT_DEPTH_LEVELS};
pub use means::{
    boundary_lp_norm, default_schedule, hardy_norm, integral_mean, radial_schedule, MeanEstimate,
    DEFAULT_SCHEDULE_LEVELS,
};

/// A norm or integral with an error estimate, a convergence verdict and the sequence it was
/// derived from (`(r, value)` pairs for radial schedules, `(level, partial)` otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub error: f64,
    pub classification: Classification,
    pub samples: Vec<(f64, f64)>,
}

impl NormEstimate {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub(crate) fn infinite(samples: Vec<(f64, f64)>) -> Self {
        Self {
            value: f64::INFINITY,
            error: f64::INFINITY,
            classification: Classification::Diverging,
            samples,
        }
    }
}

/// `x^{1/p}` with the error propagated to first order.
pub(crate) fn root_with_error(x: f64, err: f64, p: f64) -> (f64, f64) {
    let v = x.powf(1.0 / p);
    let e = if x > 0.0 { v * err / (p * x) } else { err.powf(1.0 / p) };
    (v, e)
}
