use std::cell::RefCell;
use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{root_with_error, NormEstimate};
use crate::classify::{classify_means, Classification};
use crate::function_spaces::{BoundaryTrace, PlanarMap};
use crate::quadrature::{integrate_periodic, AngularMesh, QuadSettings};
use crate::{Error, Result, C64};

/// Number of radii `r_k = 1 − 2^{−k}` in the default Hardy-norm schedule.
pub const DEFAULT_SCHEDULE_LEVELS: u32 = 20;

const MAX_INTERVALS: usize = 6000;

/// `r_k = 1 − 2^{−k}` for `k = 1..=levels`.
pub fn radial_schedule(levels: u32) -> Vec<f64> {
    (1..=levels).map(|k| 1.0 - (-(k as f64)).exp2()).collect()
}

pub fn default_schedule() -> Vec<f64> {
    radial_schedule(DEFAULT_SCHEDULE_LEVELS)
}

/// `M_p(r)ᵖ` with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent p must be positive, got {p}")))
    }
}

/// `M_p(r)ᵖ = (1/2π)∫|f(re^{iθ})|ᵖ dθ` by adaptive quadrature graded toward the singular and
/// kink angles of `f`. Relative target `1e−8`, loosened to `1e−5` beyond `r = 1 − 10⁻⁶`.
pub fn integral_mean<F: PlanarMap + ?Sized>(f: &F, r: f64, p: f64) -> Result<MeanEstimate> {
    check_p(p)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("radius {r} outside [0, 1)")));
    }
    if r == 0.0 {
        let v = f.try_eval(C64::new(0.0, 0.0))?.norm().powf(p);
        return Ok(MeanEstimate { value: v, error: 0.0, converged: true });
    }
    let rel = if r > 1.0 - 1e-6 { 1e-5 } else { 1e-8 };
    let settings = QuadSettings {
        max_intervals: MAX_INTERVALS,
        ..QuadSettings::with_rel(rel)
    };
    let mesh = AngularMesh::interior(f.focus_angles(), (1.0 - r) / 16.0);
    let failure = RefCell::new(None);
    let q = integrate_periodic(
        |t| match f.try_eval(C64::from_polar(r, t)) {
            Ok(v) => v.norm().powf(p),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        &mesh,
        settings,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(MeanEstimate {
        value: q.value / TAU,
        error: q.error / TAU,
        converged: q.converged,
    })
}

/// `sup_r M_p(r)` over `schedule` (increasing radii), classified from the tail of the sequence
/// of means `M_p(r_k)`.
pub fn hardy_norm<F: PlanarMap + ?Sized>(f: &F, p: f64, schedule: &[f64]) -> Result<NormEstimate> {
    check_p(p)?;
    if schedule.is_empty() || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("radial schedule must be nonempty and increasing".into()));
    }
    let means = schedule
        .par_iter()
        .map(|&r| integral_mean(f, r, p))
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<(f64, f64)> = means.iter().map(|m| root_with_error(m.value, m.error, p)).collect();
    let values: Vec<f64> = norms.iter().map(|n| n.0).collect();
    let mut classification = classify_means(&values);
    if classification == Classification::Converged && means.iter().any(|m| !m.converged) {
        classification = Classification::Undetermined;
    }
    let &(value, error) = norms
        .iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty schedule");
    Ok(NormEstimate {
        value,
        error,
        classification,
        samples: schedule.iter().copied().zip(values).collect(),
    })
}

/// `((1/2π)∫|f(e^{it})|ᵖ dt)^{1/p}` from the boundary trace, graded toward pulled-back
/// singular angles; a non-summable singularity gives an infinite, diverging estimate.
pub fn boundary_lp_norm<F: PlanarMap + ?Sized>(f: &F, p: f64) -> Result<NormEstimate> {
    check_p(p)?;
    let focus = f.focus_angles();
    let singular: Vec<f64> = focus
        .iter()
        .copied()
        .filter(|&t| matches!(f.boundary_value(t), BoundaryTrace::Infinite))
        .collect();
    let mesh = AngularMesh::boundary(focus, singular);
    let settings = QuadSettings {
        max_intervals: MAX_INTERVALS,
        ..QuadSettings::with_rel(1e-10)
    };
    let q = integrate_periodic(|t| f.boundary_value(t).norm().powf(p), &mesh, settings);
    if q.diverging || !q.value.is_finite() {
        return Ok(NormEstimate::infinite(Vec::new()));
    }
    let mean = q.value / TAU;
    let (value, error) = root_with_error(mean, q.error / TAU, p);
    Ok(NormEstimate {
        value,
        error,
        classification: if q.converged { Classification::Converged } else { Classification::Undetermined },
        samples: vec![(1.0, value)],
    })
}
