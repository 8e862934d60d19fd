use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{root_with_error, NormEstimate};
use crate::classify::Classification;
use crate::disc_geometry::Cone;
use crate::function_spaces::PlanarMap;
use crate::quadrature::{gauss_weights, graded_angles, kronrod_nodes};
use crate::{Error, Result};

/// Cone samples for the maximal function sit at depths `1 − 2^{−j/2}`, `j = 1..=NT_DEPTH_LEVELS`.
pub const NT_DEPTH_LEVELS: usize = 64;

/// `sup |f|` over the sample lattice of the cone `Γ(e^{iθ}, c)` with `budget` rays per depth.
/// The lattice is nested under doubling of the budget, so the estimate is nondecreasing in it.
pub fn nt_maximal<F: PlanarMap + ?Sized>(f: &F, theta: f64, aperture: f64, budget: usize) -> Result<f64> {
    nt_maximal_levels(f, theta, aperture, budget, NT_DEPTH_LEVELS)
}

fn nt_maximal_levels<F: PlanarMap + ?Sized>(
    f: &F,
    theta: f64,
    aperture: f64,
    rays: usize,
    levels: usize,
) -> Result<f64> {
    let cone = Cone::at_angle(theta, aperture)?;
    let depths: Vec<f64> = (1..=levels).map(|j| 1.0 - (-(j as f64) / 2.0).exp2()).collect();
    let mut best: f64 = 0.0;
    for z in cone.sample(&depths, rays)? {
        best = best.max(f.try_eval(z)?.norm());
    }
    Ok(best)
}

/// Discretisation of [`maximal_lp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalSettings {
    /// Rays per depth in each cone.
    pub rays: usize,
    /// Number of cone depths `1 − 2^{−j/2}`.
    pub depth_levels: usize,
    /// Width of the innermost panels next to a focus angle.
    pub min_width: f64,
}

impl Default for MaximalSettings {
    fn default() -> Self {
        Self {
            rays: 8,
            depth_levels: 40,
            min_width: 1e-5,
        }
    }
}

/// `((1/2π)∫ (f*)ᵖ dt)^{1/p}` by a 15-point Kronrod rule on the panels of a graded mesh with
/// `grid` uniform panels, refined toward the focus angles of `f`. The error is the gap to the
/// embedded Gauss rule.
pub fn maximal_lp<F: PlanarMap + ?Sized>(f: &F, p: f64, aperture: f64, grid: usize) -> Result<NormEstimate> {
    maximal_lp_with(f, p, aperture, grid, MaximalSettings::default())
}

pub fn maximal_lp_with<F: PlanarMap + ?Sized>(
    f: &F,
    p: f64,
    aperture: f64,
    grid: usize,
    settings: MaximalSettings,
) -> Result<NormEstimate> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p must be positive, got {p}")));
    }
    if grid == 0 {
        return Err(Error::InvalidParameter("maximal grid must be positive".into()));
    }
    let pts = graded_angles(&f.focus_angles(), settings.min_width, grid);
    let mut nodes = Vec::new();
    for w in pts.windows(2) {
        let kn = kronrod_nodes(w[0], w[1]);
        let gw = gauss_weights(w[0], w[1]);
        for (k, &(t, wk)) in kn.iter().enumerate() {
            nodes.push((t, wk, gw[k]));
        }
    }
    let values = nodes
        .par_iter()
        .map(|&(t, _, _)| nt_maximal_levels(f, t, aperture, settings.rays, settings.depth_levels))
        .collect::<Result<Vec<f64>>>()?;
    let (mut kron, mut gauss) = (0.0, 0.0);
    for (&(_, wk, wg), v) in nodes.iter().zip(&values) {
        let vp = v.powf(p);
        kron += wk * vp;
        gauss += wg * vp;
    }
    if !kron.is_finite() {
        return Ok(NormEstimate::infinite(Vec::new()));
    }
    let (value, error) = root_with_error(kron / TAU, (kron - gauss).abs() / TAU, p);
    Ok(NormEstimate {
        value,
        error,
        classification: Classification::Converged,
        samples: vec![(grid as f64, value)],
    })
}
