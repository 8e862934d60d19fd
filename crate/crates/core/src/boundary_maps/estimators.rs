//! Measured distortion of boundary maps and their extensions.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::extension::DiscQCMap;
use super::homeo::BoundaryHomeo;
use crate::classify::{self, Classification};
use crate::disc_geometry::{Cone, HyperbolicBall};
use crate::{Error, Result, C64};

/// Finite-difference step as a fraction of the distance to the boundary.
pub const DEFAULT_FD_SCALE: f64 = 1e-5;

/// Cone samples are taken at depths `1 − 2^{−k/2}` for `k = 1..=CONE_DEPTH_LEVELS`.
pub const CONE_DEPTH_LEVELS: usize = 64;

/// Points sampled on each ball boundary by [`circular_distortion_check`].
const BALL_BOUNDARY_POINTS: usize = 32;

/// A sup-type quantity measured at dyadic depths `1, 2, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicProfile {
    pub values: Vec<f64>,
}

impl DyadicProfile {
    /// Value at depth `d ≥ 1`.
    pub fn at(&self, depth: usize) -> f64 {
        self.values[depth - 1]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("nonempty profile")
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn stabilizes(&self) -> bool {
        classify::stabilizes(&self.values)
    }

    pub fn classification(&self) -> Classification {
        classify::classify_sup(&self.values)
    }
}

/// Lifted endpoints `(a, a + L)` of the dyadic arcs of length `L = 2π/2^depth`: the standard
/// grid starting at `−π` together with the grid shifted by `L/2`. Shifted arcs may cross the
/// cut at `π`.
pub fn dyadic_arcs(depth: u32) -> Vec<(f64, f64)> {
    let n = 1usize << depth;
    let len = TAU / n as f64;
    let mut arcs = Vec::with_capacity(2 * n);
    for j in 0..n {
        let a = -PI + j as f64 * len;
        arcs.push((a, a + len));
    }
    for j in 0..n {
        let a = -PI + (j as f64 + 0.5) * len;
        arcs.push((a, a + len));
    }
    arcs
}

fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 || depth > 30 {
        return Err(Error::InvalidParameter(format!("dyadic depth must lie in 1..=30, got {depth}")));
    }
    Ok(())
}

/// `sup |h⁻¹(I)|/|I|` over the dyadic arcs of each depth `1..=depth`.
pub fn lipschitz_modulus_inverse(h: &BoundaryHomeo, depth: u32) -> Result<DyadicProfile> {
    check_depth(depth)?;
    let values = (1..=depth)
        .map(|d| {
            dyadic_arcs(d)
                .iter()
                .map(|&(a, b)| (h.alpha_inverse_lifted(b) - h.alpha_inverse_lifted(a)) / (b - a))
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(DyadicProfile { values })
}

/// `sup |h(I)|/|h(I′)|` over adjacent dyadic arcs `I, I′` of equal length, in both orders.
pub fn quasisymmetry_modulus(h: &BoundaryHomeo, depth: u32) -> Result<DyadicProfile> {
    check_depth(depth)?;
    let values = (1..=depth)
        .map(|d| {
            let arcs = dyadic_arcs(d);
            let len = arcs[0].1 - arcs[0].0;
            let image = |a: f64| h.alpha_lifted(a + len) - h.alpha_lifted(a);
            arcs.iter()
                .map(|&(a, _)| {
                    let (l, r) = (image(a), image(a + len));
                    (l / r).max(r / l)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(DyadicProfile { values })
}

/// Distribution of the pointwise dilatation `|Dφ|²/Jφ` over a polar grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilatationSummary {
    pub min: f64,
    pub median: f64,
    pub p99: f64,
    pub max: f64,
    pub points: usize,
}

impl DilatationSummary {
    /// Working estimate of the distortion constant `K`.
    pub fn k_estimate(&self) -> f64 {
        self.p99
    }
}

fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}

/// Dilatation of `φ` from central finite differences with step `fd_scale·(1 − |z|)` on the
/// polar grid `r_i = 0.95(i + ½)/grid`, `θ_j = −π + 2π(j + ½)/grid`.
pub fn dilatation_estimate(phi: &DiscQCMap, grid: usize, fd_scale: f64) -> Result<DilatationSummary> {
    if grid == 0 {
        return Err(Error::InvalidParameter("dilatation grid must be positive".into()));
    }
    if !(fd_scale > 0.0 && fd_scale < 1.0) {
        return Err(Error::InvalidParameter(format!("finite-difference scale {fd_scale} outside (0, 1)")));
    }
    let points: Vec<C64> = (0..grid)
        .flat_map(|i| {
            (0..grid).map(move |j| {
                let r = 0.95 * (i as f64 + 0.5) / grid as f64;
                C64::from_polar(r, -PI + TAU * (j as f64 + 0.5) / grid as f64)
            })
        })
        .collect();
    let ratios = points
        .par_iter()
        .map(|&z| {
            let h = fd_scale * (1.0 - z.norm());
            let i = C64::new(0.0, 1.0);
            let fx = (phi.try_eval(z + h)? - phi.try_eval(z - h)?) / (2.0 * h);
            let fy = (phi.try_eval(z + i * h)? - phi.try_eval(z - i * h)?) / (2.0 * h);
            let d = crate::differential::Differential::new(fx.re, fy.re, fx.im, fy.im);
            let jac = d.det();
            if !(jac > 0.0) {
                return Err(Error::DistortionViolation { re: z.re, im: z.im, jacobian: jac });
            }
            Ok(d.distortion())
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut sorted = ratios;
    sorted.sort_by(f64::total_cmp);
    Ok(DilatationSummary {
        min: sorted[0],
        median: nearest_rank(&sorted, 0.5),
        p99: nearest_rank(&sorted, 0.99),
        max: sorted[sorted.len() - 1],
        points: sorted.len(),
    })
}

/// `diam φ⁻¹(B)/(1 − |φ⁻¹(center)|)` for each ball, the diameter taken over the preimages of
/// points on the ball boundary.
pub fn circular_distortion_check(phi: &DiscQCMap, balls: &[HyperbolicBall]) -> Result<Vec<f64>> {
    balls
        .par_iter()
        .map(|ball| {
            let z = phi.inverse(ball.center())?;
            let pre = ball
                .boundary_points(BALL_BOUNDARY_POINTS)
                .into_iter()
                .map(|w| phi.inverse(w))
                .collect::<Result<Vec<C64>>>()?;
            let mut diam: f64 = 0.0;
            for (k, a) in pre.iter().enumerate() {
                for b in &pre[k + 1..] {
                    diam = diam.max((a - b).norm());
                }
            }
            Ok(diam / (1.0 - z.norm()))
        })
        .collect()
}

/// `sup |φ(z) − φ(ξ)|/(1 − |φ(z)|)` over `Γ(e^{iθ}, c)`, sampled at depths `1 − 2^{−k/2}` on
/// `rays + 1` equally spaced angles per depth spanning the cone from edge to edge. The lattice is
/// symmetric and nested under doubling of `rays`.
pub fn cone_image_aperture(phi: &DiscQCMap, theta: f64, aperture: f64, rays: usize) -> Result<f64> {
    let cone = Cone::at_angle(theta, aperture)?;
    if rays == 0 {
        return Err(Error::InvalidParameter("rays must be positive".into()));
    }
    let mut samples = Vec::with_capacity(CONE_DEPTH_LEVELS * (rays + 1));
    for k in 1..=CONE_DEPTH_LEVELS {
        let d = 1.0 - (-(k as f64) / 2.0).exp2();
        let half = cone.half_angle_at(d) * (1.0 - 1e-9);
        for j in 0..=rays {
            let z = C64::from_polar(d, theta + half * (2.0 * j as f64 / rays as f64 - 1.0));
            if cone.contains(z)? {
                samples.push(z);
            }
        }
    }
    let values = samples
        .par_iter()
        .map(|&z| {
            let (dist, gap) = phi.boundary_offset(z, theta)?;
            Ok(dist / gap)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}
