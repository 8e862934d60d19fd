//! Geometric primitives of the unit disc: cones, boundary arcs, Carleson squares and
//! hyperbolic balls.

use std::f64::consts::{PI, TAU};

use crate::quadrature::wrap_angle;
use crate::{Error, Result, C64};

fn check_in_disc(z: C64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::outside(z))
    }
}

/// Non-tangential approach region `Γ(ξ) = {z ∈ 𝔻 : |z − ξ| < c(1 − |z|)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    vertex: C64,
    aperture: f64,
}

impl Cone {
    pub fn new(vertex: C64, aperture: f64) -> Result<Self> {
        if !(aperture > 1.0 && aperture.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cone aperture must exceed 1, got {aperture}"
            )));
        }
        if (vertex.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "cone vertex must lie on the unit circle, |ξ| = {}",
                vertex.norm()
            )));
        }
        Ok(Self { vertex, aperture })
    }

    /// Cone with vertex `e^{iθ}`.
    pub fn at_angle(theta: f64, aperture: f64) -> Result<Self> {
        Self::new(C64::from_polar(1.0, theta), aperture)
    }

    pub fn vertex(&self) -> C64 {
        self.vertex
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn contains(&self, z: C64) -> Result<bool> {
        check_in_disc(z)?;
        Ok((z - self.vertex).norm() < self.aperture * (1.0 - z.norm()))
    }

    /// Largest `|arg(z/ξ)|` of cone points of modulus `d`.
    pub fn half_angle_at(&self, d: f64) -> f64 {
        // |d e^{iφ} − 1|² < c²(1−d)²  ⇔  4d sin²(φ/2) < (c² − 1)(1 − d)²
        let s = (1.0 - d) * ((self.aperture * self.aperture - 1.0) / (4.0 * d)).sqrt();
        if s >= 1.0 {
            PI
        } else {
            2.0 * s.asin()
        }
    }

    /// Points of the cone on the circles `|z| = d` for each depth, `rays_per_depth` per circle.
    ///
    /// The angular lattice at each depth is nested under doubling of `rays_per_depth`
    /// (with one ray the radial point is returned), so suprema over the samples are
    /// nondecreasing in the budget.
    pub fn sample(&self, depths: &[f64], rays_per_depth: usize) -> Result<Vec<C64>> {
        if depths.is_empty() {
            return Err(Error::InvalidParameter("empty depth list".into()));
        }
        if rays_per_depth == 0 {
            return Err(Error::InvalidParameter("rays_per_depth must be positive".into()));
        }
        if let Some(d) = depths.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
            return Err(Error::InvalidParameter(format!("depth {d} outside (0, 1)")));
        }
        if depths.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("depths must be sorted increasing".into()));
        }
        let base = self.vertex.arg();
        let mut out = Vec::with_capacity(depths.len() * rays_per_depth);
        for &d in depths {
            let half = self.half_angle_at(d) * (1.0 - 1e-6);
            for j in 0..rays_per_depth {
                let offset = if rays_per_depth == 1 {
                    0.0
                } else {
                    half * (2.0 * j as f64 / rays_per_depth as f64 - 1.0)
                };
                let z = C64::from_polar(d, base + offset);
                if self.contains(z)? {
                    out.push(z);
                }
            }
        }
        Ok(out)
    }
}

/// Boundary arc `{e^{iθ} : |θ − center| ≤ half_width}` with the centre normalised to `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    center: f64,
    half_width: f64,
}

impl Arc {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= PI) {
            return Err(Error::InvalidParameter(format!(
                "arc half-width must lie in (0, π], got {half_width}"
            )));
        }
        Ok(Self {
            center: wrap_angle(center),
            half_width,
        })
    }

    /// Arc `[a, b]` given by endpoints with `a < b ≤ a + 2π`.
    pub fn from_endpoints(a: f64, b: f64) -> Result<Self> {
        Self::new(0.5 * (a + b), 0.5 * (b - a))
    }

    pub fn full_circle() -> Self {
        Self {
            center: 0.0,
            half_width: PI,
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Arc length `|I|`.
    pub fn length(&self) -> f64 {
        2.0 * self.half_width
    }

    /// Endpoints on the real line, `start < end`, with `start` not wrapped.
    pub fn endpoints(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        wrap_angle(theta - self.center).abs() <= self.half_width
    }
}

/// The arc `I_z` of length `1 − |z|` centred at `arg z`.
pub fn boundary_arc_of(z: C64) -> Result<Arc> {
    check_in_disc(z)?;
    if z == C64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter("I_z is undefined at z = 0".into()));
    }
    Arc::new(z.arg(), 0.5 * (1.0 - z.norm()))
}

/// Carleson box `S(I) = {re^{iθ} : e^{iθ} ∈ I, 1 − |I|/2π ≤ r < 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonSquare {
    arc: Arc,
}

impl CarlesonSquare {
    pub fn new(arc: Arc) -> Self {
        Self { arc }
    }

    pub fn arc(&self) -> Arc {
        self.arc
    }

    pub fn inner_radius(&self) -> f64 {
        1.0 - self.arc.length() / TAU
    }

    /// Side length `l(S) = |I|`.
    pub fn side(&self) -> f64 {
        self.arc.length()
    }

    pub fn area(&self) -> f64 {
        let r0 = self.inner_radius();
        self.arc.length() * (1.0 - r0 * r0) / 2.0
    }

    pub fn contains(&self, z: C64) -> bool {
        let r = z.norm();
        if r >= 1.0 || r < self.inner_radius() {
            return false;
        }
        // The origin belongs to S(I) only when the arc is the whole circle.
        r == 0.0 || self.arc.contains_angle(z.arg())
    }
}

/// Euclidean ball `B(z, c(1 − |z|))` with `0 < c < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicBall {
    center: C64,
    ratio: f64,
}

impl HyperbolicBall {
    pub fn new(center: C64, ratio: f64) -> Result<Self> {
        check_in_disc(center)?;
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ball ratio must lie in (0, 1), got {ratio}"
            )));
        }
        Ok(Self { center, ratio })
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn radius(&self) -> f64 {
        self.ratio * (1.0 - self.center.norm())
    }

    pub fn area(&self) -> f64 {
        PI * self.radius().powi(2)
    }

    pub fn contains(&self, w: C64) -> bool {
        (w - self.center).norm() < self.radius()
    }

    /// `sup{|w| : w ∈ B}`.
    pub fn outer_modulus(&self) -> f64 {
        self.center.norm() + self.radius()
    }

    /// `n` equally spaced points on the boundary circle.
    pub fn boundary_points(&self, n: usize) -> Vec<C64> {
        (0..n)
            .map(|k| self.center + C64::from_polar(self.radius(), TAU * k as f64 / n as f64))
            .collect()
    }
}
