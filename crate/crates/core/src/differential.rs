//! Real 2×2 differentials of planar maps.

use crate::C64;

/// The differential of a planar map at a point, as the real matrix
/// `[[∂u/∂x, ∂u/∂y], [∂v/∂x, ∂v/∂y]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Differential {
    pub ux: f64,
    pub uy: f64,
    pub vx: f64,
    pub vy: f64,
}

impl Differential {
    pub fn new(ux: f64, uy: f64, vx: f64, vy: f64) -> Self {
        Self { ux, uy, vx, vy }
    }

    /// Multiplication by a complex number, i.e. the differential of a holomorphic map.
    pub fn complex(c: C64) -> Self {
        Self::new(c.re, -c.im, c.im, c.re)
    }

    pub fn identity() -> Self {
        Self::complex(C64::new(1.0, 0.0))
    }

    /// Matrix product `self ∘ rhs`.
    pub fn compose(&self, rhs: &Differential) -> Differential {
        Differential::new(
            self.ux * rhs.ux + self.uy * rhs.vx,
            self.ux * rhs.uy + self.uy * rhs.vy,
            self.vx * rhs.ux + self.vy * rhs.vx,
            self.vx * rhs.uy + self.vy * rhs.vy,
        )
    }

    /// Left multiplication by a complex scalar (chain rule with a holomorphic outer map).
    pub fn scale_complex(&self, c: C64) -> Differential {
        Differential::complex(c).compose(self)
    }

    /// `∂f = (f_x − i f_y)/2`.
    pub fn dz(&self) -> C64 {
        C64::new(self.ux + self.vy, self.vx - self.uy) * 0.5
    }

    /// `∂̄f = (f_x + i f_y)/2`.
    pub fn dzbar(&self) -> C64 {
        C64::new(self.ux - self.vy, self.vx + self.uy) * 0.5
    }

    /// Jacobian determinant.
    pub fn det(&self) -> f64 {
        self.ux * self.vy - self.uy * self.vx
    }

    /// Operator norm `|f_z| + |f_z̄|`.
    pub fn norm(&self) -> f64 {
        self.dz().norm() + self.dzbar().norm()
    }

    /// `|Df|² / Jf`; infinite when the Jacobian is not positive.
    pub fn distortion(&self) -> f64 {
        let j = self.det();
        if j > 0.0 {
            self.norm().powi(2) / j
        } else {
            f64::INFINITY
        }
    }

    /// Apply to a tangent vector.
    pub fn apply(&self, v: C64) -> C64 {
        C64::new(self.ux * v.re + self.uy * v.im, self.vx * v.re + self.vy * v.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn holomorphic_differential() {
        let c = C64::new(0.3, -1.2);
        let d = Differential::complex(c);
        assert_relative_eq!(d.det(), c.norm_sqr(), max_relative = 1e-15);
        assert_relative_eq!(d.norm(), c.norm(), max_relative = 1e-15);
        assert_relative_eq!(d.distortion(), 1.0, max_relative = 1e-14);
        assert!(d.dzbar().norm() < 1e-16);
    }

    #[test]
    fn half_plane_squeeze() {
        let d = Differential::new(1.0, 0.0, 0.0, 0.5);
        assert_relative_eq!(d.distortion(), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn composition_matches_matrix_product() {
        let a = Differential::new(1.0, 2.0, 3.0, 4.0);
        let b = Differential::new(0.5, -1.0, 2.0, 0.0);
        let v = C64::new(0.7, -0.2);
        let lhs = a.compose(&b).apply(v);
        let rhs = a.apply(b.apply(v));
        assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-14);
        assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-14);
    }
}
