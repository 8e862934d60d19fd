//! Quasiconformal selfmaps of the disc.
//!
//! A [`DiscQCMap`] is either an exact conformal control (identity or Möbius) or the
//! Beurling–Ahlfors extension of a circle homeomorphism. The extension is built in the upper
//! half-plane: the boundary correspondence `x = tan(t/2)` of the Cayley map
//! `ζ = i(1 − z)/(1 + z)` turns `α` into an increasing line map `h̃`, which is extended by
//!
//! ```text
//! u(x, y) = (1/2y) ∫_{x−y}^{x+y} h̃,     v(x, y) = (1/2y) (∫_x^{x+y} h̃ − ∫_{x−y}^x h̃),
//! ```
//!
//! and the result is conjugated back to the disc. Both averages are evaluated as integrals of
//! differences `h̃(x ± t) − h̃(x)` over `[0, y]` so that nothing cancels catastrophically close
//! to the boundary, and the differential is available in closed form from the same quantities.

use super::homeo::{BoundaryHomeo, Moebius};
use crate::differential::Differential;
use crate::quadrature::{integrate, QuadSettings, Tolerance};
use crate::{Error, Result, C64};

const I: C64 = C64::new(0.0, 1.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Cayley map from the disc to the upper half-plane, sending `1 ↦ 0` and `−1 ↦ ∞`.
pub fn disc_to_half_plane(z: C64) -> C64 {
    I * (ONE - z) / (ONE + z)
}

/// Inverse Cayley map.
pub fn half_plane_to_disc(w: C64) -> C64 {
    (I - w) / (I + w)
}

/// `1 − |z|²` evaluated as `(1 − |z|)(1 + |z|)`.
pub(crate) fn one_minus_norm_sqr(z: C64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

#[derive(Clone, Debug)]
struct LineExtension {
    homeo: BoundaryHomeo,
    /// Points of the real line where `h̃` is not smooth.
    kinks: Vec<f64>,
}

/// Inner quadrature settings of the averaged extension.
const BA_SETTINGS: QuadSettings = QuadSettings {
    tol: Tolerance { abs: 0.0, rel: 1e-13 },
    max_intervals: 400,
};

impl LineExtension {
    fn new(homeo: BoundaryHomeo) -> Self {
        let kinks = homeo
            .kinks()
            .into_iter()
            .filter(|t| t.abs() < std::f64::consts::PI)
            .map(|t| (0.5 * t).tan())
            .collect();
        Self { homeo, kinks }
    }

    /// `h̃(x) = tan(α(2 arctan x)/2)`.
    fn line_map(&self, x: f64) -> f64 {
        (0.5 * self.homeo.alpha(2.0 * x.atan())).tan()
    }

    fn line_map_inverse(&self, s: f64) -> f64 {
        (0.5 * self.homeo.alpha_inverse(2.0 * s.atan())).tan()
    }

    /// `F(x + iy)` and its differential.
    fn eval(&self, x: f64, y: f64) -> Result<(C64, Differential)> {
        let h0 = self.line_map(x);
        let integrand = |t: f64| {
            let p = self.line_map(x + t);
            let m = self.line_map(x - t);
            C64::new(p + m - 2.0 * h0, p - m)
        };
        let mut pts = vec![0.0, y];
        for &k in &self.kinks {
            let d = (k - x).abs();
            if d > 0.0 && d < y {
                pts.push(d);
            }
        }
        pts.sort_by(f64::total_cmp);
        // The u-integrand is a second difference of h̃, so its integral can be far below the
        // size of the first differences; accuracy is measured against those (the size of the
        // image), with a floor at the rounding level of h̃ on [x − y, x + y]. Far out on the line
        // h̃ comes from tan near its pole, whose relative rounding error grows like |x|.
        let a = self.line_map(x + y);
        let b = self.line_map(x - y);
        let spread = (a - h0).abs() + (b - h0).abs();
        let size = h0.abs().max(a.abs()).max(b.abs());
        let settings = QuadSettings {
            tol: Tolerance {
                abs: (BA_SETTINGS.tol.rel * spread).max(100.0 * f64::EPSILON * size * size.max(1.0)) * y,
                ..BA_SETTINGS.tol
            },
            ..BA_SETTINGS
        };
        let q = integrate(integrand, &pts, settings);
        // The target sits well below what callers need; near the cusp of a kink the interval
        // budget can run out just short of it, and such results are kept.
        let slack = 100.0 * settings.tol.abs.max(settings.tol.rel * q.value.norm());
        if !q.converged && !(q.error <= slack) {
            return Err(Error::Quadrature {
                a: x - y,
                b: x + y,
                estimate: q.value.norm(),
                error: q.error,
            });
        }
        let qu = q.value.re / (2.0 * y);
        let v = q.value.im / (2.0 * y);
        let u = h0 + qu;
        let ux = (a - b) / (2.0 * y);
        let uy = (a + b - 2.0 * h0) / (2.0 * y) - qu / y;
        let vx = (a + b - 2.0 * h0) / (2.0 * y);
        let vy = (a - b) / (2.0 * y) - v / y;
        Ok((C64::new(u, v), Differential::new(ux, uy, vx, vy)))
    }

    /// Solves `F(ζ) = ω` by bracketing in `y` on the vertical line over `h̃⁻¹(Re ω)` followed
    /// by damped Newton iteration.
    fn invert(&self, omega: C64) -> Result<C64> {
        let fail = |res: f64| Error::RootFinding {
            re: omega.re,
            im: omega.im,
            residual: res,
        };
        let scale = omega.im;
        let x0 = self.line_map_inverse(omega.re);
        let v_at = |y: f64| self.eval(x0, y).map(|(f, _)| f.im);
        let (mut lo, mut hi) = (scale, scale);
        let mut guard = 0;
        while v_at(lo)? > scale {
            lo *= 0.25;
            guard += 1;
            if guard > 200 {
                return Err(fail(f64::NAN));
            }
        }
        while v_at(hi)? < scale {
            hi *= 4.0;
            guard += 1;
            if guard > 200 {
                return Err(fail(f64::NAN));
            }
        }
        while hi / lo > 1.0 + 1e-3 {
            let mid = (lo * hi).sqrt();
            if v_at(mid)? < scale {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut zeta = C64::new(x0, (lo * hi).sqrt());
        let residual = |f: C64| (omega - f).norm() / scale;
        let (mut f, mut df) = self.eval(zeta.re, zeta.im)?;
        let mut res = residual(f);
        for _ in 0..100 {
            if res < 1e-12 {
                return Ok(zeta);
            }
            let det = df.det();
            let r = omega - f;
            let step = C64::new(
                (df.vy * r.re - df.uy * r.im) / det,
                (-df.vx * r.re + df.ux * r.im) / det,
            );
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let cand = zeta + step * lambda;
                if cand.im > 0.0 {
                    let (fc, dfc) = self.eval(cand.re, cand.im)?;
                    let rc = residual(fc);
                    if rc < res {
                        zeta = cand;
                        f = fc;
                        df = dfc;
                        res = rc;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if res < 1e-9 {
            Ok(zeta)
        } else {
            Err(fail(res))
        }
    }
}

#[derive(Clone, Debug)]
enum Interior {
    Identity,
    Moebius(Moebius),
    BeurlingAhlfors(LineExtension),
}

/// A quasiconformal selfmap `φ` of the unit disc together with its boundary homeomorphism.
#[derive(Clone, Debug)]
pub struct DiscQCMap {
    boundary: BoundaryHomeo,
    interior: Interior,
}

impl DiscQCMap {
    /// The identity of the disc.
    pub fn identity() -> Self {
        Self {
            boundary: BoundaryHomeo::identity(),
            interior: Interior::Identity,
        }
    }

    /// An exact Möbius automorphism (conformal control).
    pub fn moebius(a: C64) -> Result<Self> {
        let boundary = BoundaryHomeo::moebius(a)?;
        let m = boundary.moebius_part().expect("moebius homeo");
        Ok(Self {
            boundary,
            interior: Interior::Moebius(m),
        })
    }

    /// Beurling–Ahlfors extension of `h` through the half-plane.
    pub fn beurling_ahlfors(h: BoundaryHomeo) -> Result<Self> {
        h.validate()?;
        Ok(Self {
            interior: Interior::BeurlingAhlfors(LineExtension::new(h.clone())),
            boundary: h,
        })
    }

    pub fn boundary(&self) -> &BoundaryHomeo {
        &self.boundary
    }

    pub fn name(&self) -> String {
        match self.interior {
            Interior::BeurlingAhlfors(_) => format!("ba({})", self.boundary.name()),
            _ => self.boundary.name().to_string(),
        }
    }

    pub fn is_conformal(&self) -> bool {
        !matches!(self.interior, Interior::BeurlingAhlfors(_))
    }

    /// Boundary value `φ(e^{it}) = e^{iα(t)}`.
    pub fn boundary_point(&self, t: f64) -> C64 {
        self.boundary.point(t)
    }

    /// `φ(z)` together with `1 − |φ(z)|`, both accurate near the boundary.
    pub fn eval_with_gap(&self, z: C64) -> Result<(C64, f64)> {
        if !(z.norm() < 1.0) {
            return Err(Error::outside(z));
        }
        let gz = one_minus_norm_sqr(z);
        match &self.interior {
            Interior::Identity => Ok((z, gz / (1.0 + z.norm()))),
            Interior::Moebius(m) => Ok((m.apply(z), m.gap(z, gz))),
            Interior::BeurlingAhlfors(ext) => {
                let zeta = half_plane_coords(z, gz);
                let (f, _) = ext.eval(zeta.re, zeta.im)?;
                Ok(back_to_disc(f))
            }
        }
    }

    pub fn try_eval(&self, z: C64) -> Result<C64> {
        self.eval_with_gap(z).map(|(w, _)| w)
    }

    /// `φ(z)`; panics outside the disc or if the extension quadrature fails.
    pub fn eval(&self, z: C64) -> C64 {
        self.try_eval(z)
            .unwrap_or_else(|e| panic!("{}: cannot evaluate at {z}: {e}", self.name()))
    }

    /// `|φ(z) − φ(e^{it})|` and `1 − |φ(z)|`, both without cancellation when `z` is close to
    /// `e^{it}`.
    pub fn boundary_offset(&self, z: C64, t: f64) -> Result<(f64, f64)> {
        if !(z.norm() < 1.0) {
            return Err(Error::outside(z));
        }
        let gz = one_minus_norm_sqr(z);
        let xi = C64::from_polar(1.0, t);
        match &self.interior {
            Interior::Identity => Ok(((z - xi).norm(), gz / (1.0 + z.norm()))),
            Interior::Moebius(m) => {
                // M(z) − M(ξ) = λ(1 − |a|²)(z − ξ)/((1 + āz)(1 + āξ))
                let a = m.parameter();
                let d = (1.0 - a.norm_sqr()) * (z - xi).norm()
                    / ((ONE + a.conj() * z).norm() * (ONE + a.conj() * xi).norm());
                Ok((d, m.gap(z, gz)))
            }
            Interior::BeurlingAhlfors(ext) => {
                let zeta = half_plane_coords(z, gz);
                let (f, _) = ext.eval(zeta.re, zeta.im)?;
                let (w, gap) = back_to_disc(f);
                let x = ext.line_map((0.5 * t).tan());
                let d = if x.is_finite() && (0.5 * t).cos().abs() > 1e-8 {
                    // C⁻¹(F) − C⁻¹(X) = 2i(X − F)/((i + F)(i + X))
                    2.0 * (f - x).norm() / ((I + f).norm() * (I + x).norm())
                } else {
                    (w - self.boundary_point(t)).norm()
                };
                Ok((d, gap))
            }
        }
    }

    /// `φ(z)` and its differential.
    pub fn try_eval_differential(&self, z: C64) -> Result<(C64, Differential)> {
        if !(z.norm() < 1.0) {
            return Err(Error::outside(z));
        }
        match &self.interior {
            Interior::Identity => Ok((z, Differential::identity())),
            Interior::Moebius(m) => Ok((m.apply(z), Differential::complex(m.derivative(z)))),
            Interior::BeurlingAhlfors(ext) => {
                let zeta = half_plane_coords(z, one_minus_norm_sqr(z));
                let (f, df) = ext.eval(zeta.re, zeta.im)?;
                let dc = -2.0 * I / ((ONE + z) * (ONE + z));
                let dcinv = -2.0 * I / ((I + f) * (I + f));
                let d = Differential::complex(dcinv)
                    .compose(&df)
                    .compose(&Differential::complex(dc));
                Ok((back_to_disc(f).0, d))
            }
        }
    }

    pub fn differential(&self, z: C64) -> Differential {
        self.try_eval_differential(z)
            .unwrap_or_else(|e| panic!("{}: no differential at {z}: {e}", self.name()))
            .1
    }

    /// `φ⁻¹(w)` for `|w| < 1`.
    pub fn inverse(&self, w: C64) -> Result<C64> {
        if !(w.norm() < 1.0) {
            return Err(Error::outside(w));
        }
        match &self.interior {
            Interior::Identity => Ok(w),
            Interior::Moebius(m) => Ok(m.apply_inverse(w)),
            Interior::BeurlingAhlfors(ext) => {
                let omega = half_plane_coords(w, one_minus_norm_sqr(w));
                let zeta = ext.invert(omega)?;
                Ok(half_plane_to_disc(zeta))
            }
        }
    }
}

fn half_plane_coords(z: C64, one_minus_z2: f64) -> C64 {
    let zeta = disc_to_half_plane(z);
    C64::new(zeta.re, one_minus_z2 / (ONE + z).norm_sqr())
}

fn back_to_disc(f: C64) -> (C64, f64) {
    let mut w = half_plane_to_disc(f);
    let one_minus_w2 = 4.0 * f.im / (I + f).norm_sqr();
    let r = w.norm();
    if r >= 1.0 {
        // Rounding pushed the point onto the circle; pull it back by one ulp.
        w *= (1.0 - f64::EPSILON / 2.0) / r;
    }
    (w, one_minus_w2 / (1.0 + w.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn cayley_round_trip_and_boundary_correspondence() {
        let z = C64::new(0.3, -0.6);
        let back = half_plane_to_disc(disc_to_half_plane(z));
        assert!((back - z).norm() < 1e-15);
        for t in [-2.5, -0.7, 0.0, 0.4, 3.0] {
            let x = disc_to_half_plane(C64::from_polar(1.0, t));
            assert_relative_eq!(x.re, (0.5 * t).tan(), epsilon = 1e-12);
            assert!(x.im.abs() < 1e-12);
        }
    }

    #[test]
    fn identity_line_extension_is_vertical_squeeze() {
        let ext = LineExtension::new(BoundaryHomeo::identity());
        for (x, y) in [(0.0, 1.0), (0.7, 0.01), (-3.0, 2.5), (1e-3, 1e-7)] {
            let (f, d) = ext.eval(x, y).unwrap();
            assert_relative_eq!(f.re, x, epsilon = 1e-12 * (1.0 + x.abs()));
            assert_relative_eq!(f.im, 0.5 * y, max_relative = 1e-10);
            assert_relative_eq!(d.ux, 1.0, max_relative = 1e-9);
            assert_relative_eq!(d.vy, 0.5, max_relative = 1e-9);
            assert!(d.uy.abs() < 1e-8 && d.vx.abs() < 1e-8);
        }
    }

    #[test]
    fn extension_maps_into_disc_and_is_orientation_preserving() {
        let phi = DiscQCMap::beurling_ahlfors(BoundaryHomeo::sqrt_map()).unwrap();
        for k in 0..16 {
            for r in [0.0, 0.3, 0.9, 0.999] {
                let z = C64::from_polar(r, -PI + TAU * (k as f64 + 0.25) / 16.0);
                let (w, d) = phi.try_eval_differential(z).unwrap();
                assert!(w.norm() < 1.0);
                assert!(d.det() > 0.0);
            }
        }
    }

    #[test]
    fn closed_form_differential_matches_finite_differences() {
        for phi in [
            DiscQCMap::beurling_ahlfors(BoundaryHomeo::sqrt_map()).unwrap(),
            DiscQCMap::beurling_ahlfors(BoundaryHomeo::power(2.0).unwrap()).unwrap(),
            DiscQCMap::beurling_ahlfors(BoundaryHomeo::moebius(C64::new(0.2, 0.3)).unwrap()).unwrap(),
        ] {
            for z in [C64::new(0.3, 0.2), C64::new(-0.5, 0.4), C64::new(0.9, -0.05)] {
                let h = 1e-6 * (1.0 - z.norm());
                let fx = (phi.eval(z + h) - phi.eval(z - h)) / (2.0 * h);
                let fy = (phi.eval(z + I * h) - phi.eval(z - I * h)) / (2.0 * h);
                let d = phi.differential(z);
                let scale = d.norm();
                assert!((fx.re - d.ux).abs() < 1e-5 * scale, "{} {z}", phi.name());
                assert!((fx.im - d.vx).abs() < 1e-5 * scale);
                assert!((fy.re - d.uy).abs() < 1e-5 * scale);
                assert!((fy.im - d.vy).abs() < 1e-5 * scale);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let phi = DiscQCMap::beurling_ahlfors(BoundaryHomeo::power(2.0).unwrap()).unwrap();
        for z in [
            C64::new(0.0, 0.0),
            C64::new(0.5, 0.5),
            C64::new(0.99, 0.0),
            C64::new(-0.9, 0.1),
            C64::new(0.0, -0.999),
        ] {
            let w = phi.eval(z);
            let back = phi.inverse(w).unwrap();
            assert!((back - z).norm() < 1e-9 * (1.0 + 1.0 / (1.0 - z.norm())), "{z} -> {back}");
        }
    }

    #[test]
    fn moebius_control_is_exact() {
        let a = C64::new(0.5, 0.0);
        let phi = DiscQCMap::moebius(a).unwrap();
        let w = phi.eval(C64::new(0.0, 0.0));
        assert_relative_eq!(w.re, 0.5);
        let (_, gap) = phi.eval_with_gap(C64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(gap, 0.5, max_relative = 1e-15);
        assert_relative_eq!(phi.differential(C64::new(0.0, 0.0)).det(), 0.75f64.powi(2), max_relative = 1e-14);
    }

    #[test]
    fn gap_is_accurate_near_the_boundary() {
        let phi = DiscQCMap::beurling_ahlfors(BoundaryHomeo::identity()).unwrap();
        // In the half-plane the extension is (x, y) ↦ (x, y/2); at ζ = iy we get 1 − |w| from y/2.
        let y: f64 = 1e-9;
        let z = half_plane_to_disc(C64::new(0.0, y));
        let (_, gap) = phi.eval_with_gap(z).unwrap();
        let w_exact = (1.0 - 0.5 * y) / (1.0 + 0.5 * y);
        assert_relative_eq!(gap, 1.0 - w_exact, max_relative = 1e-6);
    }

    #[test]
    fn boundary_offset_matches_direct_difference_away_from_the_boundary() {
        let maps = [
            DiscQCMap::identity(),
            DiscQCMap::moebius(C64::new(0.3, -0.4)).unwrap(),
            DiscQCMap::beurling_ahlfors(BoundaryHomeo::sqrt_map()).unwrap(),
            DiscQCMap::beurling_ahlfors(BoundaryHomeo::power(2.0).unwrap()).unwrap(),
        ];
        for phi in &maps {
            for (z, t) in [(C64::from_polar(0.9, 0.3), 0.25), (C64::from_polar(0.5, -2.0), -2.2), (C64::new(-0.6, 0.1), PI)] {
                let (w, gap) = phi.eval_with_gap(z).unwrap();
                let (d, g) = phi.boundary_offset(z, t).unwrap();
                assert_relative_eq!(d, (w - phi.boundary_point(t)).norm(), max_relative = 1e-9);
                assert_relative_eq!(g, gap, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn boundary_offset_keeps_precision_at_depth() {
        // Identity boundary: the extension is (x, y) ↦ (x, y/2), so on the radius to 1 the image
        // is C⁻¹(iy/2) and |w − 1| = 2·(y/2)/(1 + y/2) exactly.
        let phi = DiscQCMap::beurling_ahlfors(BoundaryHomeo::identity()).unwrap();
        let y: f64 = 1e-12;
        let z = half_plane_to_disc(C64::new(0.0, y));
        let (d, _) = phi.boundary_offset(z, 0.0).unwrap();
        assert_relative_eq!(d, y / (1.0 + 0.5 * y), max_relative = 1e-6);
    }
}
