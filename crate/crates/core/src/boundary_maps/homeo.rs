use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result, C64};

/// Möbius automorphism `M(z) = λ(z + a)/(1 + āz)` of the disc, with the unimodular `λ` chosen
/// so that `M(−1) = −1`; its boundary angle map then fixes `±π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    a: C64,
    lambda: C64,
}

impl Moebius {
    pub fn new(a: C64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Möbius parameter must satisfy |a| < 1, got |a| = {}",
                a.norm()
            )));
        }
        let one = C64::new(1.0, 0.0);
        let lambda = (one - a.conj()) / (one - a);
        Ok(Self { a, lambda })
    }

    pub fn parameter(&self) -> C64 {
        self.a
    }

    pub fn apply(&self, z: C64) -> C64 {
        self.lambda * (z + self.a) / (C64::new(1.0, 0.0) + self.a.conj() * z)
    }

    pub fn apply_inverse(&self, w: C64) -> C64 {
        let u = w / self.lambda;
        (u - self.a) / (C64::new(1.0, 0.0) - self.a.conj() * u)
    }

    pub fn derivative(&self, z: C64) -> C64 {
        let d = C64::new(1.0, 0.0) + self.a.conj() * z;
        self.lambda * (1.0 - self.a.norm_sqr()) / (d * d)
    }

    /// `1 − |M(z)|`, computed without cancellation from `1 − |z|²`.
    pub fn gap(&self, z: C64, one_minus_z2: f64) -> f64 {
        let w = self.apply(z);
        let one_minus_w2 =
            (1.0 - self.a.norm_sqr()) * one_minus_z2 / (C64::new(1.0, 0.0) + self.a.conj() * z).norm_sqr();
        one_minus_w2 / (1.0 + w.norm())
    }
}

type AngleFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone)]
enum Kind {
    Identity,
    Sqrt,
    Power(f64),
    Moebius(Moebius),
    Custom {
        alpha: Arc<AngleFn>,
        kinks: Vec<f64>,
    },
}

/// Orientation-preserving homeomorphism of the circle written as `e^{it} ↦ e^{iα(t)}` with
/// `α: [−π, π] → [−π, π]` strictly increasing and `α(±π) = ±π`.
#[derive(Clone)]
pub struct BoundaryHomeo {
    name: String,
    kind: Kind,
}

impl fmt::Debug for BoundaryHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryHomeo").field("name", &self.name).finish()
    }
}

/// Bisection steps for numeric inversion; enough to exhaust double precision on `[−π, π]`.
const BISECTION_STEPS: usize = 80;

impl BoundaryHomeo {
    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            kind: Kind::Identity,
        }
    }

    /// `α(t) = sign(t)·√(π|t|)`.
    pub fn sqrt_map() -> Self {
        Self {
            name: "thm2_sqrt".into(),
            kind: Kind::Sqrt,
        }
    }

    /// `α(t) = sign(t)·π·(|t|/π)^γ`.
    pub fn power(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power exponent must be positive, got {gamma}"
            )));
        }
        Ok(Self {
            name: format!("power:{gamma}"),
            kind: Kind::Power(gamma),
        })
    }

    pub fn moebius(a: C64) -> Result<Self> {
        let m = Moebius::new(a)?;
        Ok(Self {
            name: if a.im == 0.0 {
                format!("moebius:{}", a.re)
            } else {
                format!("moebius:{},{}", a.re, a.im)
            },
            kind: Kind::Moebius(m),
        })
    }

    /// A homeomorphism given only by its angle function; the inverse is computed by bisection.
    /// `kinks` lists angles where `α` fails to be smooth. The map is validated on a grid.
    pub fn from_fn<F>(name: &str, alpha: F, kinks: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let h = Self {
            name: name.into(),
            kind: Kind::Custom {
                alpha: Arc::new(alpha),
                kinks,
            },
        };
        h.validate()?;
        Ok(h)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn moebius_part(&self) -> Option<Moebius> {
        match &self.kind {
            Kind::Moebius(m) => Some(*m),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, Kind::Identity)
    }

    /// `α(t)` for `t ∈ [−π, π]`.
    pub fn alpha(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Identity => t,
            Kind::Sqrt => t.signum() * (PI * t.abs()).sqrt(),
            Kind::Power(g) => t.signum() * PI * (t.abs() / PI).powf(*g),
            Kind::Moebius(m) => {
                if t.abs() >= PI {
                    t.signum() * PI
                } else {
                    m.apply(C64::from_polar(1.0, t)).arg()
                }
            }
            Kind::Custom { alpha, .. } => alpha(t),
        }
    }

    /// `α⁻¹(s)` for `s ∈ [−π, π]`.
    pub fn alpha_inverse(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Identity => s,
            Kind::Sqrt => s.signum() * s * s / PI,
            Kind::Power(g) => s.signum() * PI * (s.abs() / PI).powf(1.0 / *g),
            Kind::Moebius(m) => {
                if s.abs() >= PI {
                    s.signum() * PI
                } else {
                    m.apply_inverse(C64::from_polar(1.0, s)).arg()
                }
            }
            Kind::Custom { .. } => self.bisect_inverse(s),
        }
    }

    fn bisect_inverse(&self, s: f64) -> f64 {
        let (mut lo, mut hi) = (-PI, PI);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.alpha(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `α` extended to ℝ by `α(t + 2π) = α(t) + 2π`.
    pub fn alpha_lifted(&self, t: f64) -> f64 {
        let k = ((t + PI) / TAU).floor();
        let t0 = t - k * TAU;
        self.alpha(t0.min(PI)) + k * TAU
    }

    /// Inverse of [`Self::alpha_lifted`].
    pub fn alpha_inverse_lifted(&self, s: f64) -> f64 {
        let k = ((s + PI) / TAU).floor();
        let s0 = s - k * TAU;
        self.alpha_inverse(s0.min(PI)) + k * TAU
    }

    /// `α′(t)` where a closed form exists.
    pub fn alpha_derivative(&self, t: f64) -> Option<f64> {
        match &self.kind {
            Kind::Identity => Some(1.0),
            Kind::Sqrt => Some(0.5 * (PI / t.abs()).sqrt()),
            Kind::Power(g) => Some(g * (t.abs() / PI).powf(g - 1.0)),
            Kind::Moebius(m) => Some(m.derivative(C64::from_polar(1.0, t)).norm()),
            Kind::Custom { .. } => None,
        }
    }

    /// `(α⁻¹)′(s)` where a closed form exists.
    pub fn inverse_derivative(&self, s: f64) -> Option<f64> {
        match &self.kind {
            Kind::Identity => Some(1.0),
            Kind::Sqrt => Some(2.0 * s.abs() / PI),
            Kind::Power(g) => Some((s.abs() / PI).powf(1.0 / g - 1.0) / g),
            Kind::Moebius(m) => {
                let z = m.apply_inverse(C64::from_polar(1.0, s));
                Some(1.0 / m.derivative(z).norm())
            }
            Kind::Custom { .. } => None,
        }
    }

    /// Angles in `(−π, π)` where `α` is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            Kind::Sqrt | Kind::Power(_) => vec![0.0],
            Kind::Custom { kinks, .. } => kinks.clone(),
            _ => Vec::new(),
        }
    }

    /// Order `e` of `α` at `t`: `|α(t+δ) − α(t)| ≈ |δ|^e`.
    pub fn local_exponent(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Sqrt if t == 0.0 => 0.5,
            Kind::Power(g) if t == 0.0 => *g,
            _ => 1.0,
        }
    }

    /// Checks monotonicity on a dense grid, the fixed endpoints and `α∘α⁻¹ = id`.
    pub fn validate(&self) -> Result<()> {
        for (t, want) in [(-PI, -PI), (PI, PI)] {
            let got = self.alpha(t);
            if (got - want).abs() > 1e-12 {
                return Err(Error::NotHomeomorphism(format!(
                    "{}: α({t}) = {got}, expected {want}",
                    self.name
                )));
            }
        }
        const GRID: usize = 4096;
        let mut prev = self.alpha(-PI);
        for k in 1..=GRID {
            let t = -PI + TAU * k as f64 / GRID as f64;
            let a = self.alpha(t);
            if !(a > prev) {
                return Err(Error::NotHomeomorphism(format!(
                    "{}: α not strictly increasing near t = {t}",
                    self.name
                )));
            }
            prev = a;
        }
        for k in 0..=1024 {
            let s = -PI + TAU * k as f64 / 1024.0;
            let back = self.alpha(self.alpha_inverse(s));
            if (back - s).abs() > 1e-10 {
                return Err(Error::NotHomeomorphism(format!(
                    "{}: α(α⁻¹({s})) = {back}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Boundary point `e^{iα(t)}`.
    pub fn point(&self, t: f64) -> C64 {
        C64::from_polar(1.0, self.alpha(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sqrt_map_values() {
        let h = BoundaryHomeo::sqrt_map();
        assert_relative_eq!(h.alpha(PI / 4.0), PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(h.alpha(PI), PI, max_relative = 1e-15);
        assert_relative_eq!(h.alpha(-PI / 4.0), -PI / 2.0, max_relative = 1e-15);
        h.validate().unwrap();
    }

    #[test]
    fn power_two_value_and_relation_to_sqrt() {
        let p2 = BoundaryHomeo::power(2.0).unwrap();
        assert_relative_eq!(p2.alpha(PI / 2.0), PI / 4.0, max_relative = 1e-15);
        let s = BoundaryHomeo::sqrt_map();
        let half = BoundaryHomeo::power(0.5).unwrap();
        for k in 0..=64 {
            let t = -PI + TAU * k as f64 / 64.0;
            assert_relative_eq!(p2.alpha_inverse(t), s.alpha(t), epsilon = 1e-14);
            assert_relative_eq!(half.alpha(t), s.alpha(t), epsilon = 1e-14);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(BoundaryHomeo::power(0.0).is_err());
        assert!(BoundaryHomeo::power(-1.0).is_err());
        assert!(BoundaryHomeo::moebius(C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn round_trip_on_catalogue() {
        let maps = [
            BoundaryHomeo::identity(),
            BoundaryHomeo::sqrt_map(),
            BoundaryHomeo::power(2.0).unwrap(),
            BoundaryHomeo::power(0.5).unwrap(),
            BoundaryHomeo::moebius(C64::new(0.5, 0.0)).unwrap(),
            BoundaryHomeo::moebius(C64::new(0.3, -0.4)).unwrap(),
        ];
        for h in &maps {
            h.validate().unwrap();
            for k in 0..1024 {
                let t = -PI + TAU * (k as f64 + 0.5) / 1024.0;
                assert!((h.alpha_inverse(h.alpha(t)) - t).abs() < 1e-10, "{}", h.name());
            }
        }
    }

    #[test]
    fn complex_moebius_fixes_minus_one() {
        let m = Moebius::new(C64::new(0.3, -0.4)).unwrap();
        let w = m.apply(C64::new(-1.0, 0.0));
        assert_relative_eq!(w.re, -1.0, epsilon = 1e-14);
        assert!(w.im.abs() < 1e-14);
        let z = C64::new(0.2, 0.5);
        let back = m.apply_inverse(m.apply(z));
        assert!((back - z).norm() < 1e-14);
        assert_relative_eq!(m.derivative(C64::new(0.0, 0.0)).norm(), 1.0 - 0.25, max_relative = 1e-14);
    }

    #[test]
    fn bisection_inverse_matches_closed_form() {
        let h = BoundaryHomeo::from_fn("sqrt_numeric", |t: f64| t.signum() * (PI * t.abs()).sqrt(), vec![0.0])
            .unwrap();
        let exact = BoundaryHomeo::sqrt_map();
        for k in 0..=200 {
            let s = -PI + TAU * k as f64 / 200.0;
            assert!((h.alpha_inverse(s) - exact.alpha_inverse(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn from_fn_rejects_non_monotone() {
        let bad = BoundaryHomeo::from_fn("fold", |t: f64| t * t.cos().abs().max(0.1), vec![]);
        assert!(bad.is_err());
        let moved = BoundaryHomeo::from_fn("shift", |t: f64| 0.9 * t, vec![]);
        assert!(moved.is_err());
    }

    #[test]
    fn lifting_is_periodic() {
        let h = BoundaryHomeo::sqrt_map();
        for t in [-5.0, -1.0, 0.3, 2.0, 7.0, 12.0] {
            assert_relative_eq!(h.alpha_lifted(t + TAU), h.alpha_lifted(t) + TAU, epsilon = 1e-12);
            assert_relative_eq!(h.alpha_inverse_lifted(h.alpha_lifted(t)), t, epsilon = 1e-12);
        }
    }

    #[test]
    fn inverse_derivative_closed_forms() {
        let h = BoundaryHomeo::sqrt_map();
        let s = 1.3;
        let fd = (h.alpha_inverse(s + 1e-6) - h.alpha_inverse(s - 1e-6)) / 2e-6;
        assert_relative_eq!(h.inverse_derivative(s).unwrap(), fd, max_relative = 1e-8);
        let m = BoundaryHomeo::moebius(C64::new(0.5, 0.0)).unwrap();
        let fd = (m.alpha_inverse(s + 1e-6) - m.alpha_inverse(s - 1e-6)) / 2e-6;
        assert_relative_eq!(m.inverse_derivative(s).unwrap(), fd, max_relative = 1e-8);
        let fd = (m.alpha(s + 1e-6) - m.alpha(s - 1e-6)) / 2e-6;
        assert_relative_eq!(m.alpha_derivative(s).unwrap(), fd, max_relative = 1e-8);
    }
}
