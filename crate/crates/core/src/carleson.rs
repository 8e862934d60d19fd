//! Pushforward measures under quasiconformal selfmaps and Carleson-type testers.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::boundary_maps::{lipschitz_modulus_inverse, BoundaryHomeo, DiscQCMap, DyadicProfile};
use crate::classify::{self, Classification};
use crate::disc_geometry::{Arc, CarlesonSquare, HyperbolicBall};
use crate::function_spaces::{compose, hardy_kernel};
use crate::functionals::{boundary_lp_norm, hardy_norm};
use crate::quadrature::{integrate_periodic, AngularMesh, QuadSettings};
use crate::sampling::{jittered_box, stream};
use crate::{Error, Result, C64, DEFAULT_BALL_RATIO};

/// `μ(E) = m(φ⁻¹(E))/2π` for boundary arcs, computed from the endpoints of `α⁻¹`.
#[derive(Debug, Clone)]
pub struct BoundaryPushforward {
    h: BoundaryHomeo,
}

impl BoundaryPushforward {
    pub fn new(h: BoundaryHomeo) -> Self {
        Self { h }
    }

    pub fn of_map(phi: &DiscQCMap) -> Self {
        Self::new(phi.boundary().clone())
    }

    /// Mass of the arc between the lifted angles `a < b` (with `b − a ≤ 2π`).
    pub fn measure_between(&self, a: f64, b: f64) -> f64 {
        (self.h.alpha_inverse_lifted(b) - self.h.alpha_inverse_lifted(a)) / TAU
    }

    pub fn measure(&self, arc: &Arc) -> f64 {
        let (a, b) = arc.endpoints();
        self.measure_between(a, b)
    }

    pub fn total(&self) -> f64 {
        self.measure_between(-PI, PI)
    }
}

/// `sup μ(I)/(|I|/2π)` over the dyadic arcs at each depth `1..=depth`.
///
/// This is the same quotient, over the same family, as
/// [`lipschitz_modulus_inverse`](crate::boundary_maps::lipschitz_modulus_inverse).
pub fn boundary_carleson_constant(mu: &BoundaryPushforward, depth: u32) -> Result<DyadicProfile> {
    lipschitz_modulus_inverse(&mu.h, depth)
}

/// Density of the base measure pushed forward by `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseDensity {
    Lebesgue,
    /// `|Dφ(z)|ᵖ (1 − |z|)^{p−1}`.
    Weighted { p: f64 },
}

/// Monte Carlo pushforward `μ(R) = ∫_{φ⁻¹(R)} density dm` for hyperbolic balls `R`.
#[derive(Debug, Clone)]
pub struct DiscPushforward {
    phi: DiscQCMap,
    density: BaseDensity,
    seed: u64,
    /// Cells per side of the jittered grid over the preimage bounding box.
    pub side: usize,
}

/// Mass with a standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Points of the ball boundary whose preimages outline `φ⁻¹(B)`.
const OUTLINE_POINTS: usize = 32;

impl DiscPushforward {
    pub fn new(phi: DiscQCMap, density: BaseDensity, seed: u64) -> Self {
        Self {
            phi,
            density,
            seed,
            side: 24,
        }
    }

    pub fn phi(&self) -> &DiscQCMap {
        &self.phi
    }

    pub fn density(&self) -> BaseDensity {
        self.density
    }

    /// Bounding box of `φ⁻¹(R)` from the preimages of points outlining `R`, widened by a margin
    /// for the curvature between outline points.
    fn preimage_box<R: Region>(&self, region: &R) -> Result<(C64, C64)> {
        let pre = region.outline_preimage(&self.phi)?;
        let (mut lo, mut hi) = (pre[0], pre[0]);
        for z in &pre {
            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let margin = 0.15 * (hi.re - lo.re).max(hi.im - lo.im);
        Ok((lo - C64::new(margin, margin), hi + C64::new(margin, margin)))
    }

    fn weight<R: Region>(&self, z: C64, region: &R) -> Result<f64> {
        if !(z.norm() < 1.0) {
            return Ok(0.0);
        }
        match self.density {
            BaseDensity::Lebesgue => {
                let w = self.phi.try_eval(z)?;
                Ok(if region.contains(w) { 1.0 } else { 0.0 })
            }
            BaseDensity::Weighted { p } => {
                let (w, d) = self.phi.try_eval_differential(z)?;
                Ok(if region.contains(w) {
                    d.norm().powf(p) * (1.0 - z.norm()).powf(p - 1.0)
                } else {
                    0.0
                })
            }
        }
    }

    fn region_mass<R: Region>(&self, region: &R, index: u64) -> Result<MassEstimate> {
        let (lo, hi) = self.preimage_box(region)?;
        let mut rng = stream(self.seed, index);
        let cells = jittered_box(lo, hi, self.side, 2, &mut rng);
        let cell_area = (hi.re - lo.re) * (hi.im - lo.im) / (self.side * self.side) as f64;
        let mut value = 0.0;
        let mut var = 0.0;
        for pts in &cells {
            let a = self.weight(pts[0], region)?;
            let b = self.weight(pts[1], region)?;
            value += cell_area * 0.5 * (a + b);
            // Per-cell variance of the two-point mean: (a − b)²/4.
            var += cell_area * cell_area * (a - b).powi(2) / 4.0;
        }
        Ok(MassEstimate {
            value,
            std_error: var.sqrt(),
        })
    }

    /// `μ(B)` with stream `index` of the seed; two points per cell give the variance.
    pub fn ball_mass(&self, ball: &HyperbolicBall, index: u64) -> Result<MassEstimate> {
        self.region_mass(ball, index)
    }

    /// `μ(S(I))`, sampled like [`ball_mass`](Self::ball_mass).
    pub fn square_mass(&self, square: &CarlesonSquare, index: u64) -> Result<MassEstimate> {
        self.region_mass(square, index)
    }
}

/// A target region of the pushforward.
trait Region: Sync {
    fn contains(&self, w: C64) -> bool;

    /// Preimages of points outlining the region.
    fn outline_preimage(&self, phi: &DiscQCMap) -> Result<Vec<C64>>;
}

impl Region for HyperbolicBall {
    fn contains(&self, w: C64) -> bool {
        HyperbolicBall::contains(self, w)
    }

    fn outline_preimage(&self, phi: &DiscQCMap) -> Result<Vec<C64>> {
        self.boundary_points(OUTLINE_POINTS)
            .into_iter()
            .map(|w| phi.inverse(w))
            .collect()
    }
}

impl Region for CarlesonSquare {
    fn contains(&self, w: C64) -> bool {
        CarlesonSquare::contains(self, w)
    }

    /// The outer arc is pulled back exactly through `α⁻¹`; the inner arc and the two radial
    /// sides (stopped just short of the circle) are inverted numerically.
    fn outline_preimage(&self, phi: &DiscQCMap) -> Result<Vec<C64>> {
        let (a, b) = self.arc().endpoints();
        let r0 = self.inner_radius();
        let n = OUTLINE_POINTS / 4;
        let h = phi.boundary();
        let mut out = Vec::with_capacity(4 * n + 2);
        for k in 0..=n {
            let t = a + (b - a) * k as f64 / n as f64;
            out.push(C64::from_polar(1.0, h.alpha_inverse_lifted(t)));
            if r0 > 0.0 {
                out.push(phi.inverse(C64::from_polar(r0, t))?);
            }
        }
        let top = 1.0 - 1e-3 * (1.0 - r0);
        for k in 1..n {
            let r = r0 + (top - r0) * k as f64 / n as f64;
            out.push(phi.inverse(C64::from_polar(r, a))?);
            out.push(phi.inverse(C64::from_polar(r, b))?);
        }
        Ok(out)
    }
}

/// Hyperbolic balls on rings `|z| = 1 − 2^{−k}` at the angles `2πj/n`.
#[derive(Debug, Clone)]
pub struct BallFamily {
    /// `(ring index k, ball)`.
    pub balls: Vec<(u32, HyperbolicBall)>,
}

impl BallFamily {
    pub fn rings(levels: std::ops::RangeInclusive<u32>, angles: usize, ratio: f64) -> Result<Self> {
        let mut balls = Vec::new();
        for k in levels {
            let r = 1.0 - (-(k as f64)).exp2();
            for j in 0..angles {
                let t = crate::quadrature::wrap_angle(TAU * j as f64 / angles as f64);
                balls.push((k, HyperbolicBall::new(C64::from_polar(r, t), ratio)?));
            }
        }
        Ok(Self { balls })
    }

    /// Rings `k = 1..=12`, 16 angles per ring (including angle 0), ratio `1/2`.
    pub fn standard() -> Self {
        Self::rings(1..=12, 16, DEFAULT_BALL_RATIO).expect("valid standard family")
    }

    pub fn ring_indices(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.balls.iter().map(|b| b.0).collect();
        ks.dedup();
        ks
    }
}

/// Sup of a ball quotient over a family, per ring and overall.
#[derive(Debug, Clone, PartialEq)]
pub struct RingProfile {
    /// `(k, sup over the ring, standard error at the maximiser)`.
    pub rings: Vec<(u32, f64, f64)>,
    pub sup: f64,
    pub sup_error: f64,
    /// Stabilisation of the running sup across rings.
    pub classification: Classification,
}

impl RingProfile {
    pub fn ring(&self, k: u32) -> Option<f64> {
        self.rings.iter().find(|r| r.0 == k).map(|r| r.1)
    }

    fn from_quotients(family: &BallFamily, q: &[MassEstimate]) -> Self {
        let levels: Vec<u32> = family.balls.iter().map(|b| b.0).collect();
        Self::from_levels(&levels, q)
    }

    fn from_levels(levels: &[u32], q: &[MassEstimate]) -> Self {
        let mut rings: Vec<(u32, f64, f64)> = Vec::new();
        for (k, m) in levels.iter().zip(q) {
            match rings.last_mut() {
                Some(last) if last.0 == *k => {
                    if m.value > last.1 {
                        last.1 = m.value;
                        last.2 = m.std_error;
                    }
                }
                _ => rings.push((*k, m.value, m.std_error)),
            }
        }
        let (sup, sup_error) = rings
            .iter()
            .fold((f64::NEG_INFINITY, 0.0), |acc, r| if r.1 > acc.0 { (r.1, r.2) } else { acc });
        let values: Vec<f64> = rings.iter().map(|r| r.1).collect();
        Self {
            rings,
            sup,
            sup_error,
            classification: classify::classify_sup(&values),
        }
    }
}

fn ball_quotients<F>(mu: &DiscPushforward, family: &BallFamily, normaliser: F) -> Result<Vec<MassEstimate>>
where
    F: Fn(&HyperbolicBall) -> f64 + Sync,
{
    family
        .balls
        .par_iter()
        .enumerate()
        .map(|(i, (_, ball))| {
            let m = mu.ball_mass(ball, i as u64)?;
            let n = normaliser(ball);
            Ok(MassEstimate {
                value: m.value / n,
                std_error: m.std_error / n,
            })
        })
        .collect()
}

/// `sup μ(B)/|B|` over the family for the Lebesgue pushforward.
pub fn bergman_carleson_constant(mu: &DiscPushforward, family: &BallFamily) -> Result<RingProfile> {
    if mu.density != BaseDensity::Lebesgue {
        return Err(Error::InvalidParameter("Bergman Carleson test needs the Lebesgue pushforward".into()));
    }
    let q = ball_quotients(mu, family, |b| b.area())?;
    Ok(RingProfile::from_quotients(family, &q))
}

/// `sup μ(B)/r_B^{1+p}` over the family for the weighted pushforward.
pub fn luecking_constant(mu: &DiscPushforward, family: &BallFamily) -> Result<RingProfile> {
    let BaseDensity::Weighted { p } = mu.density else {
        return Err(Error::InvalidParameter("Luecking test needs the weighted pushforward".into()));
    };
    let q = ball_quotients(mu, family, |b| b.radius().powf(1.0 + p))?;
    Ok(RingProfile::from_quotients(family, &q))
}

/// Carleson squares over the arcs of length `2π·2^{−k}` centred at `2πj/n`, so that the
/// square of level `k` reaches down to the ring `|z| = 1 − 2^{−k}`.
#[derive(Debug, Clone)]
pub struct SquareFamily {
    /// `(level k, square)`.
    pub squares: Vec<(u32, CarlesonSquare)>,
}

impl SquareFamily {
    pub fn rings(levels: std::ops::RangeInclusive<u32>, angles: usize) -> Result<Self> {
        let mut squares = Vec::new();
        for k in levels {
            let half = PI * (-(k as f64)).exp2();
            for j in 0..angles {
                let arc = Arc::new(TAU * j as f64 / angles as f64, half)?;
                squares.push((k, CarlesonSquare::new(arc)));
            }
        }
        Ok(Self { squares })
    }

    /// Levels `k = 1..=12`, 16 centres per level including angle 0.
    pub fn standard() -> Self {
        Self::rings(1..=12, 16).expect("valid standard family")
    }
}

/// `sup μ(S(I))/|I|²` over the family for the Lebesgue pushforward, reported per level.
pub fn square_carleson_constant(mu: &DiscPushforward, family: &SquareFamily) -> Result<RingProfile> {
    if mu.density != BaseDensity::Lebesgue {
        return Err(Error::InvalidParameter("Carleson square test needs the Lebesgue pushforward".into()));
    }
    let q = family
        .squares
        .par_iter()
        .enumerate()
        .map(|(i, (_, sq))| {
            let m = mu.square_mass(sq, i as u64)?;
            let n = sq.side().powi(2);
            Ok(MassEstimate {
                value: m.value / n,
                std_error: m.std_error / n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let levels: Vec<u32> = family.squares.iter().map(|s| s.0).collect();
    Ok(RingProfile::from_levels(&levels, &q))
}

/// `(1 − |w|²)·(1/2π)∫|1 − w̄φ(e^{it})|^{−2} dt`, graded toward `t = α⁻¹(arg w)`.
pub fn kernel_ratio(phi: &DiscQCMap, w: C64) -> Result<f64> {
    let rho = w.norm();
    if !(rho < 1.0) {
        return Err(Error::outside(w));
    }
    let h = phi.boundary();
    let theta = w.arg();
    let mut focus = vec![h.alpha_inverse(theta)];
    focus.extend(h.kinks());
    let delta = 1.0 - rho;
    let mesh = AngularMesh::interior(focus, delta * delta / 16.0);
    let settings = QuadSettings {
        max_intervals: 6000,
        ..QuadSettings::with_rel(1e-11)
    };
    // |1 − ρe^{iψ}|² = (1 − ρ)² + 4ρ sin²(ψ/2)
    let q = integrate_periodic(
        |t| {
            let s = (0.5 * (h.alpha(t) - theta)).sin();
            1.0 / (delta * delta + 4.0 * rho * s * s)
        },
        &mesh,
        settings,
    );
    if !q.converged {
        return Err(Error::Quadrature {
            a: -PI,
            b: PI,
            estimate: q.value,
            error: q.error,
        });
    }
    Ok((1.0 - rho * rho) * q.value / TAU)
}

/// `w_k = 1 − 2^{−k}` for `k = 1..=levels`.
pub fn kernel_schedule(levels: u32) -> Vec<C64> {
    (1..=levels).map(|k| C64::new(1.0 - (-(k as f64)).exp2(), 0.0)).collect()
}

/// Ratios `‖g_w∘φ‖ᵖ/‖g_w‖ᵖ` of the extremal kernels along a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxyProfile {
    /// `(w, ratio)`.
    pub ratios: Vec<(C64, f64)>,
    pub sup: f64,
    /// Bounded when the running sup stabilises.
    pub classification: Classification,
}

impl ProxyProfile {
    pub fn growth(&self, from: usize, to: usize) -> f64 {
        self.ratios[to].1 / self.ratios[from].1
    }
}

/// `sup_w ‖g_w∘φ‖ᵖ_{𝓗ᵖ}/‖g_w‖ᵖ_{𝓗ᵖ}` with `g_w = (1 − w̄z)^{−2/p}`. The numerator is the sup of
/// the means over the default radial schedule and the boundary mean (`r = 1`).
pub fn operator_bound_proxy(phi: &DiscQCMap, p: f64, schedule: &[C64]) -> Result<ProxyProfile> {
    let radii = crate::functionals::default_schedule();
    let ratios = schedule
        .iter()
        .map(|&w| {
            let g = hardy_kernel(w, p)?;
            let f = compose(g, phi.clone());
            let num = hardy_norm(&f, p, &radii)?
                .value
                .max(boundary_lp_norm(&f, p)?.value);
            let den = hardy_norm(&g, p, &radii)?.value.max(boundary_lp_norm(&g, p)?.value);
            Ok((w, (num / den).powf(p)))
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    Ok(ProxyProfile {
        sup: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        classification: classify::classify_sup(&values),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_maps::BoundaryHomeo;
    use approx::assert_relative_eq;

    #[test]
    fn boundary_pushforward_mass() {
        for h in [BoundaryHomeo::identity(), BoundaryHomeo::sqrt_map(), BoundaryHomeo::power(2.0).unwrap()] {
            let mu = BoundaryPushforward::new(h);
            assert_relative_eq!(mu.total(), 1.0, epsilon = 1e-14);
            let parts = mu.measure_between(-PI, -1.0) + mu.measure_between(-1.0, 0.5) + mu.measure_between(0.5, PI);
            assert!((parts - 1.0).abs() < 1e-12);
            // an arc across the cut
            let arc = Arc::new(PI, 0.3).unwrap();
            assert!(mu.measure(&arc) > 0.0);
        }
    }

    #[test]
    fn boundary_carleson_equals_lipschitz() {
        let h = BoundaryHomeo::sqrt_map();
        let a = boundary_carleson_constant(&BoundaryPushforward::new(h.clone()), 10).unwrap();
        let b = lipschitz_modulus_inverse(&h, 10).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_ratio_identity() {
        let phi = DiscQCMap::identity();
        for r in [0.5, 0.9, 0.99, 0.999] {
            for t in [0.0, 1.0, -2.5] {
                let k = kernel_ratio(&phi, C64::from_polar(r, t)).unwrap();
                assert!((k - 1.0).abs() < 1e-9, "{r} {t} {k}");
            }
        }
    }

    #[test]
    fn kernel_ratio_is_moebius_invariant_mass() {
        // For a Möbius map the pushforward of arclength is the Poisson measure of M⁻¹(0).
        let phi = DiscQCMap::moebius(C64::new(0.5, 0.0)).unwrap();
        let k = kernel_ratio(&phi, C64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(k, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn identity_ball_mass_is_area() {
        let mu = DiscPushforward::new(DiscQCMap::identity(), BaseDensity::Lebesgue, 3);
        let ball = HyperbolicBall::new(C64::new(0.6, 0.2), 0.5).unwrap();
        let m = mu.ball_mass(&ball, 0).unwrap();
        assert!((m.value - ball.area()).abs() < 4.0 * m.std_error, "{m:?} vs {}", ball.area());
        assert!(m.std_error < 0.02 * ball.area());
    }

    #[test]
    fn identity_square_mass_is_area() {
        let mu = DiscPushforward::new(DiscQCMap::identity(), BaseDensity::Lebesgue, 5);
        for (k, sq) in SquareFamily::rings(2..=6, 3).unwrap().squares {
            let m = mu.square_mass(&sq, k as u64).unwrap();
            assert!((m.value - sq.area()).abs() < 4.0 * m.std_error, "{m:?} vs {}", sq.area());
        }
    }

    #[test]
    fn luecking_identity_matches_direct_integral() {
        // μ(B) = ∫_B (1 − |z|) dm for p = 2 and φ = id; the oracle is a polar tensor rule.
        let ball = HyperbolicBall::new(C64::new(0.9, 0.0), 0.5).unwrap();
        let (c, rad) = (ball.center(), ball.radius());
        let mut oracle = 0.0;
        for &(s, ws) in &crate::quadrature::kronrod_nodes(0.0, rad) {
            for j in 0..256 {
                let t = TAU * (j as f64 + 0.5) / 256.0;
                let z = c + C64::from_polar(s, t);
                oracle += ws * (TAU / 256.0) * s * (1.0 - z.norm());
            }
        }
        let mu = DiscPushforward::new(DiscQCMap::identity(), BaseDensity::Weighted { p: 2.0 }, 9);
        let m = mu.ball_mass(&ball, 0).unwrap();
        assert!((m.value - oracle).abs() < 4.0 * m.std_error + 1e-12, "{} vs {oracle}", m.value);
    }
}
