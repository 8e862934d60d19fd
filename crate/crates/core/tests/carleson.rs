use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use qchardy_core::boundary_maps::{lipschitz_modulus_inverse, DiscQCMap, MapCatalogEntry};
use qchardy_core::carleson::*;
use qchardy_core::classify::{classify_sup, Classification};
use qchardy_core::disc_geometry::{Arc, HyperbolicBall};
use qchardy_core::C64;

#[test]
fn boundary_pushforward_examples() {
    for e in MapCatalogEntry::standard() {
        let mu = BoundaryPushforward::new(e.homeo().unwrap());
        assert_relative_eq!(mu.total(), 1.0, max_relative = 1e-14);
        let c = boundary_carleson_constant(&mu, 12).unwrap();
        let l = lipschitz_modulus_inverse(&e.homeo().unwrap(), 12).unwrap();
        for d in 1..=12 {
            assert!((c.at(d) - l.at(d)).abs() <= 1e-9 * l.at(d));
        }
    }
    let id = boundary_carleson_constant(&BoundaryPushforward::new(MapCatalogEntry::Identity.homeo().unwrap()), 10).unwrap();
    assert!(id.values.iter().all(|&v| v == 1.0));
    let s = boundary_carleson_constant(&BoundaryPushforward::new(MapCatalogEntry::Thm2Sqrt.homeo().unwrap()), 12).unwrap();
    assert!((s.last() - 2.0).abs() < 0.01);
    let q = boundary_carleson_constant(&BoundaryPushforward::new(MapCatalogEntry::Power(2.0).homeo().unwrap()), 12).unwrap();
    for d in [6, 8, 10, 12] {
        assert!((q.at(d) / (d as f64 / 2.0).exp2() - 1.0).abs() < 0.1);
    }
}

#[test]
fn bergman_constant_of_the_identity_is_one() {
    let mu = DiscPushforward::new(DiscQCMap::identity(), BaseDensity::Lebesgue, 42);
    let family = BallFamily::standard();
    let r = bergman_carleson_constant(&mu, &family).unwrap();
    assert!((r.sup - 1.0).abs() <= 3.0 * r.sup_error, "{} ± {}", r.sup, r.sup_error);
    for (i, (_, ball)) in family.balls.iter().enumerate().step_by(17) {
        let m = mu.ball_mass(ball, i as u64).unwrap();
        assert!((m.value / ball.area() - 1.0).abs() <= 3.0 * m.std_error / ball.area());
    }
}

#[test]
fn bergman_constant_tracks_the_inverse_lipschitz_property() {
    let family = BallFamily::standard();
    let bounded = bergman_carleson_constant(&DiscPushforward::new(MapCatalogEntry::Thm2Sqrt.disc_map().unwrap(), BaseDensity::Lebesgue, 42), &family).unwrap();
    assert_eq!(bounded.classification, Classification::Converged);
    let growing = bergman_carleson_constant(&DiscPushforward::new(MapCatalogEntry::Power(2.0).disc_map().unwrap(), BaseDensity::Lebesgue, 42), &family).unwrap();
    assert_eq!(growing.classification, Classification::Diverging);
    assert!(growing.ring(10).unwrap() >= 5.0 * growing.ring(4).unwrap());
}

#[test]
fn square_version_agrees_with_the_ball_version() {
    let family = SquareFamily::rings(1..=10, 8).unwrap();
    let id = square_carleson_constant(&DiscPushforward::new(DiscQCMap::identity(), BaseDensity::Lebesgue, 42), &family).unwrap();
    // μ(S) = |S| ≈ |I|²/2π for small squares
    assert!((id.sup * 2.0 * PI - 1.0).abs() < 0.1, "{}", id.sup);
    let s = square_carleson_constant(&DiscPushforward::new(MapCatalogEntry::Thm2Sqrt.disc_map().unwrap(), BaseDensity::Lebesgue, 42), &family).unwrap();
    assert_eq!(s.classification, Classification::Converged);
    let q = square_carleson_constant(&DiscPushforward::new(MapCatalogEntry::Power(2.0).disc_map().unwrap(), BaseDensity::Lebesgue, 42), &family).unwrap();
    assert_eq!(q.classification, Classification::Diverging);
}

#[test]
fn luecking_quotient_of_the_identity_on_one_ball() {
    let ball = HyperbolicBall::new(C64::new(0.8, 0.0), 0.5).unwrap();
    // ∫_B (1 − |z|) dm by a polar midpoint rule around the centre.
    let (n, rho) = (400, ball.radius());
    let mut exact = 0.0;
    for i in 0..n {
        let s = rho * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let t = 2.0 * PI * (j as f64 + 0.5) / n as f64;
            exact += (1.0 - (ball.center() + C64::from_polar(s, t)).norm()) * s;
        }
    }
    exact *= (rho / n as f64) * (2.0 * PI / n as f64);
    let mu = DiscPushforward::new(DiscQCMap::identity(), BaseDensity::Weighted { p: 2.0 }, 42);
    let m = mu.ball_mass(&ball, 0).unwrap();
    assert!((m.value - exact).abs() <= 3.0 * m.std_error + 1e-6 * exact, "{m:?} vs {exact}");
    // μ(B) ≈ π r_B²(1 − |c|) = 2π r_B³ for ratio-1/2 balls
    assert_relative_eq!(exact / rho.powi(3), 2.0 * PI, max_relative = 0.05);
}

#[test]
fn luecking_constant_is_bounded_and_scale_stable_for_the_sqrt_map() {
    let phi = MapCatalogEntry::Thm2Sqrt.disc_map().unwrap();
    let mu = DiscPushforward::new(phi, BaseDensity::Weighted { p: 2.0 }, 42);
    let half = luecking_constant(&mu, &BallFamily::rings(1..=10, 8, 0.5).unwrap()).unwrap();
    assert_eq!(half.classification, Classification::Converged);
    let quarter = luecking_constant(&mu, &BallFamily::rings(1..=10, 8, 0.25).unwrap()).unwrap();
    let factor = quarter.sup / half.sup;
    assert!(factor > 0.25 && factor < 4.0, "{factor}");
}

#[test]
fn kernel_ratio_examples() {
    let id = DiscQCMap::identity();
    for r in [0.5, 0.9, 0.99, 0.999] {
        for t in [0.0, 1.0, -2.5] {
            assert!((kernel_ratio(&id, C64::from_polar(r, t)).unwrap() - 1.0).abs() < 1e-6);
        }
    }
    let sched = kernel_schedule(16);
    let s = MapCatalogEntry::Thm2Sqrt.disc_map().unwrap();
    let v: Vec<f64> = sched.iter().map(|&w| kernel_ratio(&s, w).unwrap()).collect();
    assert_eq!(classify_sup(&v), Classification::Converged);
    let q = MapCatalogEntry::Power(2.0).disc_map().unwrap();
    let g = kernel_ratio(&q, sched[15]).unwrap() / kernel_ratio(&q, sched[3]).unwrap();
    assert!(g >= 10.0, "{g}");
}

#[test]
fn kernel_and_boundary_tests_classify_jointly() {
    for e in MapCatalogEntry::standard() {
        let phi = e.disc_map().unwrap();
        let v: Vec<f64> = kernel_schedule(16).iter().map(|&w| kernel_ratio(&phi, w).unwrap()).collect();
        let b = boundary_carleson_constant(&BoundaryPushforward::of_map(&phi), 16).unwrap();
        assert_eq!(classify_sup(&v), b.classification(), "{e}");
    }
}

#[test]
fn operator_proxy_examples() {
    let sched = kernel_schedule(16);
    let id = operator_bound_proxy(&DiscQCMap::identity(), 2.0, &sched).unwrap();
    assert!(id.ratios.iter().all(|r| (r.1 - 1.0).abs() < 1e-3));
    let s = MapCatalogEntry::Thm2Sqrt.disc_map().unwrap();
    for p in [1.0, 2.0] {
        let pr = operator_bound_proxy(&s, p, &kernel_schedule(12)).unwrap();
        assert_eq!(pr.classification, Classification::Converged, "p = {p}");
    }
    let q = operator_bound_proxy(&MapCatalogEntry::Power(2.0).disc_map().unwrap(), 2.0, &sched).unwrap();
    assert_eq!(q.classification, Classification::Diverging);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_pushforward_is_additive(a in -PI..PI, w1 in 0.0..2.0f64, w2 in 0.0..2.0f64) {
        let mu = BoundaryPushforward::new(MapCatalogEntry::Power(2.0).homeo().unwrap());
        let whole = mu.measure_between(a, a + w1 + w2);
        let parts = mu.measure_between(a, a + w1) + mu.measure_between(a + w1, a + w1 + w2);
        prop_assert!((whole - parts).abs() < 1e-12);
        let arc = Arc::from_endpoints(a, a + w1 + w2).unwrap();
        prop_assert!((mu.measure(&arc) - whole).abs() < 1e-12);
    }
}
