use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use qchardy_core::boundary_maps::{BoundaryHomeo, DiscQCMap, MapCatalogEntry};
use qchardy_core::function_spaces::*;
use qchardy_core::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn kernel_examples() {
    let g = hardy_kernel(c(0.0, 0.0), 1.5).unwrap();
    assert!(g.is_constant());
    assert_eq!(g.eval(c(0.3, 0.4)), c(1.0, 0.0));
    for (w, p) in [(c(0.9, 0.0), 2.0), (c(-0.3, 0.5), 1.0), (c(0.0, 0.99), 0.5)] {
        assert_eq!(hardy_kernel(w, p).unwrap().eval(c(0.0, 0.0)), c(1.0, 0.0));
    }
    let g = hardy_kernel(c(0.9, 0.0), 2.0).unwrap();
    assert_relative_eq!(g.eval(c(0.9, 0.0)).re, 1.0 / 0.19, max_relative = 1e-14);
}

#[test]
fn cauchy_examples() {
    let g = cauchy_kernel();
    assert_eq!(g.eval(c(0.0, 0.0)), c(1.0, 0.0));
    assert_relative_eq!(g.eval(c(-1.0, 0.0)).re, 0.5);
    for k in 1..=16 {
        let s = PI * k as f64 / 16.0;
        let trace = g.boundary_value(s).norm();
        assert_relative_eq!(trace, 1.0 / (2.0 * (s / 2.0).sin()), max_relative = 1e-14);
    }
}

#[test]
fn composites_unfold() {
    let g = cauchy_kernel();
    let f = compose(g, DiscQCMap::identity());
    for z in [c(0.2, 0.1), c(-0.7, 0.3), c(0.0, -0.95)] {
        assert_eq!(f.eval(z), g.eval(z));
    }
    let one = compose(AnalyticFunction::constant(c(1.0, 0.0)), MapCatalogEntry::Thm2Sqrt.disc_map().unwrap());
    assert_eq!(one.eval(c(0.4, -0.2)), c(1.0, 0.0));

    let f = compose(g, MapCatalogEntry::Thm2Sqrt.disc_map().unwrap());
    for k in 1..=8 {
        let t = PI * k as f64 / 8.0;
        let expected = 1.0 / (2.0 * ((PI * t).sqrt() / 2.0).sin());
        assert_relative_eq!(f.boundary_value(t).norm(), expected, max_relative = 1e-12);
    }
}

#[test]
fn chain_rule_for_conformal_controls() {
    let g = hardy_kernel(c(0.6, 0.2), 2.0).unwrap();
    for a in [c(0.5, 0.0), c(-0.2, 0.4)] {
        let phi = DiscQCMap::moebius(a).unwrap();
        let f = compose(g, phi.clone());
        for z in [c(0.1, 0.2), c(-0.5, 0.5), c(0.8, -0.1)] {
            let w = phi.eval(z);
            let derivative = g.derivative(w) * phi.differential(z).dz();
            assert_relative_eq!(f.jacobian(z), derivative.norm_sqr(), max_relative = 1e-6);
        }
    }
}

#[test]
fn singularity_pulls_back_with_rescaled_exponent() {
    let f = compose(cauchy_kernel(), MapCatalogEntry::Thm2Sqrt.disc_map().unwrap());
    let s = f.singularities();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].angle, 0.0);
    assert_relative_eq!(s[0].exponent, 0.5);
    // log-log slope of the boundary trace next to the singular angle
    let (t1, t2) = (1e-6, 1e-8);
    let slope = (f.boundary_value(t2).norm() / f.boundary_value(t1).norm()).ln() / (t2 / t1).ln();
    assert!((slope + 0.5).abs() < 1e-3, "{slope}");

    let moved = compose(cauchy_kernel(), DiscQCMap::beurling_ahlfors(BoundaryHomeo::power(2.0).unwrap()).unwrap());
    assert_relative_eq!(moved.singularities()[0].exponent, 2.0);
}

#[test]
fn membership_metadata() {
    assert_eq!(cauchy_kernel().hp_membership(1.0), HpMembership::NonMember);
    assert_eq!(cauchy_kernel().hp_membership(0.5), HpMembership::Member);
    assert_eq!(hardy_kernel(c(0.9, 0.0), 2.0).unwrap().hp_membership(2.0), HpMembership::Member);
}

proptest! {
    #[test]
    fn kernel_derivative_matches_difference_quotient(wr in 0.0..0.95f64, wt in -PI..PI, p in 0.5..4.0f64, zr in 0.0..0.9f64, zt in -PI..PI) {
        let g = hardy_kernel(C64::from_polar(wr, wt), p).unwrap();
        let z = C64::from_polar(zr, zt);
        let h = 1e-6;
        let fd = (g.eval(z + h) - g.eval(z - h)) / (2.0 * h);
        let d = g.derivative(z);
        prop_assert!((fd - d).norm() <= 1e-5 * (1.0 + d.norm()));
    }

    #[test]
    fn scaling_is_linear(re in -3.0..3.0f64, im in -3.0..3.0f64, zr in 0.0..0.9f64, zt in -PI..PI) {
        let lam = c(re, im);
        let z = C64::from_polar(zr, zt);
        let g = cauchy_kernel();
        prop_assert!((g.scaled(lam).eval(z) - lam * g.eval(z)).norm() <= 1e-12 * (1.0 + (lam * g.eval(z)).norm()));
    }
}
