//! Adaptive Gauss–Kronrod quadrature with geometric grading toward boundary singularities.
//!
//! The engine is the 7/15-point Gauss–Kronrod pair with the QUADPACK error heuristic and a
//! global priority queue over subintervals. On top of it sit two helpers used by the
//! functionals: [`graded_angles`], which builds a breakpoint mesh on `[-π, π]` that is refined
//! geometrically toward chosen angles, and [`integrate_periodic`], which integrates a
//! `2π`-periodic function on that mesh and, for integrands with a genuine singularity on the
//! circle, extrapolates the innermost tail and detects divergence.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use crate::C64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// The 15 Kronrod nodes and weights mapped to `[a, b]`, for fixed tensor rules.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 15];
    for j in 0..7 {
        out[2 * j] = (c - h * XGK[j], h * WGK[j]);
        out[2 * j + 1] = (c + h * XGK[j], h * WGK[j]);
    }
    out[14] = (c, h * WGK[7]);
    out
}

/// Weights of the embedded 7-point Gauss rule, aligned with [`kronrod_nodes`] (zero at the
/// Kronrod-only nodes). The difference of the two rules is a cheap error indicator.
pub fn gauss_weights(a: f64, b: f64) -> [f64; 15] {
    let h = 0.5 * (b - a);
    let mut out = [0.0; 15];
    for j in [1usize, 3, 5] {
        out[2 * j] = h * WG[j / 2];
        out[2 * j + 1] = h * WG[j / 2];
    }
    out[14] = h * WG[3];
    out
}

#[derive(Debug, Clone, Copy)]
struct Rule<T> {
    value: T,
    error: f64,
    finite: bool,
}

fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Rule<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.magnitude() * WGK[7];
    let mut pairs = [(T::default(), T::default()); 7];
    for (j, pair) in pairs.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        resk = resk + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
        resabs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        *pair = (f1, f2);
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).magnitude();
    for (j, (f1, f2)) in pairs.iter().enumerate() {
        resasc += WGK[j] * ((*f1 - reskh).magnitude() + (*f2 - reskh).magnitude());
    }
    let scale = half.abs();
    let value = resk * half;
    resabs *= scale;
    resasc *= scale;
    let mut error = ((resk - resg) * half).magnitude();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    let finite = value.magnitude().is_finite() && error.is_finite();
    Rule {
        value,
        error: if finite { error } else { f64::INFINITY },
        finite,
    }
}

/// Absolute and relative error targets; the looser of the two wins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn target(&self, total: f64) -> f64 {
        self.abs.max(self.rel * total.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub tol: Tolerance,
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            tol: Tolerance::relative(1e-10),
            max_intervals: 2000,
        }
    }
}

impl QuadSettings {
    pub fn with_rel(rel: f64) -> Self {
        Self {
            tol: Tolerance::relative(rel),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    rule: Rule<T>,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule
            .error
            .total_cmp(&other.rule.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive integration over the mesh given by `breakpoints` (sorted, at least two).
pub fn integrate<T, F>(f: F, breakpoints: &[f64], settings: QuadSettings) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    assert!(breakpoints.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut finished: Vec<Segment<T>> = Vec::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            let rule = gk15(&f, w[0], w[1]);
            evaluations += 15;
            heap.push(Segment {
                a: w[0],
                b: w[1],
                rule,
            });
        }
    }
    let mut intervals = heap.len();
    let totals = |heap: &BinaryHeap<Segment<T>>, done: &[Segment<T>]| {
        let mut v = T::default();
        let mut e = 0.0;
        for s in heap.iter().chain(done.iter()) {
            v = v + s.rule.value;
            e += s.rule.error;
        }
        (v, e)
    };
    let (mut value, mut error) = totals(&heap, &finished);
    let mut converged = true;
    loop {
        if error <= settings.tol.target(value.magnitude()) {
            break;
        }
        if intervals >= settings.max_intervals {
            converged = false;
            break;
        }
        let Some(worst) = heap.pop() else {
            converged = false;
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || !worst.rule.finite {
            // Interval cannot be refined further.
            finished.push(worst);
            if heap.is_empty() {
                converged = false;
                break;
            }
            continue;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        evaluations += 30;
        intervals += 1;
        value = value - worst.rule.value + left.value + right.value;
        error = error - worst.rule.error + left.error + right.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            rule: left,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            rule: right,
        });
        if intervals % 64 == 0 {
            (value, error) = totals(&heap, &finished);
        }
    }
    // Deterministic final summation, left to right.
    let mut all: Vec<Segment<T>> = heap.into_vec();
    all.extend(finished);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = T::default();
    let mut error = 0.0;
    let mut finite = true;
    for s in &all {
        value = value + s.rule.value;
        error += s.rule.error;
        finite &= s.rule.finite;
    }
    converged &= finite && error <= settings.tol.target(value.magnitude());
    QuadResult {
        value,
        error,
        converged,
        evaluations,
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let mut x = (t + PI).rem_euclid(2.0 * PI) - PI;
    if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// Breakpoints on `[-π, π]`: `base_panels` uniform panels plus, for each angle in `focus`,
/// points at distances `π·2^{-j}` on both sides down to `min_width`.
pub fn graded_angles(focus: &[f64], min_width: f64, base_panels: usize) -> Vec<f64> {
    let mut pts = Vec::new();
    let n = base_panels.max(1);
    for k in 0..=n {
        pts.push(-PI + 2.0 * PI * k as f64 / n as f64);
    }
    for &t0 in focus {
        let t0 = wrap_angle(t0);
        pts.push(t0);
        // Keep the innermost panels wide enough to be resolved in floating point.
        let floor = min_width.max(1_048_576.0 * f64::EPSILON * t0.abs());
        let mut d = PI / 2.0;
        while d >= floor {
            for s in [t0 + d, t0 - d] {
                let w = wrap_angle(s);
                pts.push(w);
                if w == PI {
                    pts.push(-PI);
                }
            }
            d *= 0.5;
        }
    }
    pts.retain(|x| (-PI..=PI).contains(x));
    pts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for x in pts {
        match out.last() {
            Some(&last) if x - last <= 4.0 * f64::EPSILON * last.abs().max(x.abs()) => {}
            _ => out.push(x),
        }
    }
    if out.first() != Some(&-PI) {
        out.insert(0, -PI);
    }
    if out.last() != Some(&PI) {
        out.push(PI);
    }
    out
}

/// Settings of a periodic graded integration.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularMesh {
    /// Angles toward which the mesh is refined.
    pub focus: Vec<f64>,
    /// Angles where the integrand is genuinely singular (subset of `focus`); only used when
    /// `boundary_tail` is set.
    pub singular: Vec<f64>,
    pub min_width: f64,
    pub base_panels: usize,
    /// Replace the innermost panel at each singular angle by geometric tail extrapolation and
    /// test for divergence.
    pub boundary_tail: bool,
}

impl AngularMesh {
    pub fn interior(focus: Vec<f64>, min_width: f64) -> Self {
        Self {
            focus,
            singular: Vec::new(),
            min_width,
            base_panels: 16,
            boundary_tail: false,
        }
    }

    pub fn boundary(focus: Vec<f64>, singular: Vec<f64>) -> Self {
        Self {
            focus,
            singular,
            min_width: 1e-13,
            base_panels: 16,
            boundary_tail: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub diverging: bool,
}

/// Ratio above which successive dyadic shells around a singular point are treated as
/// non-summable.
pub const TAIL_DIVERGENCE_RATIO: f64 = 0.98;

/// Integrates a nonnegative `2π`-periodic function over `[-π, π]` on a graded mesh.
pub fn integrate_periodic<F>(f: F, mesh: &AngularMesh, settings: QuadSettings) -> PeriodicResult
where
    F: Fn(f64) -> f64,
{
    let pts = graded_angles(&mesh.focus, mesh.min_width, mesh.base_panels);
    if !mesh.boundary_tail || mesh.singular.is_empty() {
        let r = integrate(&f, &pts, settings);
        return PeriodicResult {
            value: r.value,
            error: r.error,
            converged: r.converged,
            diverging: false,
        };
    }
    let singular: Vec<f64> = mesh.singular.iter().map(|&t| wrap_angle(t)).collect();
    let touches = |x: f64| {
        singular
            .iter()
            .any(|&s| x == s || (s == PI && x == -PI) || (s == -PI && x == PI))
    };
    // Integrate everything except the panels that end on a singular angle.
    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    let mut diverging = false;
    let mut run: Vec<f64> = Vec::new();
    let flush = |run: &mut Vec<f64>, value: &mut f64, error: &mut f64, conv: &mut bool| {
        if run.len() >= 2 {
            let r = integrate(&f, run, settings);
            *value += r.value;
            *error += r.error;
            *conv &= r.converged;
        }
        run.clear();
    };
    let mut inner_panels = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if touches(a) || touches(b) {
            flush(&mut run, &mut value, &mut error, &mut converged);
            inner_panels.push((a, b, touches(a)));
        } else {
            if run.last() != Some(&a) {
                flush(&mut run, &mut value, &mut error, &mut converged);
                run.push(a);
            }
            run.push(b);
        }
    }
    flush(&mut run, &mut value, &mut error, &mut converged);
    for (a, b, singular_at_a) in inner_panels {
        let tail = singular_tail(&f, a, b, singular_at_a);
        diverging |= tail.diverging;
        value += tail.value;
        error += tail.error;
    }
    PeriodicResult {
        value,
        error,
        converged: converged && !diverging,
        diverging,
    }
}

#[derive(Debug, Clone, Copy)]
struct Tail {
    value: f64,
    error: f64,
    diverging: bool,
}

/// Integral over a panel `[a, b]` with a singularity at one end, by summing dyadic shells
/// `[w/2^{i+1}, w/2^i]` toward the singular end and extrapolating geometrically.
fn singular_tail<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, singular_at_a: bool) -> Tail {
    let width = b - a;
    let (s, dir) = if singular_at_a { (a, 1.0) } else { (b, -1.0) };
    let shell = |lo: f64, hi: f64| {
        let (x0, x1) = (s + dir * lo, s + dir * hi);
        let (l, r) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
        gk15(f, l, r).value
    };
    // Shells ordered from the outside in.
    const SHELLS: usize = 8;
    let mut c = [0.0; SHELLS];
    let mut hi = width;
    for ci in c.iter_mut() {
        let lo = 0.5 * hi;
        if s + dir * lo == s {
            break;
        }
        *ci = shell(lo, hi);
        hi = lo;
    }
    let mut ratios = Vec::new();
    for k in 0..SHELLS - 1 {
        if c[k] > 0.0 && c[k + 1] > 0.0 {
            ratios.push(c[k + 1] / c[k]);
        }
    }
    let partial: f64 = c.iter().sum();
    if ratios.len() < 3 {
        return Tail {
            value: partial,
            error: partial.abs() * 1e-3,
            diverging: false,
        };
    }
    let last = &ratios[ratios.len() - 3..];
    let q = last.iter().sum::<f64>() / 3.0;
    if q >= TAIL_DIVERGENCE_RATIO {
        return Tail {
            value: f64::INFINITY,
            error: f64::INFINITY,
            diverging: true,
        };
    }
    let innermost = c[SHELLS - 1];
    let remainder = innermost * q / (1.0 - q);
    let spread = last
        .iter()
        .map(|r| (r - q).abs())
        .fold(0.0_f64, f64::max);
    Tail {
        value: partial + remainder,
        error: remainder.abs() * (spread / (1.0 - q)).max(1e-3) + partial.abs() * 1e-14,
        diverging: false,
    }
}
