use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::NormEstimate;
use crate::classify::classify_means;
use crate::disc_geometry::HyperbolicBall;
use crate::function_spaces::PlanarMap;
use crate::quadrature::{gauss_weights, graded_angles, kronrod_nodes};
use crate::sampling::{mean_and_std_error, stratified_disc, stream};
use crate::{Error, Result, C64};

/// Which derivative enters the area integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeKind {
    /// `|f′(z)|` of an analytic map.
    Analytic,
    /// Operator norm `|Df(z)|` of the real differential.
    Full,
}

/// Tensor rule over the annuli `[1 − 2^{−(k−1)}, 1 − 2^{−k}]`, `k = 1..=levels`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaSettings {
    pub levels: u32,
    /// Uniform angular panels before grading.
    pub base_panels: usize,
    /// Innermost angular panel near a focus angle, as a fraction of the annulus width.
    pub focus_fraction: f64,
    /// Monte Carlo samples per quadrature node for `a_f`.
    pub af_samples: usize,
}

impl Default for AreaSettings {
    fn default() -> Self {
        Self {
            levels: 16,
            base_panels: 16,
            focus_fraction: 0.125,
            af_samples: 64,
        }
    }
}

struct Node {
    z: C64,
    /// Weight including the Jacobian `r` of polar coordinates and the factor `(1 − r)^{p−1}`.
    wk: f64,
    wg: f64,
}

fn annulus_nodes(focus: &[f64], k: u32, p: f64, settings: &AreaSettings) -> Vec<Node> {
    let r0 = 1.0 - (-(k as f64 - 1.0)).exp2();
    let r1 = 1.0 - (-(k as f64)).exp2();
    let width = r1 - r0;
    let angles = graded_angles(focus, settings.focus_fraction * width, settings.base_panels);
    let radial = kronrod_nodes(r0, r1);
    let radial_g = gauss_weights(r0, r1);
    let mut out = Vec::new();
    for w in angles.windows(2) {
        let an = kronrod_nodes(w[0], w[1]);
        let ag = gauss_weights(w[0], w[1]);
        for (i, &(r, wr)) in radial.iter().enumerate() {
            let radial_factor = r * (1.0 - r).powf(p - 1.0);
            for (j, &(t, wt)) in an.iter().enumerate() {
                out.push(Node {
                    z: C64::from_polar(r, t),
                    wk: wr * wt * radial_factor,
                    wg: radial_g[i] * ag[j] * radial_factor,
                });
            }
        }
    }
    out
}

/// Integrates `density(z)·(1 − |z|)^{p−1}` annulus by annulus; the classification is taken
/// from the partial sums over increasing radial truncations.
fn annular_integral<D>(focus: &[f64], p: f64, settings: &AreaSettings, density: D) -> Result<NormEstimate>
where
    D: Fn(usize, C64) -> Result<f64> + Sync,
{
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p must be positive, got {p}")));
    }
    if settings.levels == 0 {
        return Err(Error::InvalidParameter("area integral needs at least one annulus".into()));
    }
    let mut partial = 0.0;
    let mut error = 0.0;
    let mut sums = Vec::new();
    let mut samples = Vec::new();
    let mut offset = 0usize;
    for k in 1..=settings.levels {
        let nodes = annulus_nodes(focus, k, p, settings);
        let values = nodes
            .par_iter()
            .enumerate()
            .map(|(i, n)| density(offset + i, n.z))
            .collect::<Result<Vec<f64>>>()?;
        offset += nodes.len();
        let (mut kron, mut gauss) = (0.0, 0.0);
        for (n, v) in nodes.iter().zip(&values) {
            kron += n.wk * v;
            gauss += n.wg * v;
        }
        partial += kron;
        error += (kron - gauss).abs();
        sums.push(partial);
        samples.push((k as f64, partial));
    }
    // The last annulus bounds the neglected tail when contributions decay geometrically.
    let last = sums[sums.len() - 1] - sums.get(sums.len().wrapping_sub(2)).copied().unwrap_or(0.0);
    Ok(NormEstimate {
        value: partial,
        error: error + last.abs(),
        classification: classify_means(&sums),
        samples,
    })
}

/// `∫_𝔻 |D|ᵖ (1 − |z|)^{p−1} dm` with `D = f′` or `D = Df`.
pub fn area_integral<F: PlanarMap + ?Sized>(f: &F, p: f64, kind: DerivativeKind) -> Result<NormEstimate> {
    area_integral_with(f, p, kind, &AreaSettings::default())
}

pub fn area_integral_with<F: PlanarMap + ?Sized>(
    f: &F,
    p: f64,
    kind: DerivativeKind,
    settings: &AreaSettings,
) -> Result<NormEstimate> {
    let focus = f.focus_angles();
    annular_integral(&focus, p, settings, |_, z| {
        let d = match kind {
            DerivativeKind::Analytic => f
                .analytic_derivative(z)
                .ok_or_else(|| Error::InvalidParameter(format!("{} has no complex derivative", f.name())))?
                .norm(),
            DerivativeKind::Full => f.try_differential(z)?.norm(),
        };
        Ok(d.powf(p))
    })
}

/// Monte Carlo estimate of the average derivative `a_f(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfEstimate {
    pub value: f64,
    /// Standard error of `value` (delta method on the mean of `½ log Jf`).
    pub std_error: f64,
    /// Samples dropped because `Jf ≤ 0` there.
    pub excluded: usize,
    pub samples: usize,
}

fn average_derivative_rng<F: PlanarMap + ?Sized>(
    f: &F,
    z: C64,
    ratio: f64,
    samples: usize,
    rng: &mut ChaCha8Rng,
    parallel: bool,
) -> Result<AfEstimate> {
    let ball = HyperbolicBall::new(z, ratio)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("average derivative needs samples".into()));
    }
    let pts = stratified_disc(ball.center(), ball.radius(), samples, rng);
    let log_half_j = |w: &C64| f.try_jacobian(*w).map(|j| if j > 0.0 && j.is_finite() { Some(0.5 * j.ln()) } else { None });
    let logs: Vec<Option<f64>> = if parallel {
        pts.par_iter().map(log_half_j).collect::<Result<_>>()?
    } else {
        pts.iter().map(log_half_j).collect::<Result<_>>()?
    };
    let kept: Vec<f64> = logs.iter().flatten().copied().collect();
    let excluded = logs.len() - kept.len();
    if excluded * 100 > logs.len() {
        return Err(Error::TooManyExclusions {
            excluded,
            total: logs.len(),
        });
    }
    let (mean, se) = mean_and_std_error(&kept);
    let value = mean.exp();
    Ok(AfEstimate {
        value,
        std_error: value * se,
        excluded,
        samples: logs.len(),
    })
}

/// `a_f(z) = exp((1/|B|)∫_B log Jf^{1/2} dm)` over `B = B(z, c(1 − |z|))`, estimated from
/// stratified samples of the ball drawn from the stream `(seed, 0)`.
pub fn average_derivative<F: PlanarMap + ?Sized>(
    f: &F,
    z: C64,
    ratio: f64,
    samples: usize,
    seed: u64,
) -> Result<AfEstimate> {
    average_derivative_rng(f, z, ratio, samples, &mut stream(seed, 0), true)
}

/// `∫_𝔻 a_f(z)ᵖ (1 − |z|)^{p−1} dm` on the same tensor scheme as [`area_integral`], with
/// `a_f` at each node estimated from its own random stream.
pub fn area_integral_af<F: PlanarMap + ?Sized>(f: &F, p: f64, ratio: f64, seed: u64) -> Result<NormEstimate> {
    area_integral_af_with(f, p, ratio, seed, &AreaSettings::default())
}

pub fn area_integral_af_with<F: PlanarMap + ?Sized>(
    f: &F,
    p: f64,
    ratio: f64,
    seed: u64,
    settings: &AreaSettings,
) -> Result<NormEstimate> {
    let focus = f.focus_angles();
    annular_integral(&focus, p, settings, |i, z| {
        let mut rng = stream(seed, i as u64);
        let a = average_derivative_rng(f, z, ratio, settings.af_samples, &mut rng, false)?;
        Ok(a.value.powf(p))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_spaces::{hardy_kernel, AnalyticFunction};
    use crate::classify::Classification;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn identity_p2_is_pi_over_three() {
        let f = AnalyticFunction::monomial(1);
        let a = area_integral(&f, 2.0, DerivativeKind::Analytic).unwrap();
        assert_relative_eq!(a.value, PI / 3.0, max_relative = 1e-8);
        assert_eq!(a.classification, Classification::Converged);
        let full = area_integral(&f, 2.0, DerivativeKind::Full).unwrap();
        assert_relative_eq!(full.value, PI / 3.0, max_relative = 1e-8);
        // p = 1 gives the area of the disc truncated at the last annulus.
        let one = area_integral(&f, 1.0, DerivativeKind::Analytic).unwrap();
        let r_max = 1.0 - (-16f64).exp2();
        assert_relative_eq!(one.value, PI * r_max * r_max, max_relative = 1e-10);
    }

    #[test]
    fn kernel_area_integral_matches_series() {
        // g = (1 − w z)^{−1}, g′ = Σ n wⁿ z^{n−1}; ∫|g′|²(1−|z|) dm = Σ n² w^{2n} · 2π ∫ r^{2n−1}(1−r) dr
        let w: f64 = 0.9;
        let g = hardy_kernel(C64::new(w, 0.0), 2.0).unwrap();
        let a = area_integral(&g, 2.0, DerivativeKind::Analytic).unwrap();
        let series: f64 = (1..4000)
            .map(|n| {
                let n = n as f64;
                n * n * w.powf(2.0 * n) * TAU * (1.0 / (2.0 * n) - 1.0 / (2.0 * n + 1.0))
            })
            .sum();
        assert_eq!(a.classification, Classification::Converged);
        assert_relative_eq!(a.value, series, max_relative = 1e-6);
    }

    #[test]
    fn af_of_identity_is_one() {
        let f = AnalyticFunction::monomial(1);
        let a = average_derivative(&f, C64::new(0.3, 0.1), 0.5, 1000, 7).unwrap();
        assert_relative_eq!(a.value, 1.0, max_relative = 1e-14);
        let integral = area_integral_af(&f, 2.0, 0.5, 42).unwrap();
        assert_relative_eq!(integral.value, PI / 3.0, max_relative = 1e-8);
    }

    #[test]
    fn af_is_homogeneous() {
        let f = AnalyticFunction::moebius(C64::new(0.5, 0.0)).unwrap();
        let lam = C64::new(0.0, -3.0);
        let a = average_derivative(&f, C64::new(0.2, 0.2), 0.5, 4000, 11).unwrap();
        let b = average_derivative(&f.scaled(lam), C64::new(0.2, 0.2), 0.5, 4000, 11).unwrap();
        assert_relative_eq!(b.value, 3.0 * a.value, max_relative = 1e-12);
    }

    #[test]
    fn af_deterministic_in_seed() {
        let f = AnalyticFunction::moebius(C64::new(0.5, 0.0)).unwrap();
        let a = average_derivative(&f, C64::new(0.0, 0.0), 0.5, 1000, 5).unwrap();
        let b = average_derivative(&f, C64::new(0.0, 0.0), 0.5, 1000, 5).unwrap();
        assert_eq!(a, b);
    }
}
