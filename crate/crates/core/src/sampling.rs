//! Seeded random streams and stratified samplers.
//!
//! Every Monte Carlo estimate in the crate draws from a ChaCha stream identified by a root seed
//! and a task index, so results do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

/// Independent stream `index` of the generator rooted at `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` points in the disc `B(center, radius)`, one per cell of an (annulus × sector) partition
/// into cells of equal area. `n` is rounded up to a multiple of the number of annuli.
pub fn stratified_disc(center: C64, radius: f64, n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let annuli = ((n as f64).sqrt().ceil() as usize).max(1);
    let sectors = n.div_ceil(annuli).max(1);
    let mut out = Vec::with_capacity(annuli * sectors);
    for k in 0..annuli {
        for j in 0..sectors {
            let s = (k as f64 + rng.random::<f64>()) / annuli as f64;
            let t = std::f64::consts::TAU * (j as f64 + rng.random::<f64>()) / sectors as f64;
            out.push(center + C64::from_polar(radius * s.sqrt(), t));
        }
    }
    out
}

/// Jittered `side × side` grid in the rectangle `[lo.re, hi.re] × [lo.im, hi.im]`, with
/// `per_cell` independent points in each cell.
pub fn jittered_box(lo: C64, hi: C64, side: usize, per_cell: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<C64>> {
    let dx = (hi.re - lo.re) / side as f64;
    let dy = (hi.im - lo.im) / side as f64;
    let mut cells = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let pts = (0..per_cell)
                .map(|_| {
                    C64::new(
                        lo.re + (i as f64 + rng.random::<f64>()) * dx,
                        lo.im + (j as f64 + rng.random::<f64>()) * dy,
                    )
                })
                .collect();
            cells.push(pts);
        }
    }
    cells
}

/// Mean and standard error of a sample, using the simple-random-sampling formula.
///
/// For proportionally allocated stratified samples this overestimates the true standard error,
/// so it is a conservative error bar.
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::INFINITY);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
