//! Convergence classification of monotone-ish numeric sequences.
//!
//! Divergence is an answer, not an error: every sup-over-a-schedule estimator in the crate
//! reports one of these classes next to its value.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Converged,
    Diverging,
    Undetermined,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Converged => "converged",
            Classification::Diverging => "diverging",
            Classification::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Successive ratios among the last `window` values must all stay below this for a
/// Hardy-type sequence of means to count as converged.
pub const MEAN_CONVERGED_RATIO: f64 = 1.02;
/// Number of trailing means inspected for convergence.
pub const MEAN_CONVERGED_WINDOW: usize = 4;
/// Growth over the trailing steps that marks a sequence of means as diverging.
pub const MEAN_DIVERGING_GROWTH: f64 = 1.5;
/// Number of trailing steps over which divergence growth is measured.
pub const MEAN_DIVERGING_STEPS: usize = 8;

/// Successive-ratio threshold for stabilisation of dyadic and ring-family sups.
pub const STABLE_RATIO: f64 = 1.05;
/// Number of trailing values inspected for stabilisation.
pub const STABLE_WINDOW: usize = 4;

/// Largest ratio `a[i+1]/a[i]` among the last `window` entries.
pub fn max_trailing_ratio(values: &[f64], window: usize) -> Option<f64> {
    if window < 2 || values.len() < window {
        return None;
    }
    let tail = &values[values.len() - window..];
    tail.windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else if w[1] > 0.0 { f64::INFINITY } else { 1.0 })
        .reduce(f64::max)
}

/// Growth `a[n-1] / a[n-1-steps]`.
pub fn trailing_growth(values: &[f64], steps: usize) -> Option<f64> {
    if values.len() <= steps {
        return None;
    }
    let last = values[values.len() - 1];
    let first = values[values.len() - 1 - steps];
    Some(if first > 0.0 { last / first } else { f64::INFINITY })
}

/// Classification rule for sequences of integral means along a radial schedule: converged when
/// the last four successive ratios stay below 1.02, diverging when the means grow by 1.5× over
/// the last eight steps.
pub fn classify_means(values: &[f64]) -> Classification {
    if values.iter().any(|v| !v.is_finite()) {
        return Classification::Diverging;
    }
    if let Some(g) = trailing_growth(values, MEAN_DIVERGING_STEPS) {
        if g >= MEAN_DIVERGING_GROWTH {
            return Classification::Diverging;
        }
    }
    match max_trailing_ratio(values, MEAN_CONVERGED_WINDOW) {
        Some(r) if r < MEAN_CONVERGED_RATIO => Classification::Converged,
        _ => Classification::Undetermined,
    }
}

/// Running supremum of a sequence.
pub fn running_sup(values: &[f64]) -> Vec<f64> {
    let mut best = f64::NEG_INFINITY;
    values
        .iter()
        .map(|&v| {
            best = best.max(v);
            best
        })
        .collect()
}

/// A sup-type sequence stabilises when its running sup grows by less than 5% per step over
/// the last four entries.
pub fn stabilizes(values: &[f64]) -> bool {
    let sup = running_sup(values);
    matches!(max_trailing_ratio(&sup, STABLE_WINDOW), Some(r) if r < STABLE_RATIO)
}

/// [`stabilizes`] mapped to a [`Classification`].
pub fn classify_sup(values: &[f64]) -> Classification {
    if values.len() < STABLE_WINDOW {
        Classification::Undetermined
    } else if stabilizes(values) {
        Classification::Converged
    } else {
        Classification::Diverging
    }
}
