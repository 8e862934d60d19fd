//! Pass/fail bookkeeping for the acceptance suite in `tests/acceptance.rs`.

use std::time::{Duration, Instant};

/// Outcome of one numbered criterion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs criteria in order, printing one line each as it finishes.
#[derive(Debug, Default)]
pub struct Suite {
    outcomes: Vec<Outcome>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    /// `check` returns whether the criterion holds and a one-line account of the numbers. An
    /// error counts as a failure.
    pub fn run<F, E>(&mut self, id: u32, name: &'static str, budget: Option<Duration>, check: F)
    where
        F: FnOnce() -> Result<(bool, String), E>,
        E: std::fmt::Display,
    {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(b) = budget {
            if elapsed > b {
                passed = false;
                detail.push_str(&format!("; over the {:.0} s budget", b.as_secs_f64()));
            }
        }
        let outcome = Outcome {
            id,
            name,
            passed,
            detail,
            elapsed,
        };
        println!("{}", outcome.line());
        self.outcomes.push(outcome);
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "acceptance: {} passed, {} failed of {}",
            self.outcomes.len() - self.failures(),
            self.failures(),
            self.outcomes.len()
        )
    }
}
