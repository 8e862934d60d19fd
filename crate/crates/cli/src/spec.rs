use std::fmt;
use std::str::FromStr;

use qchardy_core::boundary_maps::MapCatalogEntry;
use qchardy_core::{DEFAULT_APERTURE, DEFAULT_SEED};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Thm1,
    Thm2,
    Thm3,
    ThmA,
    Lemma1,
    AfConformal,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Thm1,
        Experiment::Thm2,
        Experiment::Thm3,
        Experiment::ThmA,
        Experiment::Lemma1,
        Experiment::AfConformal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Thm1 => "thm1",
            Experiment::Thm2 => "thm2",
            Experiment::Thm3 => "thm3",
            Experiment::ThmA => "thmA",
            Experiment::Lemma1 => "lemma1",
            Experiment::AfConformal => "af_conformal",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| CliError::UnknownExperiment(s.to_string()))
    }
}

impl Serialize for Experiment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Experiment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod map_name {
    use super::*;

    pub fn serialize<S: Serializer>(m: &MapCatalogEntry, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&m.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<MapCatalogEntry, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One experiment with all of its knobs. Which knobs an experiment reads:
///
/// | experiment     | `grid`                      | `depth`                          |
/// |----------------|-----------------------------|----------------------------------|
/// | `thm1`         | unused                      | kernel schedule and dyadic depth |
/// | `thm2`, `thm3` | maximal-function panels     | radial schedule levels           |
/// | `thmA`         | ball and square centres     | rings                            |
/// | `lemma1`       | boundary points `ξ`         | unused                           |
/// | `af_conformal` | random interior test points | unused                           |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    #[serde(with = "map_name")]
    pub map: MapCatalogEntry,
    pub p: f64,
    pub grid: usize,
    pub depth: u32,
    pub seed: u64,
    /// Cone aperture `c`.
    pub aperture: f64,
}

impl ExperimentSpec {
    /// The defaults of `experiment`.
    pub fn new(experiment: Experiment) -> Self {
        let (map, p, grid, depth) = match experiment {
            Experiment::Thm1 => (MapCatalogEntry::Thm2Sqrt, 2.0, 16, 16),
            Experiment::Thm2 => (MapCatalogEntry::Thm2Sqrt, 1.0, 8, 20),
            Experiment::Thm3 => (MapCatalogEntry::Thm2Sqrt, 2.0, 8, 20),
            Experiment::ThmA => (MapCatalogEntry::Thm2Sqrt, 2.0, 16, 12),
            Experiment::Lemma1 => (MapCatalogEntry::Power(2.0), 2.0, 16, 16),
            Experiment::AfConformal => (MapCatalogEntry::Moebius(qchardy_core::C64::new(0.5, 0.0)), 2.0, 8, 16),
        };
        Self {
            experiment,
            map,
            p,
            grid,
            depth,
            seed: DEFAULT_SEED,
            aperture: DEFAULT_APERTURE,
        }
    }

    pub fn with_map(mut self, map: MapCatalogEntry) -> Self {
        self.map = map;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::InvalidSpec(msg));
        if !(self.p > 0.0 && self.p.is_finite()) {
            return bad(format!("p must be positive, got {}", self.p));
        }
        if self.grid == 0 {
            return bad("grid must be positive".into());
        }
        if !(1..=30).contains(&self.depth) {
            return bad(format!("depth must lie in 1..=30, got {}", self.depth));
        }
        if !(self.aperture > 1.0 && self.aperture.is_finite()) {
            return bad(format!("cone aperture must exceed 1, got {}", self.aperture));
        }
        if self.experiment == Experiment::ThmA && self.depth < 4 {
            return bad("thmA needs at least 4 rings".into());
        }
        if self.experiment == Experiment::AfConformal
            && !matches!(self.map, MapCatalogEntry::Identity | MapCatalogEntry::Moebius(_))
        {
            return Err(CliError::InvalidPairing {
                experiment: self.experiment.to_string(),
                map: self.map.to_string(),
                reason: "a_f = |f′| is a statement about conformal maps; use identity or moebius".into(),
            });
        }
        Ok(())
    }
}
