//! Boundary homeomorphisms of the circle, their quasiconformal extensions to the disc and
//! estimators of their distortion.

mod estimators;
mod extension;
mod homeo;

use std::fmt;
use std::str::FromStr;

pub use estimators::{
    circular_distortion_check, cone_image_aperture, dilatation_estimate, dyadic_arcs,
    lipschitz_modulus_inverse, quasisymmetry_modulus, DilatationSummary, DyadicProfile,
    CONE_DEPTH_LEVELS, DEFAULT_FD_SCALE,
};
pub use extension::{disc_to_half_plane, half_plane_to_disc, DiscQCMap};
pub use homeo::{BoundaryHomeo, Moebius};

use crate::{Error, Result, C64};

/// The named maps used by experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapCatalogEntry {
    Identity,
    /// `α(t) = sign(t)·√(π|t|)`.
    Thm2Sqrt,
    /// `α(t) = sign(t)·π·(|t|/π)^γ`.
    Power(f64),
    /// Boundary action of the Möbius automorphism with parameter `a`.
    Moebius(C64),
}

impl MapCatalogEntry {
    /// The four maps the experiments sweep over.
    pub fn standard() -> [MapCatalogEntry; 4] {
        [
            MapCatalogEntry::Identity,
            MapCatalogEntry::Moebius(C64::new(0.5, 0.0)),
            MapCatalogEntry::Thm2Sqrt,
            MapCatalogEntry::Power(2.0),
        ]
    }

    /// The boundary homeomorphism of this entry.
    pub fn homeo(&self) -> Result<BoundaryHomeo> {
        make_map(*self)
    }

    /// The disc map used by experiments: exact interior maps for the conformal entries and the
    /// Beurling–Ahlfors extension otherwise.
    pub fn disc_map(&self) -> Result<DiscQCMap> {
        match *self {
            MapCatalogEntry::Identity => Ok(DiscQCMap::identity()),
            MapCatalogEntry::Moebius(a) => DiscQCMap::moebius(a),
            _ => ba_extend(&make_map(*self)?),
        }
    }
}

impl fmt::Display for MapCatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapCatalogEntry::Identity => write!(f, "identity"),
            MapCatalogEntry::Thm2Sqrt => write!(f, "thm2_sqrt"),
            MapCatalogEntry::Power(g) => write!(f, "power:{g}"),
            MapCatalogEntry::Moebius(a) if a.im == 0.0 => write!(f, "moebius:{}", a.re),
            MapCatalogEntry::Moebius(a) => write!(f, "moebius:{},{}", a.re, a.im),
        }
    }
}

impl FromStr for MapCatalogEntry {
    type Err = Error;

    /// Parses `identity`, `thm2_sqrt`, `power:<γ>`, `moebius:<re>` or `moebius:<re>,<im>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p)),
            None => (s, None),
        };
        let bad = |msg: &str| Error::InvalidParameter(format!("map `{s}`: {msg}"));
        let numbers = |p: &str| -> Result<Vec<f64>> {
            p.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| bad("parameters must be numbers")))
                .collect()
        };
        let entry = match (name, params) {
            ("identity", None) => MapCatalogEntry::Identity,
            ("thm2_sqrt", None) => MapCatalogEntry::Thm2Sqrt,
            ("power", Some(p)) => match numbers(p)?[..] {
                [g] => MapCatalogEntry::Power(g),
                _ => return Err(bad("power takes one exponent")),
            },
            ("moebius", Some(p)) => match numbers(p)?[..] {
                [re] => MapCatalogEntry::Moebius(C64::new(re, 0.0)),
                [re, im] => MapCatalogEntry::Moebius(C64::new(re, im)),
                _ => return Err(bad("moebius takes a real or a re,im pair")),
            },
            ("identity" | "thm2_sqrt", Some(_)) => return Err(bad("takes no parameters")),
            ("power" | "moebius", None) => return Err(bad("missing parameters")),
            _ => return Err(bad("unknown map name")),
        };
        make_map(entry)?;
        Ok(entry)
    }
}

/// The boundary homeomorphism of a catalog entry.
pub fn make_map(entry: MapCatalogEntry) -> Result<BoundaryHomeo> {
    match entry {
        MapCatalogEntry::Identity => Ok(BoundaryHomeo::identity()),
        MapCatalogEntry::Thm2Sqrt => Ok(BoundaryHomeo::sqrt_map()),
        MapCatalogEntry::Power(g) => BoundaryHomeo::power(g),
        MapCatalogEntry::Moebius(a) => BoundaryHomeo::moebius(a),
    }
}

/// Beurling–Ahlfors extension of `h` to the disc, built through the upper half-plane.
pub fn ba_extend(h: &BoundaryHomeo) -> Result<DiscQCMap> {
    DiscQCMap::beurling_ahlfors(h.clone())
}
