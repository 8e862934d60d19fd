//! Numerical tools for Hardy spaces of quasiregular mappings on the unit disc.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadrature`]: adaptive Gauss–Kronrod integration with geometric grading toward
//!   boundary singularities and a divergence detector.
//! * [`disc_geometry`]: cones, boundary arcs, Carleson squares, hyperbolic balls.
//! * [`boundary_maps`]: circle homeomorphisms, their Beurling–Ahlfors extensions and the
//!   map-theoretic estimators (inverse Lipschitz modulus, quasisymmetry, dilatation, cone
//!   images, circular distortion).
//! * [`function_spaces`]: analytic test functions and quasiregular composites `g ∘ φ`.
//! * [`functionals`]: integral means, Hardy norms, boundary and maximal `Lᵖ` norms, weighted
//!   area integrals and the average derivative `a_f`.
//! * [`carleson`]: pushforward measures and Carleson-type testers.

pub mod boundary_maps;
pub mod carleson;
pub mod classify;
pub mod differential;
pub mod disc_geometry;
mod error;
pub mod function_spaces;
pub mod functionals;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};

/// Complex numbers used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Default aperture of non-tangential cones.
pub const DEFAULT_APERTURE: f64 = 2.0;

/// Default ratio `c` of hyperbolic balls `B(z, c(1-|z|))`.
pub const DEFAULT_BALL_RATIO: f64 = 0.5;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 42;
