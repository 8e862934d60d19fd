//! Analytic test functions with known Hardy-space behaviour and quasiregular composites
//! `f = g ∘ φ`.

use std::fmt;

use crate::boundary_maps::{DiscQCMap, Moebius};
use crate::differential::Differential;
use crate::{Error, Result, C64};

const ONE: C64 = C64::new(1.0, 0.0);

/// A boundary point where `|f(z)|` blows up like `|z − e^{iθ}|^{−exponent}` (for analytic
/// functions) or like `|t − θ|^{−exponent}` along the boundary (for composites).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub angle: f64,
    pub exponent: f64,
}

/// Hardy-space membership known by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpMembership {
    Member,
    NonMember,
    Unknown,
}

/// Boundary value of a map at a boundary angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryTrace {
    Finite(C64),
    /// The boundary point is mapped onto a pole of the analytic factor.
    Infinite,
}

impl BoundaryTrace {
    pub fn norm(&self) -> f64 {
        match self {
            BoundaryTrace::Finite(v) => v.norm(),
            BoundaryTrace::Infinite => f64::INFINITY,
        }
    }
}

/// A map of the disc into the plane on which the functionals operate.
pub trait PlanarMap: Sync {
    fn name(&self) -> String;

    fn try_eval(&self, z: C64) -> Result<C64>;

    /// Real differential at `z`.
    fn try_differential(&self, z: C64) -> Result<Differential>;

    /// `f′(z)` when the map is analytic.
    fn analytic_derivative(&self, z: C64) -> Option<C64>;

    /// Boundary value at `e^{it}`.
    fn boundary_value(&self, t: f64) -> BoundaryTrace;

    /// Boundary singularities in the angle variable.
    fn singularities(&self) -> Vec<Singularity>;

    /// Further angles where the integrand is not smooth (kinks of a boundary map).
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Angles toward which angular quadrature should be graded.
    fn focus_angles(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.singularities().iter().map(|s| s.angle).collect();
        v.extend(self.kinks());
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Jacobian determinant.
    fn try_jacobian(&self, z: C64) -> Result<f64> {
        Ok(self.try_differential(z)?.det())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Constant,
    Monomial(u32),
    /// `(1 − w̄z)^{−2/p}`.
    HardyKernel { w: C64, p: f64 },
    /// `1/(1 − z)`.
    Cauchy,
    Moebius(Moebius),
}

/// An analytic function on the disc, multiplied by a scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticFunction {
    kind: Kind,
    scale: C64,
}

impl AnalyticFunction {
    pub fn constant(c: C64) -> Self {
        Self { kind: Kind::Constant, scale: c }
    }

    /// `z ↦ zⁿ`.
    pub fn monomial(n: u32) -> Self {
        Self { kind: Kind::Monomial(n), scale: ONE }
    }

    pub fn moebius(a: C64) -> Result<Self> {
        Ok(Self {
            kind: Kind::Moebius(Moebius::new(a)?),
            scale: ONE,
        })
    }

    /// `λ·g`.
    pub fn scaled(&self, lambda: C64) -> Self {
        Self {
            kind: self.kind,
            scale: self.scale * lambda,
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let v = match self.kind {
            Kind::Constant => ONE,
            Kind::Monomial(n) => z.powu(n),
            Kind::HardyKernel { w, p } => {
                if w == C64::new(0.0, 0.0) {
                    ONE
                } else {
                    // Re(1 − w̄z) > 0 on the disc, so the principal branch is continuous there.
                    (ONE - w.conj() * z).powf(-2.0 / p)
                }
            }
            Kind::Cauchy => ONE / (ONE - z),
            Kind::Moebius(m) => m.apply(z),
        };
        self.scale * v
    }

    pub fn derivative(&self, z: C64) -> C64 {
        let v = match self.kind {
            Kind::Constant => C64::new(0.0, 0.0),
            Kind::Monomial(0) => C64::new(0.0, 0.0),
            Kind::Monomial(n) => z.powu(n - 1) * n as f64,
            Kind::HardyKernel { w, p } => {
                if w == C64::new(0.0, 0.0) {
                    C64::new(0.0, 0.0)
                } else {
                    w.conj() * (2.0 / p) * (ONE - w.conj() * z).powf(-2.0 / p - 1.0)
                }
            }
            Kind::Cauchy => {
                let d = ONE - z;
                ONE / (d * d)
            }
            Kind::Moebius(m) => m.derivative(z),
        };
        self.scale * v
    }

    /// Value at the boundary point `e^{is}`; poles give [`BoundaryTrace::Infinite`].
    pub fn boundary_value(&self, s: f64) -> BoundaryTrace {
        match self.kind {
            Kind::Cauchy => {
                // 1 − e^{is} = −2i·sin(s/2)·e^{is/2}
                let sn = (0.5 * s).sin();
                if sn == 0.0 {
                    BoundaryTrace::Infinite
                } else {
                    let d = C64::new(0.0, -2.0 * sn) * C64::from_polar(1.0, 0.5 * s);
                    BoundaryTrace::Finite(self.scale / d)
                }
            }
            _ => BoundaryTrace::Finite(self.eval(C64::from_polar(1.0, s))),
        }
    }

    pub fn singularities(&self) -> Vec<Singularity> {
        match self.kind {
            Kind::Cauchy => vec![Singularity { angle: 0.0, exponent: 1.0 }],
            Kind::HardyKernel { w, p } if w.norm() > 0.0 => vec![Singularity {
                angle: w.arg(),
                exponent: 2.0 / p,
            }],
            _ => Vec::new(),
        }
    }

    /// Membership in `𝓗ᵖ` known from the construction.
    pub fn hp_membership(&self, p: f64) -> HpMembership {
        if !(p > 0.0) {
            return HpMembership::Unknown;
        }
        match self.kind {
            Kind::Cauchy if p < 1.0 => HpMembership::Member,
            Kind::Cauchy => HpMembership::NonMember,
            _ => HpMembership::Member,
        }
    }

    pub fn is_constant(&self) -> bool {
        let zero = C64::new(0.0, 0.0);
        let trivial = match self.kind {
            Kind::Constant | Kind::Monomial(0) => true,
            Kind::HardyKernel { w, .. } => w == zero,
            _ => false,
        };
        trivial || self.scale == zero
    }
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            Kind::Constant => "1".to_string(),
            Kind::Monomial(n) => format!("z^{n}"),
            Kind::HardyKernel { w, p } => format!("(1-conj({w})z)^(-2/{p})"),
            Kind::Cauchy => "1/(1-z)".to_string(),
            Kind::Moebius(m) => format!("moebius({})", m.parameter()),
        };
        if self.scale == ONE {
            write!(f, "{base}")
        } else {
            write!(f, "({})*{base}", self.scale)
        }
    }
}

/// `g(z) = (1 − w̄z)^{−2/p}` with the principal branch; `w = 0` gives the constant 1.
pub fn hardy_kernel(w: C64, p: f64) -> Result<AnalyticFunction> {
    if !(w.norm() < 1.0) {
        return Err(Error::outside(w));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p must be positive, got {p}")));
    }
    Ok(AnalyticFunction {
        kind: Kind::HardyKernel { w, p },
        scale: ONE,
    })
}

/// `g(z) = 1/(1 − z)`.
pub fn cauchy_kernel() -> AnalyticFunction {
    AnalyticFunction {
        kind: Kind::Cauchy,
        scale: ONE,
    }
}

impl PlanarMap for AnalyticFunction {
    fn name(&self) -> String {
        self.to_string()
    }

    fn try_eval(&self, z: C64) -> Result<C64> {
        if !(z.norm() < 1.0) {
            return Err(Error::outside(z));
        }
        Ok(self.eval(z))
    }

    fn try_differential(&self, z: C64) -> Result<Differential> {
        if !(z.norm() < 1.0) {
            return Err(Error::outside(z));
        }
        Ok(Differential::complex(self.derivative(z)))
    }

    fn analytic_derivative(&self, z: C64) -> Option<C64> {
        Some(self.derivative(z))
    }

    fn boundary_value(&self, t: f64) -> BoundaryTrace {
        AnalyticFunction::boundary_value(self, t)
    }

    fn singularities(&self) -> Vec<Singularity> {
        AnalyticFunction::singularities(self)
    }
}

/// The quasiregular map `f = g ∘ φ`.
#[derive(Debug, Clone)]
pub struct QuasiregularMap {
    g: AnalyticFunction,
    phi: DiscQCMap,
}

/// `g ∘ φ`.
pub fn compose(g: AnalyticFunction, phi: DiscQCMap) -> QuasiregularMap {
    QuasiregularMap { g, phi }
}

impl QuasiregularMap {
    pub fn g(&self) -> &AnalyticFunction {
        &self.g
    }

    pub fn phi(&self) -> &DiscQCMap {
        &self.phi
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.g.eval(self.phi.eval(z))
    }

    /// `Df = g′(φ(z))·Dφ(z)`.
    pub fn differential(&self, z: C64) -> Differential {
        self.try_differential(z)
            .unwrap_or_else(|e| panic!("{}: no differential at {z}: {e}", self.name()))
    }

    /// `Jf = |g′(φ)|²·Jφ`.
    pub fn jacobian(&self, z: C64) -> f64 {
        self.differential(z).det()
    }

    /// `λ·f`.
    pub fn scaled(&self, lambda: C64) -> Self {
        Self {
            g: self.g.scaled(lambda),
            phi: self.phi.clone(),
        }
    }
}

impl PlanarMap for QuasiregularMap {
    fn name(&self) -> String {
        format!("{}∘{}", self.g, self.phi.name())
    }

    fn try_eval(&self, z: C64) -> Result<C64> {
        Ok(self.g.eval(self.phi.try_eval(z)?))
    }

    fn try_differential(&self, z: C64) -> Result<Differential> {
        let (w, dphi) = self.phi.try_eval_differential(z)?;
        Ok(Differential::complex(self.g.derivative(w)).compose(&dphi))
    }

    fn analytic_derivative(&self, z: C64) -> Option<C64> {
        if self.phi.is_conformal() {
            let (w, d) = self.phi.try_eval_differential(z).ok()?;
            Some(self.g.derivative(w) * d.dz())
        } else {
            None
        }
    }

    fn boundary_value(&self, t: f64) -> BoundaryTrace {
        self.g.boundary_value(self.phi.boundary().alpha(t))
    }

    /// Singularities of `g` pulled back through the boundary map. Near `t₀ = α⁻¹(s₀)`,
    /// `|e^{iα(t)} − e^{is₀}| ≈ |t − t₀|^e` where `e` is the order of `α` at `t₀`, so the
    /// exponent is multiplied by `e`.
    fn singularities(&self) -> Vec<Singularity> {
        let h = self.phi.boundary();
        self.g
            .singularities()
            .into_iter()
            .map(|s| {
                let t0 = h.alpha_inverse(s.angle);
                Singularity {
                    angle: t0,
                    exponent: s.exponent * h.local_exponent(t0),
                }
            })
            .collect()
    }

    fn kinks(&self) -> Vec<f64> {
        self.phi.boundary().kinks()
    }
}
