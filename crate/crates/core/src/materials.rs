//! Material response on the imaginary frequency axis.
//!
//! All quantities are dimensionless: frequencies are in units of a reference
//! frequency `ω_ref`, lengths in `c/ω_ref`, polarizabilities in `(c/ω_ref)³`
//! and number densities in `(c/ω_ref)⁻³`. Permittivities and permeabilities
//! are Drude–Lorentz oscillator sums evaluated directly at `ω = iξ`, where
//! they are real, at least one and non-increasing in `ξ`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Product `N·α` above which first-order density expansions are flagged.
pub const DILUTE_THRESHOLD: f64 = 1e-2;

/// One Lorentz oscillator: `strength·ω₀²/(ω₀² + ξ² + γξ)` at imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorTerm {
    pub strength: f64,
    pub resonance: f64,
    pub damping: f64,
}

impl OscillatorTerm {
    pub fn new(strength: f64, resonance: f64, damping: f64) -> Result<Self> {
        let term = Self {
            strength,
            resonance,
            damping,
        };
        term.validate()?;
        Ok(term)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strength >= 0.0 && self.strength.is_finite()) {
            return Err(invalid("strength", format!("must be finite and >= 0, got {}", self.strength)));
        }
        if !(self.resonance > 0.0 && self.resonance.is_finite()) {
            return Err(invalid("resonance", format!("must be finite and > 0, got {}", self.resonance)));
        }
        if !(self.damping >= 0.0 && self.damping.is_finite()) {
            return Err(invalid("damping", format!("must be finite and >= 0, got {}", self.damping)));
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        let w2 = self.resonance * self.resonance;
        self.strength * w2 / (w2 + xi * xi + self.damping * xi)
    }
}

/// Permittivity and permeability of one medium.
///
/// `eps_background`/`mu_background` are the `ξ → ∞` limits. They default to one;
/// values above one give a dispersionless offset, which is how constant
/// ("static") media are represented.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    eps_terms: Vec<OscillatorTerm>,
    mu_terms: Vec<OscillatorTerm>,
    eps_background: f64,
    mu_background: f64,
}

impl Default for MaterialModel {
    fn default() -> Self {
        Self::vacuum()
    }
}

impl MaterialModel {
    pub fn vacuum() -> Self {
        Self {
            eps_terms: Vec::new(),
            mu_terms: Vec::new(),
            eps_background: 1.0,
            mu_background: 1.0,
        }
    }

    pub fn new(eps_terms: Vec<OscillatorTerm>, mu_terms: Vec<OscillatorTerm>) -> Result<Self> {
        Self::with_background(eps_terms, mu_terms, 1.0, 1.0)
    }

    pub fn with_background(
        eps_terms: Vec<OscillatorTerm>,
        mu_terms: Vec<OscillatorTerm>,
        eps_background: f64,
        mu_background: f64,
    ) -> Result<Self> {
        for term in eps_terms.iter().chain(&mu_terms) {
            term.validate()?;
        }
        if !(eps_background >= 1.0 && eps_background.is_finite()) {
            return Err(invalid("eps_background", format!("must be finite and >= 1, got {eps_background}")));
        }
        if !(mu_background >= 1.0 && mu_background.is_finite()) {
            return Err(invalid("mu_background", format!("must be finite and >= 1, got {mu_background}")));
        }
        Ok(Self {
            eps_terms,
            mu_terms,
            eps_background,
            mu_background,
        })
    }

    /// Frequency-independent medium with the given `ε` and `μ`.
    pub fn dispersionless(eps: f64, mu: f64) -> Result<Self> {
        Self::with_background(Vec::new(), Vec::new(), eps, mu)
    }

    /// Nonmagnetic single-oscillator dielectric with static permittivity `eps_static`.
    pub fn lorentz(eps_static: f64, resonance: f64, damping: f64) -> Result<Self> {
        if !(eps_static >= 1.0) {
            return Err(invalid("eps_static", format!("must be >= 1, got {eps_static}")));
        }
        Self::new(vec![OscillatorTerm::new(eps_static - 1.0, resonance, damping)?], Vec::new())
    }

    pub fn eps_terms(&self) -> &[OscillatorTerm] {
        &self.eps_terms
    }

    pub fn mu_terms(&self) -> &[OscillatorTerm] {
        &self.mu_terms
    }

    pub fn eps_background(&self) -> f64 {
        self.eps_background
    }

    pub fn mu_background(&self) -> f64 {
        self.mu_background
    }

    pub fn eps(&self, xi: f64) -> f64 {
        self.eps_background + self.eps_terms.iter().map(|t| t.eval(xi)).sum::<f64>()
    }

    pub fn mu(&self, xi: f64) -> f64 {
        self.mu_background + self.mu_terms.iter().map(|t| t.eval(xi)).sum::<f64>()
    }

    pub fn eps_static(&self) -> f64 {
        self.eps(0.0)
    }

    pub fn mu_static(&self) -> f64 {
        self.mu(0.0)
    }

    pub fn is_magnetic(&self) -> bool {
        self.mu_background != 1.0 || self.mu_terms.iter().any(|t| t.strength > 0.0)
    }

    /// `(ε, μ)` at `iξ`.
    pub fn response(&self, xi: f64) -> Response {
        Response {
            eps: self.eps(xi),
            mu: self.mu(xi),
        }
    }

    /// Smallest and largest oscillator resonance, if any.
    pub fn resonance_range(&self) -> Option<(f64, f64)> {
        self.eps_terms
            .iter()
            .chain(&self.mu_terms)
            .filter(|t| t.strength > 0.0)
            .map(|t| t.resonance)
            .fold(None, |acc, w| match acc {
                None => Some((w, w)),
                Some((lo, hi)) => Some((lo.min(w), hi.max(w))),
            })
    }
}

/// Local permittivity and permeability at one imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Response {
    pub eps: f64,
    pub mu: f64,
}

impl Response {
    pub const VACUUM: Response = Response { eps: 1.0, mu: 1.0 };

    #[inline]
    pub fn n_squared(&self) -> f64 {
        self.eps * self.mu
    }

    #[inline]
    pub fn n(&self) -> f64 {
        self.n_squared().sqrt()
    }
}

pub fn eval_eps(m: &MaterialModel, xi: f64) -> f64 {
    m.eps(xi)
}

pub fn eval_mu(m: &MaterialModel, xi: f64) -> f64 {
    m.mu(xi)
}

pub fn eval_alpha(a: &AtomModel, xi: f64) -> f64 {
    a.alpha(xi)
}

/// Ground-state atom with a single undamped oscillator polarizability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomModel {
    pub alpha_static: f64,
    pub resonance: f64,
}

impl AtomModel {
    pub fn new(alpha_static: f64, resonance: f64) -> Result<Self> {
        let atom = Self {
            alpha_static,
            resonance,
        };
        atom.validate()?;
        Ok(atom)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_static > 0.0 && self.alpha_static.is_finite()) {
            return Err(invalid("alpha_static", format!("must be finite and > 0, got {}", self.alpha_static)));
        }
        if !(self.resonance > 0.0 && self.resonance.is_finite()) {
            return Err(invalid("resonance", format!("must be finite and > 0, got {}", self.resonance)));
        }
        Ok(())
    }

    /// `α(iξ) = α₀·ω₀²/(ω₀² + ξ²)`.
    #[inline]
    pub fn alpha(&self, xi: f64) -> f64 {
        let w2 = self.resonance * self.resonance;
        self.alpha_static * w2 / (w2 + xi * xi)
    }
}

/// Whether the Clausius–Mossotti local-field factor is kept to first order in `N·α` or exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PolarizabilityOrder {
    Exact,
    #[default]
    Linear,
}

/// Effective polarizability of an atom embedded in a Clausius–Mossotti host.
///
/// Exact: `α((ε+2)/3)² / (1 − (4π/3)Nα(ε+2)/3)`; linear: `α((ε+2)/3)²`.
pub fn effective_polarizability(host_eps: f64, alpha: f64, density: f64, order: PolarizabilityOrder) -> Result<f64> {
    if !(host_eps >= 1.0) {
        return Err(invalid("host_eps", format!("must be >= 1, got {host_eps}")));
    }
    if !(alpha > 0.0) {
        return Err(invalid("alpha", format!("must be > 0, got {alpha}")));
    }
    if !(density >= 0.0) {
        return Err(invalid("density", format!("must be >= 0, got {density}")));
    }
    let lorentz = (host_eps + 2.0) / 3.0;
    let linear = alpha * lorentz * lorentz;
    match order {
        PolarizabilityOrder::Linear => Ok(linear),
        PolarizabilityOrder::Exact => {
            let denominator = 1.0 - 4.0 * PI / 3.0 * density * alpha * lorentz;
            if denominator <= 0.0 {
                return Err(Error::ClausiusMossottiDivergence { denominator });
            }
            Ok(linear / denominator)
        }
    }
}

/// Host medium doped with a uniform distribution of foreign atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    pub host: MaterialModel,
    pub dopant: AtomModel,
    pub number_density: f64,
    pub order: PolarizabilityOrder,
}

impl MixtureSpec {
    pub fn new(host: MaterialModel, dopant: AtomModel, number_density: f64) -> Result<Self> {
        if !(number_density >= 0.0 && number_density.is_finite()) {
            return Err(invalid("number_density", format!("must be finite and >= 0, got {number_density}")));
        }
        Ok(Self {
            host,
            dopant,
            number_density,
            order: PolarizabilityOrder::Linear,
        })
    }

    pub fn with_order(mut self, order: PolarizabilityOrder) -> Self {
        self.order = order;
        self
    }

    /// `N·α(0)`, the expansion parameter of all first-order density results.
    pub fn expansion_parameter(&self) -> f64 {
        self.number_density * self.dopant.alpha_static
    }

    pub fn is_dilute(&self) -> bool {
        self.expansion_parameter() <= DILUTE_THRESHOLD
    }

    /// Effective dopant polarizability `α̃(iξ)` in this host.
    pub fn effective_alpha(&self, xi: f64) -> Result<f64> {
        effective_polarizability(self.host.eps(xi), self.dopant.alpha(xi), self.number_density, self.order)
    }

    /// `ε_host(iξ) + 4πN·α̃(iξ)`.
    pub fn eps(&self, xi: f64) -> Result<f64> {
        let host = self.host.eps(xi);
        if self.number_density == 0.0 {
            return Ok(host);
        }
        Ok(host + 4.0 * PI * self.number_density * self.effective_alpha(xi)?)
    }

    /// Dopant atoms are electrically polarizable only.
    pub fn mu(&self, xi: f64) -> f64 {
        self.host.mu(xi)
    }

    pub fn response(&self, xi: f64) -> Result<Response> {
        Ok(Response {
            eps: self.eps(xi)?,
            mu: self.mu(xi),
        })
    }
}

pub fn mixture_eps(mix: &MixtureSpec, xi: f64) -> Result<f64> {
    mix.eps(xi)
}
