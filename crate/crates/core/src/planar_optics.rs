//! Perpendicular wave numbers and reflection/transmission coefficients of
//! planar interfaces at imaginary frequency.
//!
//! Medium 1 fills `z < 0`, medium 2 fills `z > 0`. At `ω = iξ` every quantity
//! here is real: `κᵢ = √(nᵢ²ξ² + k²)` and, with `γᵖ = ε₁/ε₂`, `γˢ = μ₁/μ₂`,
//!
//! ```text
//! r^q = (κ₁ − γ^q κ₂)/(κ₁ + γ^q κ₂)
//! t^q = √(γ^q/γˢ)·(1 + r^q) = √(γ^q/γˢ)·2κ₁/(κ₁ + γ^q κ₂)
//! ```
//!
//! Quantities that the dispersion-force derivations expand to first order in a
//! small density (thin slabs, doped mirrors) are exposed both exactly and in
//! expanded form so the expansions can be checked rather than assumed.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::materials::{AtomModel, MaterialModel, MixtureSpec, Response};

/// `κ_s·d_s` above which the thin-slab linearization is flagged.
pub const THIN_SLAB_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// Transverse magnetic.
    P,
    /// Transverse electric.
    S,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::P, Polarization::S];
}

/// Two semi-infinite media: `medium1` on `z < 0`, `medium2` on `z > 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HalfSpacePair {
    pub medium1: MaterialModel,
    pub medium2: MaterialModel,
}

impl HalfSpacePair {
    pub fn new(medium1: MaterialModel, medium2: MaterialModel) -> Self {
        Self { medium1, medium2 }
    }

    pub fn single(medium: MaterialModel) -> Self {
        Self {
            medium1: medium.clone(),
            medium2: medium,
        }
    }

    /// The same interface seen from the other side.
    pub fn swapped(&self) -> Self {
        Self {
            medium1: self.medium2.clone(),
            medium2: self.medium1.clone(),
        }
    }

    pub fn responses(&self, xi: f64) -> (Response, Response) {
        (self.medium1.response(xi), self.medium2.response(xi))
    }
}

fn check_wavevector(xi: f64, k: f64) -> Result<()> {
    if !(xi >= 0.0) {
        return Err(invalid("xi", format!("must be >= 0, got {xi}")));
    }
    if !(k >= 0.0) {
        return Err(invalid("k", format!("must be >= 0, got {k}")));
    }
    if xi == 0.0 && k == 0.0 {
        return Err(Error::DegenerateWavevector);
    }
    Ok(())
}

/// `√(n²ξ² + k²)` for a local response.
#[inline]
pub fn kappa_of(response: Response, xi: f64, k: f64) -> f64 {
    (response.n_squared() * xi * xi + k * k).sqrt()
}

/// Perpendicular wave number `κ = √(n²(iξ)ξ² + k²)` in medium `m`.
pub fn kappa(m: &MaterialModel, xi: f64, k: f64) -> Result<f64> {
    check_wavevector(xi, k)?;
    Ok(kappa_of(m.response(xi), xi, k))
}

#[inline]
fn gamma(q: Polarization, m1: Response, m2: Response) -> f64 {
    match q {
        Polarization::P => m1.eps / m2.eps,
        Polarization::S => m1.mu / m2.mu,
    }
}

/// Reflection coefficient `r^q_{12}` from local responses and wave numbers.
#[inline]
pub fn reflection(q: Polarization, m1: Response, m2: Response, kappa1: f64, kappa2: f64) -> f64 {
    let g = gamma(q, m1, m2);
    (kappa1 - g * kappa2) / (kappa1 + g * kappa2)
}

/// Transmission coefficient `t^q_{12}` from local responses and wave numbers.
#[inline]
pub fn transmission(q: Polarization, m1: Response, m2: Response, kappa1: f64, kappa2: f64) -> f64 {
    let g = gamma(q, m1, m2);
    let norm = match q {
        Polarization::P => (g / gamma(Polarization::S, m1, m2)).sqrt(),
        Polarization::S => 1.0,
    };
    norm * 2.0 * kappa1 / (kappa1 + g * kappa2)
}

pub fn fresnel_r(pair: &HalfSpacePair, q: Polarization, xi: f64, k: f64) -> Result<f64> {
    check_wavevector(xi, k)?;
    let (m1, m2) = pair.responses(xi);
    Ok(reflection(q, m1, m2, kappa_of(m1, xi, k), kappa_of(m2, xi, k)))
}

pub fn fresnel_t(pair: &HalfSpacePair, q: Polarization, xi: f64, k: f64) -> Result<f64> {
    check_wavevector(xi, k)?;
    let (m1, m2) = pair.responses(xi);
    Ok(transmission(q, m1, m2, kappa_of(m1, xi, k), kappa_of(m2, xi, k)))
}

/// Reflection of a slab embedded in its host, exact and linearized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabReflection {
    /// `r_{1s}(1 − e^{−2κ_s d_s})/(1 − r_{1s}² e^{−2κ_s d_s})`.
    pub exact: f64,
    /// `2 r_{1s} κ_s d_s`.
    pub linearized: f64,
    /// `r_{1s}`, the single host–slab interface coefficient.
    pub interface: f64,
    /// `κ_s d_s`; the linearization needs this to be small.
    pub optical_thickness: f64,
}

impl SlabReflection {
    pub fn is_thin(&self) -> bool {
        self.optical_thickness < THIN_SLAB_THRESHOLD
    }
}

/// Slab of `(ε_s, μ_s)` and thickness `d_s`, symmetrically bounded by `host`.
pub fn slab_reflection(host: Response, slab: Response, q: Polarization, xi: f64, k: f64, thickness: f64) -> SlabReflection {
    let kappa1 = kappa_of(host, xi, k);
    let kappa_s = kappa_of(slab, xi, k);
    let r1s = reflection(q, host, slab, kappa1, kappa_s);
    let optical_thickness = kappa_s * thickness;
    let decay = (-2.0 * optical_thickness).exp();
    // 1 − e^{−2x} without cancellation for thin slabs.
    let transmitted = -(-2.0 * optical_thickness).exp_m1();
    SlabReflection {
        exact: r1s * transmitted / (1.0 - r1s * r1s * decay),
        linearized: 2.0 * r1s * optical_thickness,
        interface: r1s,
        optical_thickness,
    }
}

pub fn thin_slab_r(
    host: &MaterialModel,
    slab_eps: f64,
    slab_mu: f64,
    q: Polarization,
    xi: f64,
    k: f64,
    thickness: f64,
) -> Result<SlabReflection> {
    check_wavevector(xi, k)?;
    if !(thickness > 0.0) {
        return Err(invalid("thickness", format!("must be > 0, got {thickness}")));
    }
    if !(slab_eps >= 1.0 && slab_mu >= 1.0) {
        return Err(invalid("slab", format!("ε_s, μ_s must be >= 1, got ({slab_eps}, {slab_mu})")));
    }
    Ok(slab_reflection(
        host.response(xi),
        Response {
            eps: slab_eps,
            mu: slab_mu,
        },
        q,
        xi,
        k,
        thickness,
    ))
}

/// First-order host–slab coefficients for a slab with `ε_s = ε₁ + 4πNα̃`, `μ_s = μ₁`:
/// `r^p ≃ (2πNα̃/ε₁)(1 − n₁²ξ²/2κ₁²)` and `r^s ≃ −πNα̃μ₁ξ²/κ₁²`.
pub fn slab_interface_r_first_order(q: Polarization, host: Response, kappa1: f64, alpha_eff: f64, density: f64, xi: f64) -> f64 {
    let na = density * alpha_eff;
    let ratio = xi * xi / (kappa1 * kappa1);
    match q {
        Polarization::P => 2.0 * PI * na / host.eps * (1.0 - 0.5 * host.n_squared() * ratio),
        Polarization::S => -PI * na * host.mu * ratio,
    }
}

/// Linearized wave number in a doped host: `κ₁(1 + 2πNα̃μ₁ξ²/κ₁²)`.
pub fn slab_kappa_expansion(host_kappa: f64, alpha_eff: f64, density: f64, mu_host: f64, xi: f64) -> Result<f64> {
    if !(host_kappa > 0.0) {
        return Err(invalid("host_kappa", format!("must be > 0, got {host_kappa}")));
    }
    Ok(host_kappa * (1.0 + 2.0 * PI * density * alpha_eff * mu_host * xi * xi / (host_kappa * host_kappa)))
}

/// Reflection of medium 2 doped with atoms B, seen from medium 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorReflection {
    /// Coefficient of the doped interface with `ε_m = ε₂ + 4πN_Bα̃_B`.
    pub exact: f64,
    /// `r^q_{12}` + `correction`.
    pub first_order: f64,
    /// Term linear in `N_B`, built from `t^q_{12} t^q_{21}`.
    pub correction: f64,
}

/// First-order correction to `r^q_{12}` from dopants in medium 2.
///
/// `p`: `+t^p_{12}t^p_{21}·(πNα̃μ₂ξ²/κ₂²)(2κ₂²/n₂²ξ² − 1)`;
/// `s`: `−t^s_{12}t^s_{21}·πNα̃μ₂ξ²/κ₂²`. The `p` form is written as
/// `πNα̃μ₂(2κ₂² − n₂²ξ²)/(n₂²κ₂²)` so that it stays finite at `ξ = 0`.
#[allow(clippy::too_many_arguments)]
pub fn mirror_correction(q: Polarization, m1: Response, m2: Response, kappa1: f64, kappa2: f64, alpha_eff: f64, density: f64, xi: f64) -> f64 {
    let t12 = transmission(q, m1, m2, kappa1, kappa2);
    let t21 = transmission(q, m2, m1, kappa2, kappa1);
    let na = PI * density * alpha_eff * m2.mu;
    let k2sq = kappa2 * kappa2;
    match q {
        Polarization::P => t12 * t21 * na * (2.0 * k2sq - m2.n_squared() * xi * xi) / (m2.n_squared() * k2sq),
        Polarization::S => -t12 * t21 * na * xi * xi / k2sq,
    }
}

pub fn composite_mirror_r(
    pair: &HalfSpacePair,
    dopant: &AtomModel,
    density: f64,
    q: Polarization,
    xi: f64,
    k: f64,
) -> Result<MirrorReflection> {
    check_wavevector(xi, k)?;
    let mix = MixtureSpec::new(pair.medium2.clone(), *dopant, density)?;
    let (m1, m2) = pair.responses(xi);
    let mirror = mix.response(xi)?;
    let kappa1 = kappa_of(m1, xi, k);
    let kappa2 = kappa_of(m2, xi, k);
    let kappa_m = kappa_of(mirror, xi, k);
    let exact = reflection(q, m1, mirror, kappa1, kappa_m);
    let correction = mirror_correction(q, m1, m2, kappa1, kappa2, mix.effective_alpha(xi)?, density, xi);
    Ok(MirrorReflection {
        exact,
        first_order: reflection(q, m1, m2, kappa1, kappa2) + correction,
        correction,
    })
}

/// Reflection coefficients `R^q(iξ, k)` of whatever sits across medium 1.
pub trait Mirror: Sync {
    fn reflection(&self, q: Polarization, xi: f64, k: f64) -> Result<f64>;

    /// Frequency window where `R^q` varies; `None` for dispersionless mirrors.
    fn resonance_range(&self) -> Option<(f64, f64)> {
        None
    }
}

fn pair_resonances(pair: &HalfSpacePair) -> Option<(f64, f64)> {
    let ranges = [pair.medium1.resonance_range(), pair.medium2.resonance_range()];
    ranges.into_iter().flatten().reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
}

/// `R^p = 1`, `R^s = −1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PerfectMirror;

impl Mirror for PerfectMirror {
    fn reflection(&self, q: Polarization, _xi: f64, _k: f64) -> Result<f64> {
        Ok(match q {
            Polarization::P => 1.0,
            Polarization::S => -1.0,
        })
    }
}

/// Bare interface: `R^q = r^q_{12}`.
#[derive(Debug, Clone)]
pub struct InterfaceMirror {
    pub pair: HalfSpacePair,
}

impl Mirror for InterfaceMirror {
    fn reflection(&self, q: Polarization, xi: f64, k: f64) -> Result<f64> {
        fresnel_r(&self.pair, q, xi, k)
    }

    fn resonance_range(&self) -> Option<(f64, f64)> {
        pair_resonances(&self.pair)
    }
}

/// Which part of the doped-mirror coefficient a [`CompositeMirror`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositePart {
    Exact,
    FirstOrder,
    CorrectionOnly,
}

/// Medium 2 doped with a uniform density of atoms B.
#[derive(Debug, Clone)]
pub struct CompositeMirror {
    pub pair: HalfSpacePair,
    pub dopant: AtomModel,
    pub density: f64,
    pub part: CompositePart,
}

impl Mirror for CompositeMirror {
    fn reflection(&self, q: Polarization, xi: f64, k: f64) -> Result<f64> {
        let r = composite_mirror_r(&self.pair, &self.dopant, self.density, q, xi, k)?;
        Ok(match self.part {
            CompositePart::Exact => r.exact,
            CompositePart::FirstOrder => r.first_order,
            CompositePart::CorrectionOnly => r.correction,
        })
    }

    fn resonance_range(&self) -> Option<(f64, f64)> {
        let w = self.dopant.resonance;
        Some(match pair_resonances(&self.pair) {
            Some((lo, hi)) => (lo.min(w), hi.max(w)),
            None => (w, w),
        })
    }
}
