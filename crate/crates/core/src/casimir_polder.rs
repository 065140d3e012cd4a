//! Atom–surface interactions: an atom in medium 1 facing a uniform
//! distribution of atoms in medium 2, a thin doped slab in front of a mirror,
//! and the force on a single atom in front of an arbitrary mirror.
//!
//! Forces are reported as `f = −∂U/∂z_A` along the axis pointing from the
//! atom towards the interface, so positive values are attractive.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::greens::trace_space_integral_brute_force;
use crate::materials::{AtomModel, MaterialModel, MixtureSpec, Response};
use crate::planar_optics::{
    kappa_of, slab_reflection, transmission, CompositeMirror, CompositePart, HalfSpacePair, InterfaceMirror, Mirror, Polarization,
};
use crate::quadrature::{integrate, integrate_product_2d, Interval, QuadratureSpec};
use crate::vdw::{ForceResult, PotentialResult};

/// Polarizability attributed to an atom sitting in a dielectric host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarizability {
    /// `α(iξ)`.
    #[default]
    Bare,
    /// Local-field corrected `α(iξ)·((ε(iξ) + 2)/3)²`.
    LocalField,
}

impl Polarizability {
    pub fn apply(self, atom: &AtomModel, host_eps: f64, xi: f64) -> f64 {
        let alpha = atom.alpha(xi);
        match self {
            Polarizability::Bare => alpha,
            Polarizability::LocalField => {
                let f = (host_eps + 2.0) / 3.0;
                alpha * f * f
            }
        }
    }
}

/// Atom A at `z_A < 0` in medium 1, atoms B spread uniformly through medium 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSystem {
    pub pair: HalfSpacePair,
    pub atom_a: AtomModel,
    pub z_a: f64,
    pub atom_b: AtomModel,
    pub density_b: f64,
}

impl DistributionSystem {
    pub fn new(pair: HalfSpacePair, atom_a: AtomModel, z_a: f64, atom_b: AtomModel, density_b: f64) -> Result<Self> {
        if !(z_a < 0.0 && z_a.is_finite()) {
            return Err(invalid("z_a", format!("must be finite and < 0, got {z_a}")));
        }
        if !(density_b >= 0.0 && density_b.is_finite()) {
            return Err(invalid("density_b", format!("must be finite and >= 0, got {density_b}")));
        }
        Ok(Self {
            pair,
            atom_a,
            z_a,
            atom_b,
            density_b,
        })
    }

    pub fn with_z_a(&self, z_a: f64) -> Result<Self> {
        Self::new(self.pair.clone(), self.atom_a, z_a, self.atom_b, self.density_b)
    }

    pub fn with_density(&self, density_b: f64) -> Result<Self> {
        Self::new(self.pair.clone(), self.atom_a, self.z_a, self.atom_b, density_b)
    }

    pub fn distance(&self) -> f64 {
        -self.z_a
    }

    /// `N_B·α_B(0)`.
    pub fn expansion_parameter(&self) -> f64 {
        self.density_b * self.atom_b.alpha_static
    }

    pub fn is_dilute(&self) -> bool {
        self.expansion_parameter() <= crate::materials::DILUTE_THRESHOLD
    }

    pub fn composite_mirror(&self, part: CompositePart) -> CompositeMirror {
        CompositeMirror {
            pair: self.pair.clone(),
            dopant: self.atom_b,
            density: self.density_b,
            part,
        }
    }

    fn xi_scale(&self) -> f64 {
        let mut hi = self.atom_a.resonance.max(self.atom_b.resonance);
        for m in [&self.pair.medium1, &self.pair.medium2] {
            if let Some((_, w)) = m.resonance_range() {
                hi = hi.max(w);
            }
        }
        hi.min(1.0 / self.distance())
    }
}

/// `k` window of `e^{−2κ₁d}`: `1/(2d)` when static, `√(n₁ξ/d)` once retarded.
fn k_interval(host: Response, xi: f64, distance: f64) -> Interval {
    Interval::SemiInfinite {
        start: 0.0,
        scale: (0.5 / distance).max((host.n() * xi / distance).sqrt()),
    }
}

fn xi_interval(scale: f64) -> Interval {
    Interval::SemiInfinite { start: 0.0, scale }
}

/// `μ₁μ₂(k/κ₂²)[P₁P₂ t^p_{12}t^p_{21} + ξ⁴ t^s_{12}t^s_{21}]` with `P_i = (2κ_i² − n_i²ξ²)/n_i²`,
/// together with `κ₁`.
#[inline]
fn distribution_kernel(m1: Response, m2: Response, xi: f64, k: f64) -> (f64, f64) {
    let kappa1 = kappa_of(m1, xi, k);
    let kappa2 = kappa_of(m2, xi, k);
    let xi2 = xi * xi;
    let p1 = (2.0 * kappa1 * kappa1 - m1.n_squared() * xi2) / m1.n_squared();
    let p2 = (2.0 * kappa2 * kappa2 - m2.n_squared() * xi2) / m2.n_squared();
    let tp = transmission(Polarization::P, m1, m2, kappa1, kappa2) * transmission(Polarization::P, m2, m1, kappa2, kappa1);
    let ts = transmission(Polarization::S, m1, m2, kappa1, kappa2) * transmission(Polarization::S, m2, m1, kappa2, kappa1);
    let kernel = m1.mu * m2.mu * k / (kappa2 * kappa2) * (p1 * p2 * tp + xi2 * xi2 * ts);
    (kernel, kappa1)
}

/// Integral of `N_B α_A α_B kernel·w(κ₁)e^{2κ₁z_A}` over `ξ` and `k`.
fn distribution_integral(
    sys: &DistributionSystem,
    pol: Polarizability,
    weight: impl Fn(f64) -> f64,
    quad: &QuadratureSpec,
) -> Result<PotentialResult> {
    if sys.density_b == 0.0 {
        return Ok(PotentialResult::exact(0.0));
    }
    let z_a = sys.z_a;
    let out = integrate_product_2d(
        |xi, k| {
            if xi == 0.0 && k == 0.0 {
                return Ok(0.0);
            }
            let exponent = 2.0 * kappa_of(sys.pair.medium1.response(xi), xi, k) * z_a;
            if exponent < -745.0 {
                return Ok(0.0);
            }
            let (m1, m2) = sys.pair.responses(xi);
            let (kernel, kappa1) = distribution_kernel(m1, m2, xi, k);
            let alphas = pol.apply(&sys.atom_a, m1.eps, xi) * pol.apply(&sys.atom_b, m2.eps, xi);
            Ok(alphas * kernel * weight(kappa1) * exponent.exp())
        },
        xi_interval(sys.xi_scale()),
        |xi| k_interval(sys.pair.medium1.response(xi), xi, sys.distance()),
        quad,
    )?;
    Ok(PotentialResult::from_outcome(out, sys.density_b))
}

/// Potential of atom A due to the whole distribution of atoms B.
pub fn cp_distribution_potential(sys: &DistributionSystem, quad: &QuadratureSpec) -> Result<PotentialResult> {
    cp_distribution_potential_with(sys, Polarizability::Bare, quad)
}

pub fn cp_distribution_potential_with(sys: &DistributionSystem, pol: Polarizability, quad: &QuadratureSpec) -> Result<PotentialResult> {
    let mut u = distribution_integral(sys, pol, |kappa1| 0.5 / kappa1, quad)?;
    u.value = -u.value;
    Ok(u)
}

/// `−∂U/∂z_A` of [`cp_distribution_potential_with`], integrated directly from
/// the differentiated integrand.
pub fn cp_distribution_force(sys: &DistributionSystem, pol: Polarizability, quad: &QuadratureSpec) -> Result<ForceResult> {
    distribution_integral(sys, pol, |_| 1.0, quad)
}

/// Pairwise sum of two-atom potentials over the half-space `z_B ≥ 0`, with the
/// dyadic trace assembled and integrated numerically at every frequency.
///
/// Slow. Intended as an oracle for [`cp_distribution_potential`].
pub fn cp_pairwise_oracle(sys: &DistributionSystem, quad: &QuadratureSpec) -> Result<PotentialResult> {
    if sys.density_b == 0.0 {
        return Ok(PotentialResult::exact(0.0));
    }
    let inner = quad.nested();
    let mut inner_evals = 0usize;
    let out = integrate(
        |xi| {
            // Envelope e^{2n₁ξz_A} bounds the trace; below this it is subnormal.
            if 2.0 * sys.pair.medium1.response(xi).n() * xi * sys.z_a < -700.0 {
                return Ok(0.0);
            }
            let trace = trace_space_integral_brute_force(&sys.pair, sys.z_a, xi, &inner)?;
            inner_evals += trace.n_evals;
            Ok(xi.powi(4) * sys.atom_a.alpha(xi) * sys.atom_b.alpha(xi) * trace.value)
        },
        xi_interval(sys.xi_scale()),
        quad,
    )?;
    let mut u = PotentialResult::from_outcome(out, -sys.density_b / (2.0 * PI));
    u.n_evals = inner_evals;
    Ok(u)
}

/// Thin slab of doped host at distance `d` from a mirror, host medium between.
#[derive(Debug, Clone)]
pub struct SlabSystem<M> {
    pub host: MaterialModel,
    pub slab: MixtureSpec,
    pub mirror: M,
    pub separation: f64,
    pub thickness: f64,
}

impl<M: Mirror> SlabSystem<M> {
    pub fn new(slab: MixtureSpec, mirror: M, separation: f64, thickness: f64) -> Result<Self> {
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(invalid("separation", format!("must be finite and > 0, got {separation}")));
        }
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(invalid("thickness", format!("must be finite and > 0, got {thickness}")));
        }
        Ok(Self {
            host: slab.host.clone(),
            slab,
            mirror,
            separation,
            thickness,
        })
    }

    /// `κ d_s` at the dominant wave number `κ ≈ 1/(2d)`.
    pub fn typical_optical_thickness(&self) -> f64 {
        0.5 * self.thickness / self.separation
    }

    pub fn is_thin(&self) -> bool {
        self.typical_optical_thickness() < crate::planar_optics::THIN_SLAB_THRESHOLD
    }

    fn xi_scale(&self) -> f64 {
        let mut hi = self.slab.dopant.resonance;
        for range in [self.host.resonance_range(), self.mirror.resonance_range()].into_iter().flatten() {
            hi = hi.max(range.1);
        }
        hi.min(1.0 / self.separation)
    }
}

/// Force on the slab, with the multiple-reflection denominator kept in full:
/// `(1/2π²)∫dξ∫dk kκ₁ Σ_q x/(1 − x)`, `x = r^q R^q e^{−2κ₁d}`.
pub fn slab_force<M: Mirror>(sys: &SlabSystem<M>, quad: &QuadratureSpec) -> Result<ForceResult> {
    let d = sys.separation;
    let out = integrate_product_2d(
        |xi, k| {
            if xi == 0.0 && k == 0.0 {
                return Ok(0.0);
            }
            let host = sys.host.response(xi);
            let kappa1 = kappa_of(host, xi, k);
            let decay = (-2.0 * kappa1 * d).exp();
            if decay == 0.0 {
                return Ok(0.0);
            }
            let slab = sys.slab.response(xi)?;
            let mut sum = 0.0;
            for q in Polarization::ALL {
                let r = slab_reflection(host, slab, q, xi, k, sys.thickness).exact;
                let x = r * sys.mirror.reflection(q, xi, k)? * decay;
                if x.abs() >= 1.0 {
                    return Err(Error::ResonantDenominator { product: x.abs(), xi, k });
                }
                sum += x / (1.0 - x);
            }
            Ok(k * kappa1 * sum)
        },
        xi_interval(sys.xi_scale()),
        |xi| k_interval(sys.host.response(xi), xi, d),
        quad,
    )?;
    Ok(PotentialResult::from_outcome(out, 1.0 / (2.0 * PI * PI)))
}

/// Force on a single atom at distance `d_a` from a mirror across `host`:
/// `(1/π)∫dξ μ₁α ∫dk k e^{−2κ₁d}[(2κ₁²/n₁² − ξ²)R^p − ξ²R^s]`.
pub fn cp_atom_force<M: Mirror + ?Sized>(
    host: &MaterialModel,
    atom: &AtomModel,
    pol: Polarizability,
    mirror: &M,
    d_a: f64,
    quad: &QuadratureSpec,
) -> Result<ForceResult> {
    if !(d_a > 0.0 && d_a.is_finite()) {
        return Err(invalid("d_a", format!("must be finite and > 0, got {d_a}")));
    }
    let mut hi = atom.resonance;
    for range in [host.resonance_range(), mirror.resonance_range()].into_iter().flatten() {
        hi = hi.max(range.1);
    }
    let out = integrate_product_2d(
        |xi, k| {
            if xi == 0.0 && k == 0.0 {
                return Ok(0.0);
            }
            let m1 = host.response(xi);
            let kappa1 = kappa_of(m1, xi, k);
            let decay = (-2.0 * kappa1 * d_a).exp();
            if decay == 0.0 {
                return Ok(0.0);
            }
            let xi2 = xi * xi;
            let rp = mirror.reflection(Polarization::P, xi, k)?;
            let rs = mirror.reflection(Polarization::S, xi, k)?;
            let bracket = (2.0 * kappa1 * kappa1 / m1.n_squared() - xi2) * rp - xi2 * rs;
            Ok(m1.mu * pol.apply(atom, m1.eps, xi) * k * decay * bracket)
        },
        xi_interval(hi.min(1.0 / d_a)),
        |xi| k_interval(host.response(xi), xi, d_a),
        quad,
    )?;
    Ok(PotentialResult::from_outcome(out, 1.0 / PI))
}

/// `f_s/(N d_s f_A)`: the slab force relative to the sum of single-atom forces
/// it reduces to for dilute thin slabs.
pub fn slab_to_atom_ratio<M: Mirror>(sys: &SlabSystem<M>, quad: &QuadratureSpec) -> Result<f64> {
    let fs = slab_force(sys, quad)?.require("slab force")?;
    let fa = cp_atom_force(&sys.host, &sys.slab.dopant, Polarizability::LocalField, &sys.mirror, sys.separation, quad)?
        .require("atom force")?;
    Ok(fs.value / (sys.slab.number_density * sys.thickness * fa.value))
}

/// Force on atom A split into the bare-interface part and the part linear in `N_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceDecomposition {
    /// With `R^q = r^q_{12}`.
    pub medium2: ForceResult,
    /// With `R^q` replaced by its first-order density correction.
    pub distribution: ForceResult,
    /// With the exact doped-mirror coefficient.
    pub exact: ForceResult,
}

impl ForceDecomposition {
    pub fn first_order(&self) -> f64 {
        self.medium2.value + self.distribution.value
    }

    /// Part of the exact force beyond first order in `N_B`.
    pub fn remainder(&self) -> f64 {
        self.exact.value - self.first_order()
    }
}

pub fn force_decomposition(sys: &DistributionSystem, quad: &QuadratureSpec) -> Result<ForceDecomposition> {
    let host = &sys.pair.medium1;
    let d = sys.distance();
    let pol = Polarizability::LocalField;
    let interface = InterfaceMirror { pair: sys.pair.clone() };
    let medium2 = cp_atom_force(host, &sys.atom_a, pol, &interface, d, quad)?;
    let distribution = if sys.density_b == 0.0 {
        PotentialResult::exact(0.0)
    } else {
        cp_atom_force(host, &sys.atom_a, pol, &sys.composite_mirror(CompositePart::CorrectionOnly), d, quad)?
    };
    let exact = cp_atom_force(host, &sys.atom_a, pol, &sys.composite_mirror(CompositePart::Exact), d, quad)?;
    Ok(ForceDecomposition {
        medium2,
        distribution,
        exact,
    })
}

/// Distribution force from the doped mirror against the gradient of the
/// distribution potential, both with local-field polarizabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub mirror_force: f64,
    /// Central difference with step `10⁻³|z_A|`.
    pub gradient_fd: f64,
    /// Quadrature of the differentiated integrand.
    pub gradient_direct: f64,
    pub discrepancy_fd: f64,
    pub discrepancy_direct: f64,
    pub converged: bool,
}

impl ConsistencyReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.discrepancy_fd.max(self.discrepancy_direct)
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn local_field_consistency(sys: &DistributionSystem, quad: &QuadratureSpec) -> Result<ConsistencyReport> {
    let pol = Polarizability::LocalField;
    let mirror = sys.composite_mirror(CompositePart::CorrectionOnly);
    let mirror_force = cp_atom_force(&sys.pair.medium1, &sys.atom_a, pol, &mirror, sys.distance(), quad)?;

    let h = 1e-3 * sys.distance();
    let up = cp_distribution_potential_with(&sys.with_z_a(sys.z_a + h)?, pol, quad)?;
    let down = cp_distribution_potential_with(&sys.with_z_a(sys.z_a - h)?, pol, quad)?;
    let gradient_fd = -(up.value - down.value) / (2.0 * h);
    let direct = cp_distribution_force(sys, pol, quad)?;

    Ok(ConsistencyReport {
        mirror_force: mirror_force.value,
        gradient_fd,
        gradient_direct: direct.value,
        discrepancy_fd: relative_gap(mirror_force.value, gradient_fd),
        discrepancy_direct: relative_gap(mirror_force.value, direct.value),
        converged: mirror_force.converged && up.converged && down.converged && direct.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::OscillatorTerm;
    use crate::planar_optics::PerfectMirror;
    use proptest::prelude::*;

    fn atom() -> AtomModel {
        AtomModel::new(1.0, 1.0).unwrap()
    }

    fn quad() -> QuadratureSpec {
        QuadratureSpec {
            max_evals: 4_000_000,
            ..QuadratureSpec::with_rel_tol(1e-8)
        }
    }

    fn dielectric_pair() -> HalfSpacePair {
        HalfSpacePair::new(MaterialModel::lorentz(1.8, 1.3, 0.2).unwrap(), MaterialModel::lorentz(2.6, 0.7, 0.0).unwrap())
    }

    fn magnetic_pair() -> HalfSpacePair {
        HalfSpacePair::new(
            MaterialModel::lorentz(2.0, 1.1, 0.0).unwrap(),
            MaterialModel::new(
                vec![OscillatorTerm::new(1.4, 0.9, 0.1).unwrap()],
                vec![OscillatorTerm::new(0.5, 0.6, 0.0).unwrap()],
            )
            .unwrap(),
        )
    }

    fn log_slope(f: impl Fn(f64) -> f64, x0: f64) -> f64 {
        let x1 = x0 * 1.2;
        (f(x1).abs().ln() - f(x0).abs().ln()) / (x1.ln() - x0.ln())
    }

    #[test]
    fn distribution_potential_sign_linearity_and_zero_density() {
        let sys = DistributionSystem::new(dielectric_pair(), atom(), -0.8, atom(), 1e-3).unwrap();
        let u = cp_distribution_potential(&sys, &quad()).unwrap();
        assert!(u.value < 0.0 && u.converged);

        let doubled = cp_distribution_potential(&sys.with_density(2e-3).unwrap(), &quad()).unwrap();
        assert!((doubled.value / u.value - 2.0).abs() < 1e-12);

        let none = cp_distribution_potential(&sys.with_density(0.0).unwrap(), &quad()).unwrap();
        assert_eq!(none.value, 0.0);

        let far = cp_distribution_potential(&sys.with_z_a(-1.0).unwrap(), &quad()).unwrap();
        assert!(far.value.abs() < u.value.abs());
    }

    #[test]
    fn distribution_potential_scales_with_atom_polarizability() {
        let sys = DistributionSystem::new(magnetic_pair(), atom(), -0.5, atom(), 1e-3).unwrap();
        let stronger = DistributionSystem {
            atom_a: AtomModel::new(3.0, 1.0).unwrap(),
            ..sys.clone()
        };
        let u = cp_distribution_potential(&sys, &quad()).unwrap().value;
        let v = cp_distribution_potential(&stronger, &quad()).unwrap().value;
        assert!((v / u - 3.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_potential_power_laws_in_vacuum() {
        let potential = |d: f64| {
            let sys = DistributionSystem::new(HalfSpacePair::default(), atom(), -d, atom(), 1e-3).unwrap();
            cp_distribution_potential(&sys, &quad()).unwrap().value
        };
        let near = log_slope(potential, 1e-3);
        let far = log_slope(potential, 1e3);
        assert!((near + 3.0).abs() < 0.05, "{near}");
        assert!((far + 4.0).abs() < 0.05, "{far}");
    }

    #[test]
    fn perfect_mirror_force_power_laws() {
        let force = |d: f64| {
            cp_atom_force(&MaterialModel::vacuum(), &atom(), Polarizability::Bare, &PerfectMirror, d, &quad())
                .unwrap()
                .value
        };
        assert!(force(1.0) > 0.0);
        let near = log_slope(force, 1e-3);
        let far = log_slope(force, 1e3);
        assert!((near + 4.0).abs() < 0.05, "{near}");
        assert!((far + 5.0).abs() < 0.05, "{far}");
    }

    #[test]
    fn perfect_mirror_far_field_closed_form() {
        // Retarded atom–mirror energy −3α/(8πd⁴) gives the force 3α/(2πd⁵).
        let d = 1e4;
        let f = cp_atom_force(&MaterialModel::vacuum(), &atom(), Polarizability::Bare, &PerfectMirror, d, &quad()).unwrap();
        let expected = 3.0 / (2.0 * PI * d.powi(5));
        assert!((f.value / expected - 1.0).abs() < 1e-3, "{}", f.value / expected);
    }

    struct Transparent;

    impl Mirror for Transparent {
        fn reflection(&self, _: Polarization, _: f64, _: f64) -> Result<f64> {
            Ok(0.0)
        }
    }

    #[test]
    fn vanishing_reflection_gives_no_force() {
        let f = cp_atom_force(&MaterialModel::vacuum(), &atom(), Polarizability::Bare, &Transparent, 1.0, &quad()).unwrap();
        assert_eq!(f.value, 0.0);

        let host = MaterialModel::lorentz(1.5, 1.0, 0.0).unwrap();
        let mix = MixtureSpec::new(host, atom(), 0.0).unwrap();
        let sys = SlabSystem::new(mix, PerfectMirror, 1.0, 0.05).unwrap();
        assert_eq!(slab_force(&sys, &quad()).unwrap().value, 0.0);
    }

    #[test]
    fn slab_force_is_attractive_and_decreasing() {
        let mix = MixtureSpec::new(MaterialModel::vacuum(), atom(), 1e-3).unwrap();
        let near = SlabSystem::new(mix.clone(), PerfectMirror, 0.5, 0.01).unwrap();
        let far = SlabSystem::new(mix, PerfectMirror, 1.0, 0.01).unwrap();
        let fn_ = slab_force(&near, &quad()).unwrap().value;
        let ff = slab_force(&far, &quad()).unwrap().value;
        assert!(fn_ > ff && ff > 0.0);
    }

    struct Amplifier;

    impl Mirror for Amplifier {
        fn reflection(&self, _: Polarization, _: f64, _: f64) -> Result<f64> {
            Ok(1e6)
        }
    }

    #[test]
    fn unphysical_mirror_is_rejected() {
        let mix = MixtureSpec::new(MaterialModel::vacuum(), atom(), 1e-2).unwrap();
        let sys = SlabSystem::new(mix, Amplifier, 0.1, 0.5).unwrap();
        assert!(matches!(slab_force(&sys, &quad()), Err(Error::ResonantDenominator { .. })));
    }

    #[test]
    fn decomposition_without_dopants() {
        let sys = DistributionSystem::new(magnetic_pair(), atom(), -0.6, atom(), 0.0).unwrap();
        let parts = force_decomposition(&sys, &quad()).unwrap();
        assert_eq!(parts.distribution.value, 0.0);
        assert!((parts.exact.value / parts.medium2.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_remainder_is_second_order() {
        let base = DistributionSystem::new(dielectric_pair(), atom(), -0.6, atom(), 0.0).unwrap();
        let q = QuadratureSpec {
            max_evals: 4_000_000,
            ..QuadratureSpec::with_rel_tol(1e-11)
        };
        let remainder = |n: f64| force_decomposition(&base.with_density(n).unwrap(), &q).unwrap().remainder();
        let (n0, n1) = (1e-3, 2e-3);
        let exponent = (remainder(n1).abs() / remainder(n0).abs()).ln() / 2f64.ln();
        assert!((exponent - 2.0).abs() < 0.1, "{exponent}");

        let parts = force_decomposition(&base.with_density(n0).unwrap(), &q).unwrap();
        assert!(parts.distribution.value > 0.0);
    }

    #[test]
    fn local_field_identity_in_vacuum() {
        let sys = DistributionSystem::new(HalfSpacePair::default(), atom(), -0.7, atom(), 1e-3).unwrap();
        let q = QuadratureSpec {
            max_evals: 4_000_000,
            ..QuadratureSpec::with_rel_tol(1e-10)
        };
        let report = local_field_consistency(&sys, &q).unwrap();
        assert!(report.max_discrepancy() < 1e-5, "{report:?}");
        let bare = cp_distribution_force(&sys, Polarizability::Bare, &q).unwrap().value;
        assert!((bare / report.gradient_direct - 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn passive_media_attract_monotonically(
            eps1 in 1.0f64..4.0,
            eps2 in 1.0f64..6.0,
            mu2 in 1.0f64..2.0,
            d in 0.05f64..5.0,
        ) {
            let pair = HalfSpacePair::new(
                MaterialModel::lorentz(eps1, 1.2, 0.0).unwrap(),
                MaterialModel::with_background(vec![OscillatorTerm::new(eps2 - 1.0, 0.8, 0.1).unwrap()], vec![], 1.0, mu2).unwrap(),
            );
            let q = QuadratureSpec::with_rel_tol(1e-7);
            let sys = DistributionSystem::new(pair, atom(), -d, atom(), 1e-3).unwrap();
            let farther = sys.with_z_a(-1.5 * d).unwrap();
            let u = cp_distribution_potential(&sys, &q).unwrap().value;
            let v = cp_distribution_potential(&farther, &q).unwrap().value;
            prop_assert!(u < v && v < 0.0);
            let f = cp_distribution_force(&sys, Polarizability::LocalField, &q).unwrap().value;
            let g = cp_distribution_force(&farther, Polarizability::LocalField, &q).unwrap().value;
            prop_assert!(f > g && g > 0.0);
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(DistributionSystem::new(HalfSpacePair::default(), atom(), 0.5, atom(), 1.0).is_err());
        assert!(DistributionSystem::new(HalfSpacePair::default(), atom(), -0.5, atom(), -1.0).is_err());
        let mix = MixtureSpec::new(MaterialModel::vacuum(), atom(), 1e-3).unwrap();
        assert!(SlabSystem::new(mix.clone(), PerfectMirror, 0.0, 0.1).is_err());
        assert!(SlabSystem::new(mix, PerfectMirror, 1.0, -0.1).is_err());
        assert!(cp_atom_force(&MaterialModel::vacuum(), &atom(), Polarizability::Bare, &PerfectMirror, -1.0, &quad()).is_err());
    }
}
