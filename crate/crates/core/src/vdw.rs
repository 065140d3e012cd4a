//! Van der Waals potential of two atoms on a common interface normal.
//!
//! With the diagonal on-axis Green function the two-atom energy is
//!
//! ```text
//! U_AB = −(1/2π) ∫dξ ξ⁴ α_A α_B [2G_∥² + G_⊥²] = −(1/2π) ∫dξ α_A α_B [2H_∥² + H_⊥²]
//! ```
//!
//! where `H = ξ²G` keeps the integrand finite at `ξ = 0`. Short- and
//! long-distance asymptotes are provided alongside the full result.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::greens::{green_rescaled, p_weights, AtomPositions};
use crate::materials::{AtomModel, Response};
use crate::planar_optics::HalfSpacePair;
use crate::quadrature::{integrate, integrate_product_2d, integrate_semi_infinite, Interval, QuadratureOutcome, QuadratureSpec};

/// Value of a computed energy or force with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialResult {
    pub value: f64,
    pub abs_err: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// Forces share the result layout of potentials.
pub type ForceResult = PotentialResult;

impl PotentialResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_err: 0.0,
            n_evals: 0,
            converged: true,
        }
    }

    pub(crate) fn from_outcome(out: QuadratureOutcome, factor: f64) -> Self {
        Self {
            value: out.value * factor,
            abs_err: out.err_est * factor.abs(),
            n_evals: out.n_evals,
            converged: out.converged,
        }
    }

    /// Turns an unconverged result into [`Error::NotConverged`](crate::Error::NotConverged).
    pub fn require(self, quantity: &'static str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(crate::Error::NotConverged {
                quantity,
                last: self.value,
                previous: f64::NAN,
                err_est: self.abs_err,
            })
        }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_err
        } else {
            self.abs_err / self.value.abs()
        }
    }
}

/// Two atoms across the interface of two half-spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceSystem {
    pub pair: HalfSpacePair,
    pub atom_a: AtomModel,
    pub atom_b: AtomModel,
    pub pos: AtomPositions,
}

impl InterfaceSystem {
    pub fn new(pair: HalfSpacePair, atom_a: AtomModel, atom_b: AtomModel, pos: AtomPositions) -> Self {
        Self {
            pair,
            atom_a,
            atom_b,
            pos,
        }
    }

    /// Geometry reflected through the interface with the roles of the atoms exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            pair: self.pair.swapped(),
            atom_a: self.atom_b,
            atom_b: self.atom_a,
            pos: self.pos.mirrored(),
        }
    }

    /// Smallest and largest characteristic frequency of atoms and media.
    ///
    /// These only steer quadrature scales and regime tags; they carry no physics.
    pub fn characteristic_frequencies(&self) -> (f64, f64) {
        let mut lo = self.atom_a.resonance.min(self.atom_b.resonance);
        let mut hi = self.atom_a.resonance.max(self.atom_b.resonance);
        for m in [&self.pair.medium1, &self.pair.medium2] {
            if let Some((a, b)) = m.resonance_range() {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        (lo, hi)
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.pos.separation(), self.characteristic_frequencies())
    }

    fn xi_scale(&self) -> f64 {
        let (_, hi) = self.characteristic_frequencies();
        hi.min(1.0 / self.pos.separation())
    }
}

/// Distance regime relative to the characteristic frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `Z·ω_max < 0.1`.
    Nonretarded,
    Intermediate,
    /// `Z·ω_min > 10`.
    Retarded,
}

impl Regime {
    pub fn classify(separation: f64, (omega_min, omega_max): (f64, f64)) -> Self {
        if separation * omega_max < 0.1 {
            Regime::Nonretarded
        } else if separation * omega_min > 10.0 {
            Regime::Retarded
        } else {
            Regime::Intermediate
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Nonretarded => "nonretarded",
            Regime::Intermediate => "intermediate",
            Regime::Retarded => "retarded",
        }
    }
}

/// Full on-axis potential: frequency integral of the numerically integrated Green function.
pub fn vdw_full(sys: &InterfaceSystem, quad: &QuadratureSpec) -> Result<PotentialResult> {
    let inner = quad.nested();
    let out = integrate_semi_infinite(
        |xi| {
            let h = green_rescaled(&sys.pair, &sys.pos, xi, &inner)?;
            Ok(sys.atom_a.alpha(xi) * sys.atom_b.alpha(xi) * h.trace_square())
        },
        sys.xi_scale(),
        quad,
    )?;
    Ok(PotentialResult::from_outcome(out, -1.0 / (2.0 * PI)))
}

/// Short-distance limit `U = −(3/πZ⁶) ∫dξ α_A α_B/ε̄²` with `ε̄ = (ε₁ + ε₂)/2`.
pub fn vdw_nonretarded(sys: &InterfaceSystem, quad: &QuadratureSpec) -> Result<PotentialResult> {
    let z6 = sys.pos.separation().powi(6);
    let (_, hi) = sys.characteristic_frequencies();
    let out = integrate_semi_infinite(
        |xi| {
            let eps_bar = 0.5 * (sys.pair.medium1.eps(xi) + sys.pair.medium2.eps(xi));
            Ok(sys.atom_a.alpha(xi) * sys.atom_b.alpha(xi) / (eps_bar * eps_bar))
        },
        hi,
        quad,
    )?;
    Ok(PotentialResult::from_outcome(out, -3.0 / (PI * z6)))
}

/// Closed form of [`vdw_nonretarded`] for a frequency-independent `ε̄`:
/// `−3α_Aα_Bω_Aω_B / (2ε̄²Z⁶(ω_A + ω_B))`.
pub fn london_closed_form(atom_a: &AtomModel, atom_b: &AtomModel, eps_bar: f64, separation: f64) -> f64 {
    let (wa, wb) = (atom_a.resonance, atom_b.resonance);
    -3.0 * atom_a.alpha_static * atom_b.alpha_static * wa * wb / (2.0 * eps_bar * eps_bar * separation.powi(6) * (wa + wb))
}

/// Long-distance limit with static material parameters:
///
/// ```text
/// U = −(360/π)·α_A(0)α_B(0)/(ε₁²n₁) ∬dp dp′ [2g_∥g_∥′ + g_⊥g_⊥′] / [(s+s′)z_B − (p+p′)z_A]⁷
/// ```
pub fn vdw_retarded(sys: &InterfaceSystem, quad: &QuadratureSpec) -> Result<PotentialResult> {
    let (m1, m2) = sys.pair.responses(0.0);
    let pos = sys.pos;
    let z = pos.separation();
    let out = integrate_product_2d(
        |p, q| {
            let (gp_par, gp_perp, sp) = p_weights(m1, m2, p);
            let (gq_par, gq_perp, sq) = p_weights(m1, m2, q);
            // Lengths in units of Z keep the kernel O(1).
            let denom = ((sp + sq) * pos.z_b - (p + q) * pos.z_a) / z;
            Ok((2.0 * gp_par * gq_par + gp_perp * gq_perp) / denom.powi(7))
        },
        Interval::SemiInfinite { start: 1.0, scale: 1.0 },
        |_| Interval::SemiInfinite { start: 1.0, scale: 1.0 },
        quad,
    )?;
    let pref = -360.0 / PI * sys.atom_a.alpha_static * sys.atom_b.alpha_static / (m1.eps * m1.eps * m1.n() * z.powi(7));
    Ok(PotentialResult::from_outcome(out, pref))
}

/// Retarded single-medium potential `−23α_A(0)α_B(0)/(4πε²nZ⁷)`.
pub fn vdw_single_medium(n0: f64, eps0: f64, atom_a: &AtomModel, atom_b: &AtomModel, separation: f64) -> Result<PotentialResult> {
    if !(n0 > 0.0 && eps0 > 0.0) {
        return Err(invalid("medium", format!("n and ε must be > 0, got ({n0}, {eps0})")));
    }
    if !(separation > 0.0) {
        return Err(invalid("separation", format!("must be > 0, got {separation}")));
    }
    Ok(PotentialResult::exact(
        -23.0 * atom_a.alpha_static * atom_b.alpha_static / (4.0 * PI * eps0 * eps0 * n0 * separation.powi(7)),
    ))
}

/// One point of a relative-potential curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    /// `z_B/Z`.
    pub fraction: f64,
    pub ratio: f64,
    pub abs_err: f64,
    pub converged: bool,
}

/// Retarded potential relative to the single-medium value of medium 1,
/// `U_AB/U⁽¹⁾_AB`, at fixed separation as atom B moves away from the interface.
pub fn ratio_scan(
    pair: &HalfSpacePair,
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    fractions: &[f64],
    separation: f64,
    quad: &QuadratureSpec,
) -> Result<Vec<RatioPoint>> {
    let m1: Response = pair.medium1.response(0.0);
    let reference = vdw_single_medium(m1.n(), m1.eps, atom_a, atom_b, separation)?.value;
    fractions
        .iter()
        .map(|&fraction| {
            let pos = AtomPositions::from_fraction(separation, fraction)?;
            let sys = InterfaceSystem::new(pair.clone(), *atom_a, *atom_b, pos);
            let u = vdw_retarded(&sys, quad)?;
            Ok(RatioPoint {
                fraction,
                ratio: u.value / reference,
                abs_err: u.abs_err / reference.abs(),
                converged: u.converged,
            })
        })
        .collect()
}

/// Full potential relative to its nonretarded limit along the same scan.
pub fn nonretarded_ratio_scan(
    pair: &HalfSpacePair,
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    fractions: &[f64],
    separation: f64,
    quad: &QuadratureSpec,
) -> Result<Vec<RatioPoint>> {
    fractions
        .iter()
        .map(|&fraction| {
            let pos = AtomPositions::from_fraction(separation, fraction)?;
            let sys = InterfaceSystem::new(pair.clone(), *atom_a, *atom_b, pos);
            let full = vdw_full(&sys, quad)?;
            let limit = vdw_nonretarded(&sys, quad)?;
            let ratio = full.value / limit.value;
            Ok(RatioPoint {
                fraction,
                ratio,
                abs_err: ratio * (full.relative_error() + limit.relative_error()),
                converged: full.converged && limit.converged,
            })
        })
        .collect()
}

/// Default separation for long-distance scans: `10³/ω_min`.
pub fn default_retarded_separation(omega_min: f64) -> f64 {
    1e3 / omega_min
}

/// Frequency integral of `α_A(iξ)α_B(iξ)`, used by several closed-form checks.
pub fn polarizability_overlap(atom_a: &AtomModel, atom_b: &AtomModel, quad: &QuadratureSpec) -> Result<QuadratureOutcome> {
    integrate(
        |xi| Ok(atom_a.alpha(xi) * atom_b.alpha(xi)),
        Interval::SemiInfinite {
            start: 0.0,
            scale: atom_a.resonance.max(atom_b.resonance),
        },
        quad,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{MaterialModel, OscillatorTerm};
    use proptest::prelude::*;

    fn atom() -> AtomModel {
        AtomModel::new(1.0, 1.0).unwrap()
    }

    fn vacuum_system(z_a: f64, z_b: f64) -> InterfaceSystem {
        InterfaceSystem::new(HalfSpacePair::default(), atom(), atom(), AtomPositions::new(z_a, z_b).unwrap())
    }

    fn quad() -> QuadratureSpec {
        QuadratureSpec::with_rel_tol(1e-8)
    }

    #[test]
    fn london_and_casimir_polder_limits_in_vacuum() {
        let near = vacuum_system(-5e-4, 5e-4);
        let u = vdw_full(&near, &quad()).unwrap();
        let london = -0.75 / 1e-3f64.powi(6);
        assert!((u.value / london - 1.0).abs() < 1e-2, "{}", u.value / london);

        let far = vacuum_system(-500.0, 500.0);
        let u = vdw_full(&far, &quad()).unwrap();
        let cp = -23.0 / (4.0 * PI * 1e3f64.powi(7));
        assert!((u.value / cp - 1.0).abs() < 2e-2, "{}", u.value / cp);
    }

    #[test]
    fn nonretarded_closed_form_and_scaling() {
        let sys = vacuum_system(-0.3, 0.2);
        let u = vdw_nonretarded(&sys, &quad()).unwrap();
        let exact = london_closed_form(&atom(), &atom(), 1.0, 0.5);
        assert!((u.value / exact - 1.0).abs() < 1e-8);
        assert!((exact * 0.5f64.powi(6) + 0.75).abs() < 1e-15);

        let doubled = InterfaceSystem {
            pair: HalfSpacePair::single(MaterialModel::dispersionless(2.0, 1.0).unwrap()),
            ..sys.clone()
        };
        let u2 = vdw_nonretarded(&doubled, &quad()).unwrap();
        assert_eq!(u.value / u2.value, 4.0);
    }

    #[test]
    fn retarded_reduces_to_single_medium_value() {
        let m = MaterialModel::dispersionless(2.5, 1.0).unwrap();
        let sys = InterfaceSystem::new(HalfSpacePair::single(m), atom(), atom(), AtomPositions::new(-0.7, 0.3).unwrap());
        let u = vdw_retarded(&sys, &QuadratureSpec::with_rel_tol(1e-9)).unwrap();
        let reference = vdw_single_medium(2.5f64.sqrt(), 2.5, &atom(), &atom(), 1.0).unwrap();
        assert!((u.value / reference.value - 1.0).abs() < 1e-6, "{}", u.value / reference.value);
    }

    #[test]
    fn single_medium_closed_form_relations() {
        let a = atom();
        let vac = vdw_single_medium(1.0, 1.0, &a, &a, 2.0).unwrap().value;
        let dense = vdw_single_medium(2.0, 4.0, &a, &a, 2.0).unwrap().value;
        assert!((vac / dense - 32.0).abs() < 1e-12);
    }

    #[test]
    fn mirror_symmetry_of_full_potential() {
        let pair = HalfSpacePair::new(
            MaterialModel::lorentz(2.2, 0.8, 0.1).unwrap(),
            MaterialModel::new(
                vec![OscillatorTerm::new(1.0, 1.5, 0.0).unwrap()],
                vec![OscillatorTerm::new(0.3, 0.6, 0.0).unwrap()],
            )
            .unwrap(),
        );
        let sys = InterfaceSystem::new(pair, AtomModel::new(0.5, 1.2).unwrap(), atom(), AtomPositions::new(-0.4, 1.1).unwrap());
        let u = vdw_full(&sys, &quad()).unwrap();
        let v = vdw_full(&sys.mirrored(), &quad()).unwrap();
        assert!((u.value / v.value - 1.0).abs() < 1e-7);
        assert!(u.value < 0.0);
    }

    #[test]
    fn asymptotic_matching_over_three_decades() {
        let pair = HalfSpacePair::new(MaterialModel::lorentz(2.0, 0.8, 0.1).unwrap(), MaterialModel::lorentz(3.0, 1.5, 0.0).unwrap());
        let atom_b = AtomModel::new(2.0, 0.7).unwrap();
        let gap = |z: f64, retarded: bool| {
            let sys = InterfaceSystem::new(pair.clone(), atom(), atom_b, AtomPositions::from_fraction(z, 0.3).unwrap());
            let full = vdw_full(&sys, &quad()).unwrap().value;
            let limit = if retarded { vdw_retarded(&sys, &quad()) } else { vdw_nonretarded(&sys, &quad()) };
            (full / limit.unwrap().value - 1.0).abs()
        };
        let near: Vec<f64> = [1e-1, 1e-2, 1e-3].iter().map(|&z| gap(z, false)).collect();
        let far: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&z| gap(z, true)).collect();
        for w in [&near, &far] {
            assert!(w[0] > w[1] && w[1] > w[2], "{w:?}");
        }
        assert!(near[2] < 1e-5 && far[2] < 1e-4, "{near:?} {far:?}");
    }

    #[test]
    fn retarded_limit_at_interface_is_finite() {
        let pair = HalfSpacePair::new(MaterialModel::dispersionless(2.0, 1.0).unwrap(), MaterialModel::dispersionless(4.0, 1.0).unwrap());
        let at = |z_b: f64| {
            let sys = InterfaceSystem::new(pair.clone(), atom(), atom(), AtomPositions::new(z_b - 1.0, z_b).unwrap());
            vdw_retarded(&sys, &quad()).unwrap().value
        };
        let (a, b) = (at(1e-6), at(1e-8));
        assert!(a.is_finite() && a < 0.0);
        assert!((a / b - 1.0).abs() < 1e-5);
    }

    #[test]
    fn ratio_scan_endpoints_agree_with_full_route() {
        // Endpoints of the two curves, frozen from the (p, p') quadrature and
        // confirmed against the full frequency integral at Z = 10⁴.
        let golden = [(0.5, 1.709_571_393_7, 2.835_917_183_8), (2.0, 0.501_324_067_9, 0.302_212_381_4)];
        for (ratio_eps, lo, hi) in golden {
            let pair = HalfSpacePair::new(
                MaterialModel::dispersionless(2.0, 1.0).unwrap(),
                MaterialModel::dispersionless(2.0 * ratio_eps, 1.0).unwrap(),
            );
            let pts = ratio_scan(&pair, &atom(), &atom(), &[0.02, 0.98], 1e3, &quad()).unwrap();
            assert!((pts[0].ratio / lo - 1.0).abs() < 1e-8, "{}", pts[0].ratio);
            assert!((pts[1].ratio / hi - 1.0).abs() < 1e-8, "{}", pts[1].ratio);

            let sys = InterfaceSystem::new(pair.clone(), atom(), atom(), AtomPositions::from_fraction(1e4, 0.98).unwrap());
            let full = vdw_full(&sys, &quad()).unwrap().value;
            let u1 = vdw_single_medium(2f64.sqrt(), 2.0, &atom(), &atom(), 1e4).unwrap().value;
            assert!((full / u1 / hi - 1.0).abs() < 1e-4);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn potential_is_attractive(
            eps1 in 1.0f64..6.0,
            eps2 in 1.0f64..6.0,
            mu2 in 1.0f64..2.0,
            w in 0.3f64..3.0,
            z in 1e-2f64..10.0,
            fraction in 0.05f64..0.95,
        ) {
            let pair = HalfSpacePair::new(
                MaterialModel::lorentz(eps1, w, 0.1).unwrap(),
                MaterialModel::with_background(vec![OscillatorTerm::new(eps2 - 1.0, 1.0 / w, 0.0).unwrap()], vec![], 1.0, mu2).unwrap(),
            );
            let sys = InterfaceSystem::new(pair, atom(), AtomModel::new(0.5, w).unwrap(), AtomPositions::from_fraction(z, fraction).unwrap());
            let q = QuadratureSpec::with_rel_tol(1e-6);
            prop_assert!(vdw_full(&sys, &q).unwrap().value < 0.0);
            prop_assert!(vdw_nonretarded(&sys, &q).unwrap().value < 0.0);
            prop_assert!(vdw_retarded(&sys, &q).unwrap().value < 0.0);
        }
    }

    #[test]
    fn regimes() {
        assert_eq!(vacuum_system(-1e-3, 1e-3).regime(), Regime::Nonretarded);
        assert_eq!(vacuum_system(-1.0, 1.0).regime(), Regime::Intermediate);
        assert_eq!(vacuum_system(-100.0, 100.0).regime(), Regime::Retarded);
    }
}
