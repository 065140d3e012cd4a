//! On-axis Green function of two half-spaces at imaginary frequency.
//!
//! For atoms on the interface normal, `z_A < 0 < z_B`, the Green tensor is
//! diagonal, `G = G_∥(x̂x̂ + ŷŷ) + G_⊥ẑẑ`, with (`k₁k₂ = −n₁n₂ξ²` at `iξ`)
//!
//! ```text
//! G_∥ = (μ₁/2) ∫dk (k/κ₁)(t^s + κ₁κ₂t^p/(n₁n₂ξ²)) e^{κ₁z_A − κ₂z_B}
//! G_⊥ = −μ₁ ∫dk (k³/κ₁) t^p/(n₁n₂ξ²) e^{κ₁z_A − κ₂z_B}
//! ```
//!
//! The signs are fixed by the single-medium closed form. Because `G` diverges
//! as `ξ⁻²` at low frequency, potentials are assembled from the rescaled
//! object `H = ξ²G`, which has a finite, analytic `ξ = 0` limit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::materials::Response;
use crate::planar_optics::{kappa_of, transmission, HalfSpacePair, Polarization};
use crate::quadrature::{integrate, integrate_product_2d, Interval, QuadratureOutcome, QuadratureSpec};

/// Atom A at `z_a < 0` (medium 1) and atom B at `z_b > 0` (medium 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPositions {
    pub z_a: f64,
    pub z_b: f64,
}

impl AtomPositions {
    pub fn new(z_a: f64, z_b: f64) -> Result<Self> {
        if !(z_a < 0.0 && z_a.is_finite()) {
            return Err(invalid("z_a", format!("must be finite and < 0, got {z_a}")));
        }
        if !(z_b > 0.0 && z_b.is_finite()) {
            return Err(invalid("z_b", format!("must be finite and > 0, got {z_b}")));
        }
        Ok(Self { z_a, z_b })
    }

    /// Atom B at `fraction·Z` above the interface, atom A at `(fraction − 1)·Z`.
    pub fn from_fraction(separation: f64, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(invalid("fraction", format!("must lie in (0, 1), got {fraction}")));
        }
        Self::new((fraction - 1.0) * separation, fraction * separation)
    }

    pub fn separation(&self) -> f64 {
        self.z_b - self.z_a
    }

    /// Positions after reflecting the geometry through the interface plane.
    pub fn mirrored(&self) -> Self {
        Self {
            z_a: -self.z_b,
            z_b: -self.z_a,
        }
    }
}

/// Diagonal Green components with their quadrature error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenComponents {
    pub g_par: f64,
    pub g_perp: f64,
    pub err_par: f64,
    pub err_perp: f64,
}

impl GreenComponents {
    fn exact(g_par: f64, g_perp: f64) -> Self {
        Self {
            g_par,
            g_perp,
            err_par: 0.0,
            err_perp: 0.0,
        }
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            g_par: self.g_par * factor,
            g_perp: self.g_perp * factor,
            err_par: self.err_par * factor.abs(),
            err_perp: self.err_perp * factor.abs(),
        }
    }

    /// `2G_∥² + G_⊥²`, the on-axis value of `Tr[G·Gᵀ]`.
    pub fn trace_square(&self) -> f64 {
        2.0 * self.g_par * self.g_par + self.g_perp * self.g_perp
    }
}

fn check_xi(xi: f64, strict: bool) -> Result<()> {
    let ok = if strict { xi > 0.0 } else { xi >= 0.0 };
    if ok && xi.is_finite() {
        Ok(())
    } else {
        Err(invalid("xi", format!("must be finite and {} 0, got {xi}", if strict { ">" } else { ">=" })))
    }
}

/// Width in `k` of the on-axis integrand `e^{κ₁z_A − κ₂z_B}`.
fn k_scale(m1: Response, m2: Response, pos: &AtomPositions, xi: f64) -> f64 {
    let z = pos.separation();
    let a = m1.n() * xi;
    let b = m2.n() * xi;
    let curvature = if a > 0.0 && b > 0.0 {
        -pos.z_a / (2.0 * a) + pos.z_b / (2.0 * b)
    } else {
        f64::INFINITY
    };
    (1.0 / z).max(1.0 / curvature.sqrt())
}

/// Integrands of `H_∥`, `H_⊥` at wave number `k`.
#[inline]
fn rescaled_integrands(m1: Response, m2: Response, pos: &AtomPositions, xi: f64, k: f64) -> (f64, f64) {
    let kappa1 = kappa_of(m1, xi, k);
    let kappa2 = kappa_of(m2, xi, k);
    let exponent = kappa1 * pos.z_a - kappa2 * pos.z_b;
    if exponent < -745.0 {
        return (0.0, 0.0);
    }
    let decay = exponent.exp();
    let ts = transmission(Polarization::S, m1, m2, kappa1, kappa2);
    let tp = transmission(Polarization::P, m1, m2, kappa1, kappa2);
    let n1n2 = (m1.n_squared() * m2.n_squared()).sqrt();
    let k_over = k / kappa1;
    let h_par = 0.5 * m1.mu * k_over * (xi * xi * ts + kappa1 * kappa2 * tp / n1n2) * decay;
    let h_perp = -m1.mu * k_over * k * k * tp / n1n2 * decay;
    (h_par, h_perp)
}

fn finish(par: QuadratureOutcome, perp: QuadratureOutcome) -> Result<GreenComponents> {
    let par = par.require("G_par")?;
    let perp = perp.require("G_perp")?;
    Ok(GreenComponents {
        g_par: par.value,
        g_perp: perp.value,
        err_par: par.err_est,
        err_perp: perp.err_est,
    })
}

/// `H = ξ²G`, finite down to `ξ = 0` where it takes the nonretarded values
/// `H_∥ = 2/((ε₁+ε₂)Z³)`, `H_⊥ = −4/((ε₁+ε₂)Z³)`.
pub fn green_rescaled(pair: &HalfSpacePair, pos: &AtomPositions, xi: f64, quad: &QuadratureSpec) -> Result<GreenComponents> {
    check_xi(xi, false)?;
    let (m1, m2) = pair.responses(xi);
    if xi == 0.0 {
        let z3 = pos.separation().powi(3);
        let sum = m1.eps + m2.eps;
        return Ok(GreenComponents::exact(2.0 / (sum * z3), -4.0 / (sum * z3)));
    }
    let interval = Interval::SemiInfinite {
        start: 0.0,
        scale: k_scale(m1, m2, pos, xi),
    };
    let par = integrate(|k| Ok(rescaled_integrands(m1, m2, pos, xi, k).0), interval, quad)?;
    let perp = integrate(|k| Ok(rescaled_integrands(m1, m2, pos, xi, k).1), interval, quad)?;
    finish(par, perp)
}

/// `G_∥`, `G_⊥` at `ξ > 0` by direct quadrature over the in-plane wave number.
pub fn green_on_axis(pair: &HalfSpacePair, pos: &AtomPositions, xi: f64, quad: &QuadratureSpec) -> Result<GreenComponents> {
    check_xi(xi, true)?;
    Ok(green_rescaled(pair, pos, xi, quad)?.scaled(1.0 / (xi * xi)))
}

/// Closed form for a homogeneous medium of index `n` and permeability `mu`,
/// atoms a distance `separation` apart.
pub fn green_single_medium_closed(n: f64, mu: f64, xi: f64, separation: f64) -> Result<GreenComponents> {
    check_xi(xi, true)?;
    if !(n > 0.0) {
        return Err(invalid("n", format!("must be > 0, got {n}")));
    }
    if !(separation > 0.0) {
        return Err(invalid("separation", format!("must be > 0, got {separation}")));
    }
    let phase = n * xi * separation;
    let x = 1.0 / phase;
    let decay = (-phase).exp();
    Ok(GreenComponents::exact(
        mu / separation * (1.0 + x + x * x) * decay,
        -2.0 * mu / separation * x * (1.0 + x) * decay,
    ))
}

/// `g_∥(p)`, `g_⊥(p)` of the representation with `κ₁ = n₁ξp`.
#[inline]
pub fn p_weights(m1: Response, m2: Response, p: f64) -> (f64, f64, f64) {
    let ratio = m2.n_squared() / m1.n_squared();
    let s = (p * p - 1.0 + ratio).sqrt();
    let tm = m2.eps * p + m1.eps * s;
    let g_par = m2.mu * p / (m2.mu * p + m1.mu * s) + p * p * m1.eps * s / tm;
    let g_perp = 2.0 * (1.0 - p * p) * m1.eps * p / tm;
    (g_par, g_perp, s)
}

/// Same components as [`green_on_axis`], computed in the variable `p = κ₁/(n₁ξ) ∈ [1, ∞)`:
/// `G = μ₁n₁ξ ∫dp g(p) e^{−n₁ξ(s z_B − p z_A)}`.
pub fn green_p_representation(pair: &HalfSpacePair, pos: &AtomPositions, xi: f64, quad: &QuadratureSpec) -> Result<GreenComponents> {
    check_xi(xi, true)?;
    let (m1, m2) = pair.responses(xi);
    let a = m1.n() * xi;
    let slope = -pos.z_a + pos.z_b * (m1.n() / m2.n()).min(1.0);
    let interval = Interval::SemiInfinite {
        start: 1.0,
        scale: 1.0 / (a * slope),
    };
    let term = |p: f64, perp: bool| {
        let (g_par, g_perp, s) = p_weights(m1, m2, p);
        let exponent = -a * (s * pos.z_b - p * pos.z_a);
        if exponent < -745.0 {
            return 0.0;
        }
        (if perp { g_perp } else { g_par }) * exponent.exp()
    };
    let par = integrate(|p| Ok(term(p, false)), interval, quad)?;
    let perp = integrate(|p| Ok(term(p, true)), interval, quad)?;
    Ok(finish(par, perp)?.scaled(m1.mu * a))
}

/// Reduced trace integral over the half-space `z_B ≥ 0` at fixed `ξ > 0`:
///
/// ```text
/// ∫d²k (μ₁/κ₁)² [(t^p)²(κ₁²+k²)(κ₂²+k²)/(k₁²k₂²) + (t^s)²] e^{2κ₁z_A}/(2κ₂)
/// ```
pub fn trace_space_integral(pair: &HalfSpacePair, z_a: f64, xi: f64, quad: &QuadratureSpec) -> Result<QuadratureOutcome> {
    check_xi(xi, true)?;
    if !(z_a < 0.0) {
        return Err(invalid("z_a", format!("must be < 0, got {z_a}")));
    }
    let (m1, m2) = pair.responses(xi);
    let xi4 = xi.powi(4);
    let n12 = m1.n_squared() * m2.n_squared();
    let integrand = |k: f64| -> Result<f64> {
        let kappa1 = kappa_of(m1, xi, k);
        let kappa2 = kappa_of(m2, xi, k);
        let exponent = 2.0 * kappa1 * z_a;
        if exponent < -745.0 {
            return Ok(0.0);
        }
        let tp = transmission(Polarization::P, m1, m2, kappa1, kappa2);
        let ts = transmission(Polarization::S, m1, m2, kappa1, kappa2);
        let lead = m1.mu / kappa1;
        let bracket = tp * tp * (kappa1 * kappa1 + k * k) * (kappa2 * kappa2 + k * k) / (n12 * xi4) + ts * ts;
        Ok(2.0 * PI * k * lead * lead * bracket * exponent.exp() / (2.0 * kappa2))
    };
    let scale = (1.0 / (-2.0 * z_a)).max((m1.n() * xi / -z_a).sqrt());
    integrate(integrand, Interval::SemiInfinite { start: 0.0, scale }, quad)?.require("trace space integral")
}

/// Brute-force counterpart of [`trace_space_integral`]: the dyadic Green
/// function is assembled in full from its plane-wave representation, the
/// trace `Tr[G(k)·Gᵀ(−k)]` formed by 3×3 complex products, and integrated
/// numerically over `k` and `z_B`.
pub fn trace_space_integral_brute_force(pair: &HalfSpacePair, z_a: f64, xi: f64, quad: &QuadratureSpec) -> Result<QuadratureOutcome> {
    check_xi(xi, true)?;
    if !(z_a < 0.0) {
        return Err(invalid("z_a", format!("must be < 0, got {z_a}")));
    }
    let (m1, m2) = pair.responses(xi);
    let scale = (1.0 / (-2.0 * z_a)).max((m1.n() * xi / -z_a).sqrt());
    // The trace is isotropic in the plane; any azimuth works.
    let azimuth = 0.3;
    let out = integrate_product_2d(
        |k, z_b| {
            let forward = dyadic::plane_wave_green(m1, m2, xi, k, azimuth, z_a, z_b);
            let backward = dyadic::plane_wave_green(m1, m2, xi, k, azimuth + PI, z_a, z_b);
            let trace = dyadic::trace_product_transposed(&forward, &backward);
            Ok(k * trace.re / (2.0 * PI))
        },
        Interval::SemiInfinite { start: 0.0, scale },
        |k| Interval::SemiInfinite {
            start: 0.0,
            scale: 1.0 / (2.0 * kappa_of(m2, xi, k)),
        },
        quad,
    )?;
    out.require("brute-force trace integral")
}

/// Plane-wave components of the two-half-space dyadic with complex arithmetic.
pub mod dyadic {
    use super::*;

    pub type Tensor3 = [[Complex64; 3]; 3];

    fn outer(a: [Complex64; 3], b: [Complex64; 3]) -> Tensor3 {
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i] * b[j];
            }
        }
        m
    }

    /// `G(k, iξ; z_A, z_B) = 2π(μ₁/κ₁)[t^p ê₁ê₂ + t^s ŝŝ] e^{κ₁z_A − κ₂z_B}` with
    /// `êᵢ = (iκᵢk̂ + kẑ)/kᵢ`, `kᵢ = i nᵢ ξ`, `ŝ = k̂ × ẑ` and `k̂` at `azimuth`.
    pub fn plane_wave_green(m1: Response, m2: Response, xi: f64, k: f64, azimuth: f64, z_a: f64, z_b: f64) -> Tensor3 {
        let kappa1 = kappa_of(m1, xi, k);
        let kappa2 = kappa_of(m2, xi, k);
        let tp = transmission(Polarization::P, m1, m2, kappa1, kappa2);
        let ts = transmission(Polarization::S, m1, m2, kappa1, kappa2);
        let (sin, cos) = azimuth.sin_cos();
        let i = Complex64::i();
        let k1 = i * (m1.n() * xi);
        let k2 = i * (m2.n() * xi);
        let e = |kap: f64, kn: Complex64| {
            [
                (i * kap * cos) / kn,
                (i * kap * sin) / kn,
                Complex64::new(k, 0.0) / kn,
            ]
        };
        let e1 = e(kappa1, k1);
        let e2 = e(kappa2, k2);
        // k̂ × ẑ = (sin φ, −cos φ, 0).
        let s = [Complex64::new(sin, 0.0), Complex64::new(-cos, 0.0), Complex64::new(0.0, 0.0)];
        let p_part = outer(e1, e2);
        let s_part = outer(s, s);
        let exponent = kappa1 * z_a - kappa2 * z_b;
        let pref = if exponent < -745.0 {
            0.0
        } else {
            2.0 * PI * m1.mu / kappa1 * exponent.exp()
        };
        let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                g[r][c] = (p_part[r][c] * tp + s_part[r][c] * ts) * pref;
            }
        }
        g
    }

    /// `Tr[A·Bᵀ] = Σᵢⱼ Aᵢⱼ Bᵢⱼ`.
    pub fn trace_product_transposed(a: &Tensor3, b: &Tensor3) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..3 {
            for c in 0..3 {
                acc += a[r][c] * b[r][c];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{MaterialModel, OscillatorTerm};
    use std::f64::consts::E;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::with_rel_tol(1e-11)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_form_reference_values() {
        let g = green_single_medium_closed(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((g.g_par - 3.0 / E).abs() < 1e-15);
        assert!((g.g_perp + 4.0 / E).abs() < 1e-15);

        let ratio = |xi: f64| {
            let g = green_single_medium_closed(1.0, 1.0, xi, 1.0).unwrap();
            (g.g_perp / g.g_par).abs()
        };
        assert!(ratio(500.0) < ratio(100.0));
        assert!(ratio(500.0) < 4.1e-3);
        let near = green_single_medium_closed(1.5, 1.0, 1e-5, 1e-2).unwrap();
        assert!((near.g_perp / near.g_par + 2.0).abs() < 1e-6);
    }

    #[test]
    fn vacuum_numeric_matches_closed_form() {
        let pair = HalfSpacePair::default();
        let pos = AtomPositions::new(-0.4, 0.6).unwrap();
        let num = green_on_axis(&pair, &pos, 1.0, &quad()).unwrap();
        let closed = green_single_medium_closed(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(rel(num.g_par, closed.g_par) < 1e-9);
        assert!(rel(num.g_perp, closed.g_perp) < 1e-9);
    }

    #[test]
    fn magnetodielectric_single_medium() {
        let m = MaterialModel::new(
            vec![OscillatorTerm::new(2.0, 1.0, 0.1).unwrap()],
            vec![OscillatorTerm::new(0.5, 0.5, 0.0).unwrap()],
        )
        .unwrap();
        let pair = HalfSpacePair::single(m.clone());
        let pos = AtomPositions::new(-0.1, 0.25).unwrap();
        for xi in [0.05, 0.7, 3.0] {
            let num = green_on_axis(&pair, &pos, xi, &quad()).unwrap();
            let r = m.response(xi);
            let closed = green_single_medium_closed(r.n(), r.mu, xi, pos.separation()).unwrap();
            assert!(rel(num.g_par, closed.g_par) < 1e-9, "xi {xi}");
            assert!(rel(num.g_perp, closed.g_perp) < 1e-9, "xi {xi}");
        }
    }

    fn two_media() -> HalfSpacePair {
        HalfSpacePair::new(
            MaterialModel::new(
                vec![OscillatorTerm::new(3.0, 0.8, 0.2).unwrap()],
                vec![OscillatorTerm::new(0.4, 0.3, 0.0).unwrap()],
            )
            .unwrap(),
            MaterialModel::lorentz(1.8, 2.0, 0.0).unwrap(),
        )
    }

    #[test]
    fn mirror_swap_symmetry() {
        let pair = two_media();
        let pos = AtomPositions::new(-0.3, 0.8).unwrap();
        let a = green_on_axis(&pair, &pos, 0.9, &quad()).unwrap();
        let b = green_on_axis(&pair.swapped(), &pos.mirrored(), 0.9, &quad()).unwrap();
        assert!(rel(a.g_par, b.g_par) < 1e-9);
        assert!(rel(a.g_perp, b.g_perp) < 1e-9);
    }

    #[test]
    fn rescaled_static_limit() {
        let vac = HalfSpacePair::default();
        let pos = AtomPositions::new(-0.5, 1.5).unwrap();
        let h = green_rescaled(&vac, &pos, 0.0, &quad()).unwrap();
        assert!((h.g_par * 8.0 - 1.0).abs() < 1e-15);
        assert!((h.g_perp * 8.0 + 2.0).abs() < 1e-15);

        let pair = HalfSpacePair::new(MaterialModel::dispersionless(3.0, 1.0).unwrap(), MaterialModel::vacuum());
        let h = green_rescaled(&pair, &pos, 0.0, &quad()).unwrap();
        assert!((h.g_par * 8.0 - 0.5).abs() < 1e-15);

        let pair = two_media();
        let zero = green_rescaled(&pair, &pos, 0.0, &quad()).unwrap();
        let small = green_rescaled(&pair, &pos, 1e-6, &quad()).unwrap();
        assert!(rel(small.g_par, zero.g_par) < 1e-4);
        assert!(rel(small.g_perp, zero.g_perp) < 1e-4);
    }

    #[test]
    fn nonretarded_convergence_is_first_order() {
        let pair = two_media();
        let pos = AtomPositions::new(-0.5, 0.5).unwrap();
        let zero = green_rescaled(&pair, &pos, 0.0, &quad()).unwrap();
        let gap = |xi: f64| {
            let h = green_rescaled(&pair, &pos, xi, &quad()).unwrap();
            (h.g_par - zero.g_par).abs() / zero.g_par
        };
        // Halving ξ roughly halves the deviation in the small-ξZ window.
        let ratio = gap(2e-4) / gap(1e-4);
        assert!(ratio > 1.8 && ratio < 2.2, "ratio {ratio}");
    }

    #[test]
    fn p_representation_agrees() {
        let pair = two_media();
        for (z_a, z_b, xi) in [(-0.3, 0.8, 0.9), (-2.0, 0.1, 0.2), (-0.05, 0.07, 5.0)] {
            let pos = AtomPositions::new(z_a, z_b).unwrap();
            let k = green_on_axis(&pair, &pos, xi, &quad()).unwrap();
            let p = green_p_representation(&pair, &pos, xi, &quad()).unwrap();
            assert!(rel(p.g_par, k.g_par) < 1e-9);
            assert!(rel(p.g_perp, k.g_perp) < 1e-9);
        }
    }

    #[test]
    fn p_weights_edge_cases() {
        let m = Response { eps: 2.0, mu: 1.0 };
        let (_, g_perp, s) = p_weights(m, m, 1.0);
        assert_eq!(g_perp, 0.0);
        assert_eq!(s, 1.0);
        let (_, _, s) = p_weights(m, Response { eps: 8.0, mu: 1.0 }, 1.0);
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn trace_integral_matches_brute_force() {
        let pair = two_media();
        let spec = QuadratureSpec::with_rel_tol(1e-9);
        let reduced = trace_space_integral(&pair, -0.4, 0.7, &spec).unwrap();
        let brute = trace_space_integral_brute_force(&pair, -0.4, 0.7, &spec).unwrap();
        assert!(rel(brute.value, reduced.value) < 1e-6, "{} vs {}", brute.value, reduced.value);
    }

    #[test]
    fn trace_integral_decays_with_distance() {
        let pair = two_media();
        let spec = QuadratureSpec::with_rel_tol(1e-9);
        let mut last = f64::INFINITY;
        for z in [0.1, 0.2, 0.5, 1.0] {
            let v = trace_space_integral(&pair, -z, 0.7, &spec).unwrap().value;
            assert!(v > 0.0 && v < last);
            last = v;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(AtomPositions::new(0.0, 1.0).is_err());
        assert!(AtomPositions::new(-1.0, 0.0).is_err());
        assert!(AtomPositions::from_fraction(1.0, 1.0).is_err());
        let pos = AtomPositions::new(-1.0, 1.0).unwrap();
        assert!(green_on_axis(&HalfSpacePair::default(), &pos, 0.0, &quad()).is_err());
        assert!(green_single_medium_closed(1.0, 1.0, 1.0, 0.0).is_err());
    }
}
