//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite intervals.
//!
//! Every integral in the crate reduces to nested one-dimensional integrals over
//! `[a, b]` or `[start, ∞)`. Semi-infinite ranges are compactified onto
//! `u ∈ (0, 1)` with a caller-supplied scale hint, then integrated with a
//! globally adaptive G7/K15 rule that always bisects the panel carrying the
//! largest error estimate. The engine is deterministic: the same integrand and
//! spec always produce bit-identical outcomes.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Error, Result};

/// Kronrod abscissae on [-1, 1] (non-negative half; the last entry is the centre).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the embedded 7-point rule (nodes XGK[1], XGK[3], XGK[5], centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const NODES_PER_PANEL: usize = 15;
const INITIAL_PANELS: usize = 4;

/// Compactification used for semi-infinite ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// `x = start + s·u/(1 − u)`; suits algebraic and exponential tails alike.
    Rational,
    /// `x = start − s·ln(1 − u)`; maps `e^{−x/s}` onto a constant.
    ExponentialTail,
}

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 0.0,
            max_evals: 200_000,
            transform: Transform::Rational,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(invalid("rel_tol", format!("must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(invalid("abs_tol", format!("must be >= 0, got {}", self.abs_tol)));
        }
        if self.max_evals < NODES_PER_PANEL * INITIAL_PANELS {
            return Err(invalid(
                "max_evals",
                format!(
                    "must be at least {} (one pass over the initial panels)",
                    NODES_PER_PANEL * INITIAL_PANELS
                ),
            ));
        }
        Ok(())
    }

    /// Spec for an integral nested inside another one: tighter by a decade so
    /// that inner noise stays below the outer tolerance.
    pub fn nested(&self) -> Self {
        Self {
            rel_tol: (self.rel_tol * 0.1).max(1e-14),
            abs_tol: 0.0,
            ..*self
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    pub value: f64,
    pub err_est: f64,
    pub n_evals: usize,
    pub converged: bool,
    /// Estimate before the last refinement step (diagnostics for nonconvergence).
    pub previous: f64,
}

impl QuadratureOutcome {
    /// Converts a nonconverged outcome into [`Error::NotConverged`].
    pub fn require(self, quantity: &'static str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                quantity,
                last: self.value,
                previous: self.previous,
                err_est: self.err_est,
            })
        }
    }
}

/// Integration range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Finite { a: f64, b: f64 },
    /// `[start, ∞)` with `scale` the characteristic decay length of the integrand.
    SemiInfinite { start: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    let fc = f(centre)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel { a, b, value, err })
}

fn integrate_unit<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadratureOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let width = (b - a) / INITIAL_PANELS as f64;
    for i in 0..INITIAL_PANELS {
        let lo = a + width * i as f64;
        let hi = if i + 1 == INITIAL_PANELS { b } else { lo + width };
        let panel = gauss_kronrod(&mut f, lo, hi)?;
        total += panel.value;
        total_err += panel.err;
        heap.push(panel);
    }
    let mut n_evals = NODES_PER_PANEL * INITIAL_PANELS;
    let mut previous = total;

    let tolerance = |value: f64| (spec.rel_tol * value.abs()).max(spec.abs_tol);
    let mut converged = total_err <= tolerance(total);

    while !converged && n_evals + 2 * NODES_PER_PANEL <= spec.max_evals {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if (worst.b - worst.a) <= 64.0 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b {
            // Panel cannot be split any further in floating point.
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        n_evals += 2 * NODES_PER_PANEL;
        previous = total;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        converged = total_err <= tolerance(total);
    }

    // Re-sum from the panels to shed the drift of the running updates.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let err_est: f64 = panels.iter().map(|p| p.err).sum();
    Ok(QuadratureOutcome {
        value,
        err_est,
        n_evals,
        converged: err_est <= tolerance(value),
        previous,
    })
}

fn checked<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let value = f(x)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteIntegrand { abscissa: x, value })
    }
}

/// Integrates `f` over `interval`.
pub fn integrate<F>(mut f: F, interval: Interval, spec: &QuadratureSpec) -> Result<QuadratureOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    match interval {
        Interval::Finite { a, b } => {
            if !(a.is_finite() && b.is_finite()) {
                return Err(invalid("interval", "finite bounds required"));
            }
            if a == b {
                return Ok(QuadratureOutcome {
                    value: 0.0,
                    err_est: 0.0,
                    n_evals: 0,
                    converged: true,
                    previous: 0.0,
                });
            }
            integrate_unit(|x| checked(&mut f, x), a, b, spec)
        }
        Interval::SemiInfinite { start, scale } => {
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(invalid("scale", format!("must be finite and > 0, got {scale}")));
            }
            let transform = spec.transform;
            let mapped = move |u: f64| -> Result<f64> {
                let rest = 1.0 - u;
                if rest <= 0.0 {
                    return Ok(0.0);
                }
                let (x, jac) = match transform {
                    Transform::Rational => (start + scale * u / rest, scale / (rest * rest)),
                    Transform::ExponentialTail => (start - scale * rest.ln(), scale / rest),
                };
                if !x.is_finite() || !jac.is_finite() {
                    return Ok(0.0);
                }
                let value = checked(&mut f, x)?;
                if value == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(value * jac)
                }
            };
            integrate_unit(mapped, 0.0, 1.0, spec)
        }
    }
}

/// Integrates `f` over `[0, ∞)`; `scale` is the decay length of the integrand.
pub fn integrate_semi_infinite<F>(f: F, scale: f64, spec: &QuadratureSpec) -> Result<QuadratureOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate(f, Interval::SemiInfinite { start: 0.0, scale }, spec)
}

/// Nested adaptive integration of `f(x, y)` over `outer × inner(x)`.
///
/// The evaluation budget is split so that each level receives its square root;
/// inner integrals run a decade tighter than the outer one. Inner accuracy is
/// measured against the largest inner value seen, so slices that contribute
/// negligibly are not refined to full relative precision.
pub fn integrate_product_2d<F, I>(
    mut f: F,
    outer: Interval,
    inner: I,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome>
where
    F: FnMut(f64, f64) -> Result<f64>,
    I: Fn(f64) -> Interval,
{
    spec.validate()?;
    let per_level = ((spec.max_evals as f64).sqrt().ceil() as usize).max(NODES_PER_PANEL * INITIAL_PANELS);
    // Inner errors are added to the outer estimate; the outer level leaves them room.
    let outer_spec = QuadratureSpec {
        rel_tol: 0.9 * spec.rel_tol,
        abs_tol: 0.9 * spec.abs_tol,
        max_evals: per_level,
        ..*spec
    };
    let inner_base = QuadratureSpec {
        max_evals: per_level,
        ..spec.nested()
    };

    let mut inner_evals = 0usize;
    let mut peak = 0.0f64;
    let mut slices: Vec<(f64, f64)> = Vec::new();
    let result = integrate(
        |x| {
            let inner_spec = QuadratureSpec {
                abs_tol: inner_base.abs_tol.max(inner_base.rel_tol * peak),
                ..inner_base
            };
            let out = integrate(|y| f(x, y), inner(x), &inner_spec)?;
            inner_evals += out.n_evals;
            peak = peak.max(out.value.abs());
            slices.push((out.value.abs(), out.err_est));
            Ok(out.value)
        },
        outer,
        &outer_spec,
    )?;

    let mut worst_inner_rel = 0.0f64;
    let mut inner_converged = true;
    for &(value, err) in &slices {
        let reference = value.max(peak);
        if reference > 0.0 {
            worst_inner_rel = worst_inner_rel.max(err / reference);
        }
        inner_converged &= err <= (inner_base.rel_tol * reference).max(inner_base.abs_tol);
    }
    let err_est = result.err_est + worst_inner_rel * result.value.abs();
    let tol = (spec.rel_tol * result.value.abs()).max(spec.abs_tol);
    Ok(QuadratureOutcome {
        value: result.value,
        err_est,
        n_evals: inner_evals,
        converged: result.converged && inner_converged && err_est <= tol,
        previous: result.previous,
    })
}
