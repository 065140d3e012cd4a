//! Pre-flight checks on a parsed config.

use std::fmt;

use lifshitz_core::materials::DILUTE_THRESHOLD;
use lifshitz_core::planar_optics::THIN_SLAB_THRESHOLD;

use crate::config::{Grid, ScenarioConfig, ScenarioKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Dotted path of the offending field, e.g. `geometry.z_a`.
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}: {}: {}", self.field, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

#[derive(Default)]
struct Collector(Vec<Diagnostic>);

impl Collector {
    fn error(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(Diagnostic {
            severity: Severity::Error,
            field: field.into(),
            message: message.into(),
        });
    }

    fn warn(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(Diagnostic {
            severity: Severity::Warning,
            field: field.into(),
            message: message.into(),
        });
    }

    fn require<'a, T>(&mut self, field: &str, value: &'a Option<T>) -> Option<&'a T> {
        if value.is_none() {
            self.error(field, "required for this scenario");
        }
        value.as_ref()
    }

    fn grid(&mut self, field: &str, grid: Option<&Grid>, check: impl Fn(f64) -> Option<&'static str>) -> Option<Vec<f64>> {
        let values = match grid?.values() {
            Ok(v) => v,
            Err(e) => {
                self.error(field, e);
                return None;
            }
        };
        for v in &values {
            if let Some(problem) = check(*v) {
                self.error(field, format!("{problem}, got {v}"));
                return None;
            }
        }
        Some(values)
    }
}

fn positive(v: f64) -> Option<&'static str> {
    (!(v > 0.0 && v.is_finite())).then_some("must be finite and > 0")
}

fn unit_open(v: f64) -> Option<&'static str> {
    (!(v > 0.0 && v < 1.0)).then_some("must lie strictly between 0 and 1")
}

/// Every problem found in `cfg`. The config is runnable iff none has
/// [`Severity::Error`].
pub fn validate_config(cfg: &ScenarioConfig) -> Vec<Diagnostic> {
    let mut c = Collector::default();
    let s = &cfg.scenario;
    let g = &cfg.geometry;

    for (name, m) in &cfg.materials {
        if let Err(e) = m.build() {
            c.error(format!("materials.{name}"), e.to_string());
        }
    }
    for (name, a) in &cfg.atoms {
        if let Err(e) = a.build() {
            c.error(format!("atoms.{name}"), e.to_string());
        }
    }
    for (field, name) in [("scenario.medium1", &s.medium1), ("scenario.medium2", &s.medium2)] {
        if cfg.material(name).is_none() {
            c.error(field, format!("unknown material '{name}'"));
        }
    }
    let needs_b = !matches!(s.kind, ScenarioKind::SlabForce);
    let mut atom_fields = vec![("scenario.atom_a", s.atom_a.as_str())];
    if needs_b {
        atom_fields.push(("scenario.atom_b", s.atom_b_name()));
    }
    for (field, name) in atom_fields {
        if cfg.atom(name).is_none() {
            c.error(field, format!("unknown atom '{name}'"));
        }
    }

    let q = cfg.quadrature.spec(None);
    if !(q.rel_tol > 0.0 && q.rel_tol < 1.0) {
        c.error("quadrature.rel_tol", format!("must lie in (0, 1), got {}", q.rel_tol));
    }
    if !(q.abs_tol >= 0.0) {
        c.error("quadrature.abs_tol", format!("must be >= 0, got {}", q.abs_tol));
    }
    if q.max_evals < 15 {
        c.error("quadrature.max_evals", format!("must be >= 15, got {}", q.max_evals));
    }

    match s.kind {
        ScenarioKind::VdwCurve | ScenarioKind::VdwAsymptotes => {
            if g.z_a.is_some() || g.z_b.is_some() {
                if let Some(z_a) = c.require("geometry.z_a", &g.z_a) {
                    if !(*z_a < 0.0) {
                        c.error("geometry.z_a", format!("atom A sits in medium 1 and needs z_a < 0, got {z_a}"));
                    }
                }
                if let Some(z_b) = c.require("geometry.z_b", &g.z_b) {
                    if !(*z_b > 0.0) {
                        c.error("geometry.z_b", format!("atom B sits in medium 2 and needs z_b > 0, got {z_b}"));
                    }
                }
                if g.separation.is_some() {
                    c.error("geometry.separation", "give either z_a/z_b or separation, not both");
                }
            } else {
                c.require("geometry.separation", &g.separation);
                c.grid("geometry.separation", g.separation.as_ref(), positive);
                if let Some(f) = g.fraction {
                    if let Some(p) = unit_open(f) {
                        c.error("geometry.fraction", format!("{p}, got {f}"));
                    }
                }
            }
        }
        ScenarioKind::RatioScan => {
            if let Some(sep) = &g.separation {
                if let Some(v) = c.grid("geometry.separation", Some(sep), positive) {
                    if v.len() != 1 {
                        c.error("geometry.separation", "ratio-scan takes a single separation");
                    }
                }
            }
            c.grid("geometry.fractions", g.fractions.as_ref(), unit_open);
            if let Some(ratios) = &s.eps_ratios {
                if ratios.is_empty() {
                    c.error("scenario.eps_ratios", "empty list");
                }
                for r in ratios {
                    if positive(*r).is_some() {
                        c.error("scenario.eps_ratios", format!("ratios must be finite and > 0, got {r}"));
                    }
                }
            }
            for (field, name) in [("scenario.medium1", &s.medium1), ("scenario.medium2", &s.medium2)] {
                if let Some(Ok(m)) = cfg.material(name) {
                    if m.is_magnetic() {
                        c.warn(field, "ratio-scan curves are normally drawn for nonmagnetic media");
                    }
                }
            }
        }
        ScenarioKind::CpPotential | ScenarioKind::ConsistencyReport => {
            distance_or_z_a(&mut c, cfg);
            c.require("geometry.density", &g.density);
            density(&mut c, cfg, s.atom_b_name());
            if let Some(t) = s.threshold {
                if positive(t).is_some() {
                    c.error("scenario.threshold", format!("must be finite and > 0, got {t}"));
                }
            }
        }
        ScenarioKind::SlabForce => {
            c.require("geometry.distance", &g.distance);
            let distances = c.grid("geometry.distance", g.distance.as_ref(), positive);
            if let Some(t) = c.require("geometry.thickness", &g.thickness) {
                if positive(*t).is_some() {
                    c.error("geometry.thickness", format!("must be finite and > 0, got {t}"));
                } else if let Some(d) = distances.and_then(|d| d.into_iter().reduce(f64::min)) {
                    if 0.5 * t / d >= THIN_SLAB_THRESHOLD {
                        c.warn("geometry.thickness", format!("slab is not optically thin: d_s/(2d) = {:.3e}", 0.5 * t / d));
                    }
                }
            }
            c.require("geometry.density", &g.density);
            density(&mut c, cfg, &s.atom_a);
        }
    }

    c.0
}

fn distance_or_z_a(c: &mut Collector, cfg: &ScenarioConfig) {
    let g = &cfg.geometry;
    match (&g.z_a, &g.distance) {
        (Some(_), Some(_)) => c.error("geometry.distance", "give either z_a or distance, not both"),
        (Some(z_a), None) => {
            if !(*z_a < 0.0) {
                c.error("geometry.z_a", format!("atom A sits in medium 1 and needs z_a < 0, got {z_a}"));
            }
        }
        (None, Some(d)) => {
            c.grid("geometry.distance", Some(d), positive);
        }
        (None, None) => c.error("geometry.distance", "required for this scenario (or give geometry.z_a)"),
    }
}

fn density(c: &mut Collector, cfg: &ScenarioConfig, atom: &str) {
    let Some(n) = cfg.geometry.density else {
        return;
    };
    if !(n >= 0.0 && n.is_finite()) {
        c.error("geometry.density", format!("must be finite and >= 0, got {n}"));
        return;
    }
    if let Some(Ok(a)) = cfg.atom(atom) {
        let x = n * a.alpha_static;
        if x > DILUTE_THRESHOLD {
            c.warn(
                "geometry.density",
                format!("N*alpha = {x:.3e} exceeds the dilute threshold {DILUTE_THRESHOLD:e}; first-order results lose accuracy"),
            );
        }
    }
}
