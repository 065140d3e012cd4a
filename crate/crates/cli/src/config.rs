//! Scenario configuration files.
//!
//! Configs are TOML. Materials and atoms live in named tables so several
//! scenarios can share one library; `vacuum` is always available.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lifshitz_core::materials::{AtomModel, MaterialModel, OscillatorTerm};
use lifshitz_core::quadrature::{QuadratureSpec, Transform};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const VACUUM: &str = "vacuum";

/// Evaluation budget used when the config does not set one.
pub const DEFAULT_MAX_EVALS: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub materials: BTreeMap<String, MaterialConfig>,
    #[serde(default)]
    pub atoms: BTreeMap<String, AtomConfig>,
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    pub strength: f64,
    pub resonance: f64,
    #[serde(default)]
    pub damping: f64,
}

/// `ε(iξ) = eps_background + Σ eps`, likewise for `μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(default)]
    pub eps: Vec<OscillatorConfig>,
    #[serde(default)]
    pub mu: Vec<OscillatorConfig>,
    #[serde(default = "one")]
    pub eps_background: f64,
    #[serde(default = "one")]
    pub mu_background: f64,
}

fn one() -> f64 {
    1.0
}

impl MaterialConfig {
    pub fn build(&self) -> lifshitz_core::Result<MaterialModel> {
        let terms = |list: &[OscillatorConfig]| -> lifshitz_core::Result<Vec<OscillatorTerm>> {
            list.iter().map(|o| OscillatorTerm::new(o.strength, o.resonance, o.damping)).collect()
        };
        MaterialModel::with_background(terms(&self.eps)?, terms(&self.mu)?, self.eps_background, self.mu_background)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub alpha: f64,
    pub resonance: f64,
}

impl AtomConfig {
    pub fn build(&self) -> lifshitz_core::Result<AtomModel> {
        AtomModel::new(self.alpha, self.resonance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    VdwCurve,
    VdwAsymptotes,
    RatioScan,
    CpPotential,
    SlabForce,
    ConsistencyReport,
}

impl ScenarioKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::VdwCurve => "vdw-curve",
            ScenarioKind::VdwAsymptotes => "vdw-asymptotes",
            ScenarioKind::RatioScan => "ratio-scan",
            ScenarioKind::CpPotential => "cp-potential",
            ScenarioKind::SlabForce => "slab-force",
            ScenarioKind::ConsistencyReport => "consistency-report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarizabilityChoice {
    #[default]
    Bare,
    LocalField,
}

/// What sits across the host in `slab-force`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MirrorChoice {
    #[default]
    Perfect,
    /// Half-space of `medium2`.
    Interface,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    #[serde(default = "vacuum_name")]
    pub medium1: String,
    #[serde(default = "vacuum_name")]
    pub medium2: String,
    pub atom_a: String,
    /// Defaults to `atom_a`.
    pub atom_b: Option<String>,
    #[serde(default)]
    pub polarizability: PolarizabilityChoice,
    #[serde(default)]
    pub mirror: MirrorChoice,
    /// `ratio-scan` only: static `ε₂(0)/ε₁(0)` values, each producing one curve.
    pub eps_ratios: Option<Vec<f64>>,
    /// `consistency-report` only.
    pub threshold: Option<f64>,
}

fn vacuum_name() -> String {
    VACUUM.to_string()
}

impl ScenarioSpec {
    pub fn atom_b_name(&self) -> &str {
        self.atom_b.as_deref().unwrap_or(&self.atom_a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

/// A scalar, an explicit list, or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Value(f64),
    List(Vec<f64>),
    Range(RangeSpec),
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            Grid::Value(v) => Ok(vec![*v]),
            Grid::List(v) if v.is_empty() => Err("empty list".into()),
            Grid::List(v) => Ok(v.clone()),
            Grid::Range(r) => {
                if r.points == 0 {
                    return Err("points must be >= 1".into());
                }
                if r.points == 1 {
                    return Ok(vec![r.start]);
                }
                if r.spacing == Spacing::Log && !(r.start > 0.0 && r.stop > 0.0) {
                    return Err("log spacing needs start, stop > 0".into());
                }
                let last = (r.points - 1) as f64;
                Ok((0..r.points)
                    .map(|i| {
                        let t = i as f64 / last;
                        match r.spacing {
                            Spacing::Linear => r.start + (r.stop - r.start) * t,
                            Spacing::Log => r.start * (r.stop / r.start).powf(t),
                        }
                    })
                    .collect())
            }
        }
    }
}

/// Lengths in `c/ω_ref`; which fields apply depends on the scenario.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub z_a: Option<f64>,
    pub z_b: Option<f64>,
    /// Atom–atom separation `Z`.
    pub separation: Option<Grid>,
    /// `z_B/Z` for separation grids.
    pub fraction: Option<f64>,
    /// `z_B/Z` grid for `ratio-scan`.
    pub fractions: Option<Grid>,
    /// Atom or slab distance from the interface.
    pub distance: Option<Grid>,
    pub thickness: Option<f64>,
    pub density: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformChoice {
    Rational,
    ExponentialTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_evals: Option<usize>,
    pub transform: Option<TransformChoice>,
}

impl QuadratureConfig {
    pub fn spec(&self, rel_tol_override: Option<f64>) -> QuadratureSpec {
        let base = QuadratureSpec::default();
        QuadratureSpec {
            rel_tol: rel_tol_override.or(self.rel_tol).unwrap_or(base.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(base.abs_tol),
            max_evals: self.max_evals.unwrap_or(DEFAULT_MAX_EVALS),
            transform: match self.transform {
                Some(TransformChoice::ExponentialTail) => Transform::ExponentialTail,
                Some(TransformChoice::Rational) | None => Transform::Rational,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    JsonRecords,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn material(&self, name: &str) -> Option<lifshitz_core::Result<MaterialModel>> {
        match self.materials.get(name) {
            Some(m) => Some(m.build()),
            None if name == VACUUM => Some(Ok(MaterialModel::vacuum())),
            None => None,
        }
    }

    pub fn atom(&self, name: &str) -> Option<lifshitz_core::Result<AtomModel>> {
        self.atoms.get(name).map(AtomConfig::build)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[atoms.probe]
alpha = 1.0
resonance = 1.0

[scenario]
kind = "vdw-curve"
atom_a = "probe"

[geometry]
separation = { start = 1e-3, stop = 1e3, points = 7, spacing = "log" }
"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ScenarioConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.scenario.kind, ScenarioKind::VdwCurve);
        assert_eq!(cfg.scenario.medium1, VACUUM);
        assert_eq!(cfg.scenario.atom_b_name(), "probe");
        let z = cfg.geometry.separation.as_ref().unwrap().values().unwrap();
        assert_eq!(z.len(), 7);
        assert!((z[3] - 1.0).abs() < 1e-12);
        assert!(cfg.material(VACUUM).is_some());
    }

    #[test]
    fn grids() {
        assert_eq!(Grid::Value(2.0).values().unwrap(), vec![2.0]);
        let lin = Grid::Range(RangeSpec {
            start: 0.0,
            stop: 1.0,
            points: 5,
            spacing: Spacing::Linear,
        });
        assert_eq!(lin.values().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(Grid::List(vec![]).values().is_err());
        let bad_log = Grid::Range(RangeSpec {
            start: 0.0,
            stop: 1.0,
            points: 3,
            spacing: Spacing::Log,
        });
        assert!(bad_log.values().is_err());
    }

    #[test]
    fn unknown_field_reports_location() {
        let text = MINIMAL.replace("resonance = 1.0", "resonance = 1.0\ncolour = 3");
        let err = ScenarioConfig::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("colour") && err.contains("line"), "{err}");
    }

    #[test]
    fn quadrature_overrides() {
        let q = QuadratureConfig {
            rel_tol: Some(1e-9),
            ..Default::default()
        };
        assert_eq!(q.spec(None).rel_tol, 1e-9);
        assert_eq!(q.spec(Some(1e-4)).rel_tol, 1e-4);
        assert_eq!(q.spec(None).max_evals, DEFAULT_MAX_EVALS);
    }
}
