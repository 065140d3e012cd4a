//! Scenario evaluation.

use indexmap::IndexMap;
use lifshitz_core::casimir_polder::{
    cp_atom_force, cp_distribution_potential_with, local_field_consistency, slab_force, DistributionSystem, Polarizability,
    SlabSystem,
};
use lifshitz_core::greens::AtomPositions;
use lifshitz_core::materials::{AtomModel, MaterialModel, MixtureSpec};
use lifshitz_core::planar_optics::{HalfSpacePair, InterfaceMirror, Mirror, PerfectMirror};
use lifshitz_core::quadrature::QuadratureSpec;
use lifshitz_core::vdw::{
    default_retarded_separation, ratio_scan, vdw_full, vdw_nonretarded, vdw_retarded, InterfaceSystem, PotentialResult,
};
use rayon::prelude::*;

use crate::config::{Grid, MirrorChoice, PolarizabilityChoice, ScenarioConfig, ScenarioKind};
use crate::error::CliError;
use crate::output::Record;

/// Relative discrepancy allowed by `consistency-report` unless configured.
pub const DEFAULT_CONSISTENCY_THRESHOLD: f64 = 1e-4;

pub const DEFAULT_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// In grid order.
    pub records: Vec<Record>,
    /// Human-readable summary lines.
    pub notes: Vec<String>,
}

impl RunOutput {
    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| r.converged)
    }
}

/// Evaluates the scenario in `cfg`. Call [`validate_config`](crate::validate_config) first;
/// problems it would have caught surface here as errors.
pub fn run_scenario(cfg: &ScenarioConfig, quad: &QuadratureSpec) -> Result<RunOutput, CliError> {
    let ctx = Context::new(cfg)?;
    match cfg.scenario.kind {
        ScenarioKind::VdwCurve => vdw_rows(&ctx, quad, false),
        ScenarioKind::VdwAsymptotes => vdw_rows(&ctx, quad, true),
        ScenarioKind::RatioScan => ratio_rows(&ctx, quad),
        ScenarioKind::CpPotential => cp_rows(&ctx, quad),
        ScenarioKind::ConsistencyReport => consistency_rows(&ctx, quad),
        ScenarioKind::SlabForce => match cfg.scenario.mirror {
            MirrorChoice::Perfect => slab_rows(&ctx, PerfectMirror, quad),
            MirrorChoice::Interface => slab_rows(&ctx, InterfaceMirror { pair: ctx.pair.clone() }, quad),
        },
    }
}

struct Context<'a> {
    cfg: &'a ScenarioConfig,
    pair: HalfSpacePair,
    atom_a: AtomModel,
    atom_b: AtomModel,
}

fn lookup<T>(found: Option<lifshitz_core::Result<T>>, field: &str, name: &str) -> Result<T, CliError> {
    match found {
        Some(r) => Ok(r?),
        None => Err(CliError::Invalid(format!("{field}: unknown name '{name}'"))),
    }
}

fn grid_values(grid: &Option<Grid>, field: &str) -> Result<Option<Vec<f64>>, CliError> {
    grid.as_ref()
        .map(|g| g.values().map_err(|e| CliError::Invalid(format!("{field}: {e}"))))
        .transpose()
}

fn missing(field: &str) -> CliError {
    CliError::Invalid(format!("{field}: required for this scenario"))
}

impl<'a> Context<'a> {
    fn new(cfg: &'a ScenarioConfig) -> Result<Self, CliError> {
        let s = &cfg.scenario;
        let medium1 = lookup(cfg.material(&s.medium1), "scenario.medium1", &s.medium1)?;
        let medium2 = lookup(cfg.material(&s.medium2), "scenario.medium2", &s.medium2)?;
        let atom_a = lookup(cfg.atom(&s.atom_a), "scenario.atom_a", &s.atom_a)?;
        let atom_b = match s.kind {
            ScenarioKind::SlabForce => atom_a,
            _ => lookup(cfg.atom(s.atom_b_name()), "scenario.atom_b", s.atom_b_name())?,
        };
        Ok(Self {
            cfg,
            pair: HalfSpacePair::new(medium1, medium2),
            atom_a,
            atom_b,
        })
    }

    /// Atom pairs for the vdW scenarios.
    fn positions(&self) -> Result<Vec<AtomPositions>, CliError> {
        let g = &self.cfg.geometry;
        if let (Some(z_a), Some(z_b)) = (g.z_a, g.z_b) {
            return Ok(vec![AtomPositions::new(z_a, z_b)?]);
        }
        let seps = grid_values(&g.separation, "geometry.separation")?.ok_or_else(|| missing("geometry.separation"))?;
        let fraction = g.fraction.unwrap_or(DEFAULT_FRACTION);
        Ok(seps.into_iter().map(|z| AtomPositions::from_fraction(z, fraction)).collect::<Result<_, _>>()?)
    }

    /// Positions of atom A for the distribution scenarios.
    fn z_a_values(&self) -> Result<Vec<f64>, CliError> {
        let g = &self.cfg.geometry;
        if let Some(z_a) = g.z_a {
            return Ok(vec![z_a]);
        }
        let d = grid_values(&g.distance, "geometry.distance")?.ok_or_else(|| missing("geometry.distance"))?;
        Ok(d.into_iter().map(|d| -d).collect())
    }

    fn density(&self) -> Result<f64, CliError> {
        self.cfg.geometry.density.ok_or_else(|| missing("geometry.density"))
    }

    fn polarizability(&self) -> Polarizability {
        match self.cfg.scenario.polarizability {
            PolarizabilityChoice::Bare => Polarizability::Bare,
            PolarizabilityChoice::LocalField => Polarizability::LocalField,
        }
    }
}

/// Keeps unconverged values as rows instead of aborting the run.
fn settle(res: lifshitz_core::Result<PotentialResult>) -> Result<PotentialResult, CliError> {
    match res {
        Ok(r) => Ok(r),
        Err(lifshitz_core::Error::NotConverged { last, err_est, .. }) => Ok(PotentialResult {
            value: last,
            abs_err: err_est,
            n_evals: 0,
            converged: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn record(case: &str, inputs: &IndexMap<String, f64>, r: PotentialResult, tag: &str) -> Record {
    Record {
        case: case.to_string(),
        inputs: inputs.clone(),
        value: r.value,
        err_est: r.abs_err,
        converged: r.converged,
        tag: tag.to_string(),
    }
}

fn inputs<const N: usize>(pairs: [(&str, f64); N]) -> IndexMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn parallel<T: Sync>(points: &[T], f: impl Fn(&T) -> Result<Vec<Record>, CliError> + Sync + Send) -> Result<Vec<Record>, CliError> {
    let rows: Vec<Vec<Record>> = points.par_iter().map(f).collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn vdw_rows(ctx: &Context, quad: &QuadratureSpec, asymptotes: bool) -> Result<RunOutput, CliError> {
    let points = ctx.positions()?;
    let records = parallel(&points, |pos| {
        let sys = InterfaceSystem::new(ctx.pair.clone(), ctx.atom_a, ctx.atom_b, *pos);
        let tag = sys.regime().as_str();
        let inp = inputs([("separation", pos.separation()), ("z_a", pos.z_a), ("z_b", pos.z_b)]);
        let mut rows = vec![record("full", &inp, settle(vdw_full(&sys, quad))?, tag)];
        if asymptotes {
            rows.push(record("nonretarded", &inp, settle(vdw_nonretarded(&sys, quad))?, tag));
            rows.push(record("retarded", &inp, settle(vdw_retarded(&sys, quad))?, tag));
        }
        Ok(rows)
    })?;
    Ok(RunOutput { records, notes: vec![] })
}

fn default_fractions() -> Vec<f64> {
    (0..25).map(|i| 0.02 + 0.04 * i as f64).collect()
}

fn ratio_rows(ctx: &Context, quad: &QuadratureSpec) -> Result<RunOutput, CliError> {
    let s = &ctx.cfg.scenario;
    let g = &ctx.cfg.geometry;
    let eps1 = ctx.pair.medium1.eps_static();
    let curves: Vec<(String, HalfSpacePair)> = match &s.eps_ratios {
        Some(ratios) => ratios
            .iter()
            .map(|&r| {
                let medium2 = MaterialModel::dispersionless(r * eps1, 1.0)?;
                Ok((format!("eps2/eps1={r}"), HalfSpacePair::new(ctx.pair.medium1.clone(), medium2)))
            })
            .collect::<Result<_, CliError>>()?,
        None => vec![(s.medium2.clone(), ctx.pair.clone())],
    };
    let separation = match grid_values(&g.separation, "geometry.separation")? {
        Some(v) => v[0],
        None => {
            let pos = AtomPositions::from_fraction(1.0, DEFAULT_FRACTION)?;
            let (omega_min, _) = InterfaceSystem::new(ctx.pair.clone(), ctx.atom_a, ctx.atom_b, pos).characteristic_frequencies();
            default_retarded_separation(omega_min)
        }
    };
    let fractions = grid_values(&g.fractions, "geometry.fractions")?.unwrap_or_else(default_fractions);
    let points: Vec<(&str, &HalfSpacePair, f64)> = curves
        .iter()
        .flat_map(|(case, pair)| fractions.iter().map(move |&f| (case.as_str(), pair, f)))
        .collect();
    let records = parallel(&points, |&(case, pair, fraction)| {
        let p = ratio_scan(pair, &ctx.atom_a, &ctx.atom_b, &[fraction], separation, quad)?[0];
        let ratio = pair.medium2.eps_static() / eps1;
        let inp = inputs([("eps_ratio", ratio), ("separation", separation), ("fraction", fraction)]);
        let r = PotentialResult {
            value: p.ratio,
            abs_err: p.abs_err,
            n_evals: 0,
            converged: p.converged,
        };
        Ok(vec![record(case, &inp, r, "retarded")])
    })?;
    Ok(RunOutput {
        records,
        notes: vec![format!("separation Z = {separation:e}")],
    })
}

fn distribution_systems(ctx: &Context) -> Result<Vec<DistributionSystem>, CliError> {
    let density = ctx.density()?;
    ctx.z_a_values()?
        .into_iter()
        .map(|z_a| Ok(DistributionSystem::new(ctx.pair.clone(), ctx.atom_a, z_a, ctx.atom_b, density)?))
        .collect()
}

fn cp_rows(ctx: &Context, quad: &QuadratureSpec) -> Result<RunOutput, CliError> {
    let systems = distribution_systems(ctx)?;
    let pol = ctx.polarizability();
    let records = parallel(&systems, |sys| {
        let inp = inputs([("z_a", sys.z_a), ("density", sys.density_b)]);
        let tag = if sys.is_dilute() { "dilute" } else { "dense" };
        Ok(vec![record("potential", &inp, settle(cp_distribution_potential_with(sys, pol, quad))?, tag)])
    })?;
    Ok(RunOutput { records, notes: vec![] })
}

fn consistency_rows(ctx: &Context, quad: &QuadratureSpec) -> Result<RunOutput, CliError> {
    let threshold = ctx.cfg.scenario.threshold.unwrap_or(DEFAULT_CONSISTENCY_THRESHOLD);
    let systems = distribution_systems(ctx)?;
    let records = parallel(&systems, |sys| {
        let rep = local_field_consistency(sys, quad)?;
        let inp = inputs([("z_a", sys.z_a), ("density", sys.density_b)]);
        let max = rep.max_discrepancy();
        let r = PotentialResult {
            value: max,
            abs_err: (rep.discrepancy_fd - rep.discrepancy_direct).abs(),
            n_evals: 0,
            converged: rep.converged,
        };
        Ok(vec![record("discrepancy", &inp, r, if max <= threshold { "pass" } else { "fail" })])
    })?;
    let worst = records.iter().map(|r| r.value).fold(0.0, f64::max);
    let verdict = if worst <= threshold { "PASS" } else { "FAIL" };
    Ok(RunOutput {
        records,
        notes: vec![format!("max relative discrepancy {worst:.3e} (threshold {threshold:e}): {verdict}")],
    })
}

fn slab_rows<M: Mirror + Clone + Send>(ctx: &Context, mirror: M, quad: &QuadratureSpec) -> Result<RunOutput, CliError> {
    let g = &ctx.cfg.geometry;
    let thickness = g.thickness.ok_or_else(|| missing("geometry.thickness"))?;
    let density = ctx.density()?;
    let distances = grid_values(&g.distance, "geometry.distance")?.ok_or_else(|| missing("geometry.distance"))?;
    let mixture = MixtureSpec::new(ctx.pair.medium1.clone(), ctx.atom_a, density)?;
    let systems: Vec<SlabSystem<M>> = distances
        .into_iter()
        .map(|d| SlabSystem::new(mixture.clone(), mirror.clone(), d, thickness))
        .collect::<Result<_, _>>()?;
    let records = parallel(&systems, |sys| {
        let inp = inputs([("distance", sys.separation), ("thickness", sys.thickness), ("density", density)]);
        let tag = if sys.is_thin() { "thin" } else { "thick" };
        let fs = settle(slab_force(sys, quad))?;
        let fa = settle(cp_atom_force(&sys.host, &sys.slab.dopant, Polarizability::LocalField, &sys.mirror, sys.separation, quad))?;
        let scale = density * thickness * fa.value;
        let ratio = PotentialResult {
            value: fs.value / scale,
            abs_err: (fs.abs_err + fs.value.abs() * fa.relative_error()) / scale.abs(),
            n_evals: 0,
            converged: fs.converged && fa.converged,
        };
        Ok(vec![record("slab-force", &inp, fs, tag), record("atom-sum-ratio", &inp, ratio, tag)])
    })?;
    Ok(RunOutput { records, notes: vec![] })
}
