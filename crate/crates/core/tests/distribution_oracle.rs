use lifshitz_core::casimir_polder::{cp_distribution_potential, cp_pairwise_oracle, DistributionSystem};
use lifshitz_core::materials::{AtomModel, MaterialModel, OscillatorTerm};
use lifshitz_core::planar_optics::HalfSpacePair;
use lifshitz_core::quadrature::QuadratureSpec;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn quad() -> QuadratureSpec {
    QuadratureSpec {
        max_evals: 4_000_000,
        ..QuadratureSpec::with_rel_tol(1e-7)
    }
}

fn random_medium(rng: &mut StdRng) -> MaterialModel {
    let eps = OscillatorTerm::new(rng.random_range(0.2..4.0), rng.random_range(0.3..3.0), rng.random_range(0.0..0.5)).unwrap();
    let mu = OscillatorTerm::new(rng.random_range(0.0..0.8), rng.random_range(0.3..3.0), 0.0).unwrap();
    MaterialModel::new(vec![eps], vec![mu]).unwrap()
}

#[test]
fn pairwise_sum_matches_reduced_potential() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..5 {
        let pair = HalfSpacePair::new(random_medium(&mut rng), random_medium(&mut rng));
        let atom_a = AtomModel::new(rng.random_range(0.2..2.0), rng.random_range(0.5..2.0)).unwrap();
        let atom_b = AtomModel::new(rng.random_range(0.2..2.0), rng.random_range(0.5..2.0)).unwrap();
        let sys = DistributionSystem::new(pair, atom_a, -rng.random_range(0.05..5.0), atom_b, 1e-3).unwrap();
        let reduced = cp_distribution_potential(&sys, &quad()).unwrap();
        let oracle = cp_pairwise_oracle(&sys, &quad()).unwrap();
        assert!(reduced.converged && oracle.converged);
        let gap = (reduced.value / oracle.value - 1.0).abs();
        assert!(gap < 1e-5, "{sys:?}: {gap:e}");
    }
}

#[test]
fn pairwise_sum_power_laws_in_vacuum() {
    let atom = AtomModel::new(1.0, 1.0).unwrap();
    let potential = |d: f64| {
        let sys = DistributionSystem::new(HalfSpacePair::default(), atom, -d, atom, 1e-3).unwrap();
        cp_pairwise_oracle(&sys, &quad()).unwrap().value
    };
    let slope = |d: f64| (potential(1.2 * d).abs().ln() - potential(d).abs().ln()) / 1.2f64.ln();
    let near = slope(1e-3);
    let far = slope(1e3);
    assert!((near + 3.0).abs() < 0.05, "{near}");
    assert!((far + 4.0).abs() < 0.05, "{far}");
}

#[test]
fn zero_density_gives_zero() {
    let atom = AtomModel::new(1.0, 1.0).unwrap();
    let sys = DistributionSystem::new(HalfSpacePair::default(), atom, -1.0, atom, 0.0).unwrap();
    assert_eq!(cp_pairwise_oracle(&sys, &quad()).unwrap().value, 0.0);
    assert_eq!(cp_distribution_potential(&sys, &quad()).unwrap().value, 0.0);
}
