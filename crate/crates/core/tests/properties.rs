use std::f64::consts::LN_2;

use proptest::prelude::*;

use hphi::audit::{run_audit, AuditConfig, Suite};
use hphi::classical::{entropy_finite, entropy_of_weights, majorizes, BistochasticMatrix, ProbVector};
use hphi::functionals::{default_functionals, EntropicFunctional};
use hphi::gpt::{enumerate_basic_decompositions, gpt_entropy, gpt_majorant, gpt_majorization, ConvexModel};
use hphi::quantum::{quantum_entropy, DensityOperator};
use hphi::random::{random_prob_vector, random_unitary, trial_rng};

fn prob_vector(max_len: usize) -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_filter_map("nonzero total", |v| {
        let total: f64 = v.iter().sum();
        (total > 1e-6).then(|| ProbVector::renormalized(v).unwrap())
    })
}

fn square() -> ConvexModel {
    ConvexModel::new(
        2,
        vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]],
    )
    .unwrap()
}

proptest! {
    #[test]
    fn mixing_never_lowers_entropy(p in prob_vector(7), seed in any::<u64>()) {
        let q = BistochasticMatrix::from_unitary(&random_unitary(p.len(), &mut trial_rng(seed, 0))).unwrap();
        let mixed = q.apply(&p).unwrap();
        prop_assert!(majorizes(p.entries(), mixed.entries()).unwrap());
        for f in default_functionals() {
            prop_assert!(entropy_finite(&mixed, &f).value >= entropy_finite(&p, &f).value - 1e-9);
        }
    }

    #[test]
    fn entropy_is_permutation_invariant(p in prob_vector(8), seed in any::<u64>()) {
        let mut shuffled = p.entries().to_vec();
        let n = shuffled.len();
        shuffled.rotate_left(seed as usize % n);
        let shuffled = ProbVector::new(shuffled).unwrap();
        for f in default_functionals() {
            prop_assert_eq!(entropy_finite(&p, &f).value, entropy_finite(&shuffled, &f).value);
        }
    }

    #[test]
    fn simplex_collapse(seed in any::<u64>(), d in 1usize..=4) {
        let mut rng = trial_rng(seed, 1);
        let vertices: Vec<Vec<f64>> = (0..=d)
            .map(|i| (0..d).map(|j| if i == j + 1 { 1.0 } else { 0.0 }).collect())
            .collect();
        let model = ConvexModel::new(d, vertices.clone()).unwrap();
        prop_assert!(model.is_simplex());
        let w = random_prob_vector(d + 1, &mut rng);
        let x: Vec<f64> = (0..d).map(|j| w.entries()[j + 1]).collect();
        for f in default_functionals() {
            let g = gpt_entropy(&model, &x, &f).unwrap().value;
            prop_assert!((g - entropy_finite(&w, &f).value).abs() <= 1e-9);
        }
    }

    #[test]
    fn one_simplex_matches_diagonal_density(lambda in 0.0f64..=1.0) {
        let model = ConvexModel::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let p = ProbVector::new(vec![lambda, 1.0 - lambda]).unwrap();
        let rho = DensityOperator::diagonal(&p);
        for f in default_functionals() {
            let g = gpt_entropy(&model, &[lambda, 1.0 - lambda], &f).unwrap().value;
            prop_assert!((g - quantum_entropy(&rho, &f).value).abs() <= 1e-9);
        }
    }

    #[test]
    fn majorant_has_lowest_entropy(a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
        let model = square();
        let x = [a, b];
        if let Some(maj) = gpt_majorant(&model, &x).unwrap() {
            for dec in enumerate_basic_decompositions(&model, &x).unwrap() {
                prop_assert!(majorizes(&maj, &dec.weights).unwrap());
                for f in default_functionals() {
                    prop_assert!(dec.entropy(&f) >= entropy_of_weights(&maj, &f) - 1e-9);
                }
            }
        }
    }
}

#[test]
fn argmin_beats_sampled_decompositions() {
    let report = run_audit(&AuditConfig::new(Suite::GptArgmin, 200, 11)).unwrap();
    assert_eq!(report.violations, 0, "{:?}", report.records.iter().find(|r| !r.passed));
    assert_eq!(report.records_for("gpt-argmin").count(), 200 * default_functionals().len());
}

#[test]
fn vertices_have_zero_entropy() {
    let model = square();
    for v in model.vertices() {
        for f in default_functionals() {
            assert!(gpt_entropy(&model, v, &f).unwrap().value.abs() <= 1e-12, "{f}");
        }
    }
}

// The center's only decompositions are the two diagonals, (1/2,1/2), while
// the edge midpoints need three vertices, (1/2,1/4,1/4); the center
// therefore has the smallest entropy of the five points, not the largest.
#[test]
fn square_center_is_least_mixed_of_axis_points() {
    let model = square();
    let s = EntropicFunctional::shannon();
    let center = gpt_entropy(&model, &[0.0, 0.0], &s).unwrap().value;
    assert!((center - LN_2).abs() <= 1e-12);
    for x in [[0.5, 0.0], [-0.5, 0.0], [0.0, 0.5], [0.0, -0.5]] {
        let h = gpt_entropy(&model, &x, &s).unwrap().value;
        assert!((h - 1.5 * LN_2).abs() <= 1e-12);
        assert!(h > center);
    }
}

#[test]
fn vertex_state_majorizes_center() {
    let model = square();
    assert_eq!(gpt_majorization(&model, &[1.0, 1.0], &[0.0, 0.0]).unwrap(), Some(true));
    assert_eq!(gpt_majorization(&model, &[0.0, 0.0], &[0.0, 0.0]).unwrap(), Some(true));
    assert_eq!(gpt_majorization(&model, &[0.0, 0.0], &[1.0, 1.0]).unwrap(), Some(false));
}
