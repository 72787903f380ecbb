mod common;

use proptest::prelude::*;
use vmcascade_core::model::{expected_cost, expected_distortion, CostTable, DistortionTable};
use vmcascade_core::prob::{Alphabet, ConditionalChannel, JointDistribution};

fn with_action(pa: &[f64]) -> JointDistribution {
    JointDistribution::new(vec![Alphabet::new("A", pa.len()).unwrap()], pa.to_vec()).unwrap()
}

fn normalized(w: &[f64]) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter().map(|v| v / s).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn expected_cost_is_linear_and_scales(
        w1 in prop::collection::vec(0.01f64..1.0, 4),
        w2 in prop::collection::vec(0.01f64..1.0, 4),
        costs in prop::collection::vec(0.0f64..5.0, 4),
        t in 0.0f64..1.0,
        c in 0.0f64..10.0,
    ) {
        let (p, q) = (normalized(&w1), normalized(&w2));
        let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let table = CostTable::new(&costs).unwrap();
        let e = |pa: &[f64], tb: &CostTable| expected_cost(&with_action(pa), "A", tb).unwrap();
        prop_assert!((e(&mix, &table) - (t * e(&p, &table) + (1.0 - t) * e(&q, &table))).abs() < 1e-9);
        prop_assert!((e(&p, &table.scaled(c).unwrap()) - c * e(&p, &table)).abs() < 1e-9);
    }

    #[test]
    fn correct_reproduction_has_zero_hamming_distortion(n in 1usize..6, w in prop::collection::vec(0.01f64..1.0, 6)) {
        let px = JointDistribution::new(vec![Alphabet::new("X", n).unwrap()], normalized(&w[..n])).unwrap();
        let copy = ConditionalChannel::deterministic(
            vec![Alphabet::new("X", n).unwrap()],
            vec![Alphabet::new("Xh", n).unwrap()],
            |x| vec![x[0]],
        ).unwrap();
        let j = px.compose(&copy).unwrap();
        prop_assert_eq!(expected_distortion(&j, &DistortionTable::hamming(n), "X", "Xh").unwrap(), 0.0);
    }
}

#[test]
fn validation_is_idempotent() {
    let mut rng = common::rng(41);
    for _ in 0..20 {
        let m = common::cascade(&mut rng, (2, 3, 2, 2));
        let before = m.clone();
        m.validate().unwrap();
        m.validate().unwrap();
        assert_eq!(m, before);
        let b = common::degraded(&mut rng, (3, 2, 2, 2));
        b.validate().unwrap();
        b.validate().unwrap();
        assert!(b.degradedness_residual() < 1e-9);
    }
}
