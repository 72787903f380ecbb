use proptest::prelude::*;
use vmcascade_core::oracle::mi_oracle;
use vmcascade_core::prob::{Alphabet, ConditionalChannel, JointDistribution};

fn dist(sizes: &[usize], w: &[f64]) -> JointDistribution {
    let vars = ["A", "B", "C"]
        .iter()
        .zip(sizes)
        .map(|(n, &s)| Alphabet::new(*n, s).unwrap())
        .collect();
    let n: usize = sizes.iter().product();
    let mut mass: Vec<f64> = w[..n].to_vec();
    mass[0] += 1e-3;
    let s: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|v| *v /= s);
    JointDistribution::new(vars, mass).unwrap()
}

fn three() -> impl Strategy<Value = JointDistribution> {
    (prop::collection::vec(1usize..=4, 3), prop::collection::vec(0.0f64..1.0, 64))
        .prop_map(|(s, w)| dist(&s, &w))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn chain_rule(d in three()) {
        let hab = d.entropy(&["A", "B"]).unwrap();
        let split = d.entropy(&["A"]).unwrap() + d.conditional_entropy(&["B"], &["A"]).unwrap();
        prop_assert!((hab - split).abs() < 1e-9);
        let i = d.mutual_information(&["A"], &["B", "C"]).unwrap();
        let i2 = d.mutual_information(&["A"], &["B"]).unwrap()
            + d.conditional_mutual_information(&["A"], &["C"], &["B"]).unwrap();
        prop_assert!((i - i2).abs() < 1e-9);
    }

    #[test]
    fn nonnegativity(d in three()) {
        for s in [&["A"][..], &["B", "C"], &["A", "B", "C"]] {
            prop_assert!(d.entropy(s).unwrap() >= 0.0);
        }
        prop_assert!(d.conditional_entropy(&["A"], &["B", "C"]).unwrap() >= 0.0);
        prop_assert!(d.conditional_mutual_information(&["A"], &["B"], &["C"]).unwrap() >= 0.0);
    }

    #[test]
    fn agrees_with_direct_summation(d in three()) {
        let fast = d.conditional_mutual_information(&["A"], &["B"], &["C"]).unwrap();
        let slow = mi_oracle(&d, &["A"], &["B"], &["C"]).unwrap();
        prop_assert!((fast - slow).abs() < 1e-9);
        let fast = d.mutual_information(&["A", "C"], &["B"]).unwrap();
        let slow = mi_oracle(&d, &["A", "C"], &["B"], &[]).unwrap();
        prop_assert!((fast - slow).abs() < 1e-9);
    }

    #[test]
    fn data_processing(
        na in 1usize..=4, nb in 1usize..=4, nc in 1usize..=4,
        w in prop::collection::vec(0.01f64..1.0, 4 + 16 + 16),
    ) {
        let pa = JointDistribution::new(vec![Alphabet::new("A", na).unwrap()], w[..na].to_vec().iter().map(|v| v / w[..na].iter().sum::<f64>()).collect()).unwrap();
        let norm = |raw: &[f64], width: usize| -> Vec<f64> {
            raw.chunks(width).flat_map(|c| { let s: f64 = c.iter().sum(); c.iter().map(move |v| v / s) }).collect()
        };
        let ab = ConditionalChannel::new(vec![Alphabet::new("A", na).unwrap()], vec![Alphabet::new("B", nb).unwrap()], norm(&w[4..4 + na * nb], nb)).unwrap();
        let bc = ConditionalChannel::new(vec![Alphabet::new("B", nb).unwrap()], vec![Alphabet::new("C", nc).unwrap()], norm(&w[20..20 + nb * nc], nc)).unwrap();
        let d = pa.compose(&ab).unwrap().compose(&bc).unwrap();
        prop_assert!(d.mutual_information(&["A"], &["C"]).unwrap() <= d.mutual_information(&["A"], &["B"]).unwrap() + 1e-9);
        prop_assert!(d.is_markov_chain(&["A"], &["B"], &["C"], 1e-9).unwrap());
        let back = d.marginalize(&["A"]).unwrap();
        for (x, y) in back.mass().iter().zip(pa.mass()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
