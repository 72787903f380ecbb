mod common;

use rand::Rng;
use vmcascade_core::cascade::{
    eval_cascade_lossless, eval_cascade_point, optimize_cascade, optimize_cascade_lossless, optimize_cascade_seeded,
    CascadeTestChannel,
};
use vmcascade_core::model::{Budget, CascadeModel, DistortionTable};
use vmcascade_core::prob::{Alphabet, ConditionalChannel};
use vmcascade_core::SearchConfig;

fn small_search(seed: u64, aux: usize) -> SearchConfig {
    SearchConfig {
        starts: 12,
        sweeps: 80,
        aux_size: Some(aux),
        ..SearchConfig::default()
    }
    .with_seed(seed)
}

fn random_test_channel(rng: &mut rand_chacha::ChaCha8Rng, m: &CascadeModel, nu: usize) -> CascadeTestChannel {
    let from = vec![Alphabet::new("X", m.nx()).unwrap(), Alphabet::new("Y", m.ny()).unwrap()];
    let to = vec![
        Alphabet::new("Xh1", m.nxhat1()).unwrap(),
        Alphabet::new("A", m.na()).unwrap(),
        Alphabet::new("U", nu).unwrap(),
    ];
    let width = m.nxhat1() * m.na() * nu;
    let ch = ConditionalChannel::new(from, to, common::table(rng, m.nx() * m.ny(), width)).unwrap();
    let decode = (0..nu * m.nz()).map(|_| rng.gen_range(0..m.nxhat2())).collect();
    CascadeTestChannel::new(m, ch, decode).unwrap()
}

fn dims(rng: &mut rand_chacha::ChaCha8Rng) -> (usize, usize, usize, usize) {
    (
        common::size(rng, 2, 3),
        common::size(rng, 1, 3),
        common::size(rng, 1, 3),
        common::size(rng, 1, 3),
    )
}

#[test]
fn rates_are_finite_and_nonnegative() {
    let mut rng = common::rng(21);
    for _ in 0..50 {
        let d = dims(&mut rng);
        let m = common::cascade(&mut rng, d);
        let nu = common::size(&mut rng, 1, 4);
        let p = eval_cascade_point(&m, &random_test_channel(&mut rng, &m, nu)).unwrap();
        for v in [p.r1_min, p.r2_min, p.d1, p.d2, p.cost] {
            assert!(v.is_finite() && v >= 0.0);
        }
    }
}

#[test]
fn lossless_substitution_matches_the_lossless_region() {
    let mut rng = common::rng(22);
    for _ in 0..50 {
        let d = dims(&mut rng);
        let m = common::cascade(&mut rng, d);
        let action = ConditionalChannel::new(
            vec![Alphabet::new("X", m.nx()).unwrap(), Alphabet::new("Y", m.ny()).unwrap()],
            vec![Alphabet::new("A", m.na()).unwrap()],
            common::table(&mut rng, m.nx() * m.ny(), m.na()),
        )
        .unwrap();
        let t = CascadeTestChannel::lossless(&m, &action).unwrap();
        let a = eval_cascade_point(&m, &t).unwrap();
        let b = eval_cascade_lossless(&m, &action).unwrap();
        assert!((a.r1_min - b.r1_min).abs() <= 1e-9 && (a.r2_min - b.r2_min).abs() <= 1e-9);
        assert_eq!((a.d1, a.d2), (0.0, 0.0));
        assert!((a.cost - b.cost).abs() <= 1e-12);
    }
}

#[test]
fn useless_actions_do_not_change_the_optimum() {
    let mut rng = common::rng(23);
    for k in 0..3 {
        let pxy = common::pmf(&mut rng, 4);
        let vm1 = common::table(&mut rng, 2, 2);
        let vm2: Vec<f64> = vm1.iter().chain(vm1.iter()).copied().collect();
        let h = || DistortionTable::hamming(2);
        let one = CascadeModel::from_tables(pxy.clone(), (2, 2, 2), vm1, &[0.0], h(), h()).unwrap();
        let two = CascadeModel::from_tables(pxy, (2, 2, 2), vm2, &[0.0, 0.5], h(), h()).unwrap();
        let px = one.source().marginalize(&["X"]).unwrap();
        let floor = one.d1().min_expected(px.mass());
        let b = Budget::new(1.0, 0.4 * floor, 0.4 * floor).unwrap();
        let a = optimize_cascade(&one, &b, 1.0, &small_search(k, 3)).unwrap();
        let c = optimize_cascade(&two, &b, 1.0, &small_search(k, 3)).unwrap();
        assert!((a.objective - c.objective).abs() < 2e-3, "{} vs {}", a.objective, c.objective);
    }
}

#[test]
fn zero_distortion_matches_the_lossless_search() {
    let mut rng = common::rng(24);
    for k in 0..3 {
        let m = common::cascade(&mut rng, (2, 2, 2, 2));
        let gamma = 0.4;
        let lossy = optimize_cascade(&m, &Budget::lossless(gamma), 0.8, &small_search(k, 2)).unwrap();
        let lossless = optimize_cascade_lossless(&m, gamma, 0.8, &small_search(k, 2)).unwrap();
        assert!(
            (lossy.objective - lossless.objective).abs() < 2e-3,
            "{} vs {}",
            lossy.objective,
            lossless.objective
        );
    }
}

#[test]
fn objective_is_monotone_in_every_budget() {
    let mut rng = common::rng(25);
    for k in 0..2 {
        let ny = common::size(&mut rng, 2, 3);
        let m = common::cascade(&mut rng, (2, ny, 2, 2));
        let px = m.source().marginalize(&["X"]).unwrap();
        let floor = m.d1().min_expected(px.mass());
        let search = SearchConfig { starts: 6, ..small_search(k, 2) };
        let budgets = [
            [(0.1, 0.2, 0.2), (0.3, 0.2, 0.2), (0.8, 0.2, 0.2)],
            [(0.3, 0.1, 0.3), (0.3, 0.3, 0.3), (0.3, 0.6, 0.3)],
            [(0.3, 0.3, 0.1), (0.3, 0.3, 0.3), (0.3, 0.3, 0.6)],
        ];
        for chain in budgets {
            let mut prev: Option<vmcascade_core::cascade::CascadeOptimum> = None;
            for (g, d1, d2) in chain {
                let b = Budget::new(g, d1 * floor, d2 * floor).unwrap();
                let seeds: Vec<CascadeTestChannel> = prev.iter().map(|p| p.channel.clone()).collect();
                let cur = optimize_cascade_seeded(&m, &b, 1.0, &search, &seeds).unwrap();
                assert!(cur.point.satisfies(&b, 1e-9));
                if let Some(p) = &prev {
                    assert!(cur.objective <= p.objective + 1e-12, "{} after {}", cur.objective, p.objective);
                }
                prev = Some(cur);
            }
        }
    }
}

#[test]
fn cardinality_bound_is_enough() {
    let mut rng = common::rng(26);
    for k in 0..2 {
        let m = common::cascade(&mut rng, (2, 2, 2, 1));
        let px = m.source().marginalize(&["X"]).unwrap();
        let floor = m.d1().min_expected(px.mass());
        let b = Budget::new(1.0, 0.3 * floor, 0.3 * floor).unwrap();
        let at = optimize_cascade(&m, &b, 1.0, &small_search(k, m.aux_bound())).unwrap();
        let past = optimize_cascade(&m, &b, 1.0, &small_search(k, m.aux_bound() + 2)).unwrap();
        assert!(at.objective - past.objective < 1e-3 * at.objective.max(1e-9) + 1e-9);
    }
}

#[test]
fn optimizer_is_deterministic() {
    let mut rng = common::rng(27);
    let m = common::cascade(&mut rng, (2, 2, 2, 2));
    let b = Budget::new(0.3, 0.2, 0.2).unwrap();
    let a = optimize_cascade(&m, &b, 0.5, &small_search(3, 2)).unwrap();
    let c = optimize_cascade(&m, &b, 0.5, &small_search(3, 2)).unwrap();
    assert_eq!(a, c);
}
