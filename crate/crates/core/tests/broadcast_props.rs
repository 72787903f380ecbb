mod common;

use rand::Rng;
use vmcascade_core::broadcast::{
    eval_broadcast_lossless, eval_cr_point, eval_switching, optimize_broadcast_lossless, optimize_cr,
    optimize_cr_seeded, two_action_channel, weighted_sumrate, ActionMode, CRTestChannel, CrOptimum, RateWeights,
    SweepGrid,
};
use vmcascade_core::model::{Budget, BroadcastModel, DistortionTable, SwitchingModel};
use vmcascade_core::oracle::mi_oracle;
use vmcascade_core::prob::{Alphabet, ConditionalChannel};
use vmcascade_core::SearchConfig;

fn action(rng: &mut rand_chacha::ChaCha8Rng, nx: usize, na: usize) -> ConditionalChannel {
    ConditionalChannel::new(
        vec![Alphabet::new("X", nx).unwrap()],
        vec![Alphabet::new("A", na).unwrap()],
        common::table(rng, nx, na),
    )
    .unwrap()
}

fn general(rng: &mut rand_chacha::ChaCha8Rng, nx: usize, ny: usize, nz: usize, na: usize) -> BroadcastModel {
    let cost = common::costs(rng, na);
    BroadcastModel::from_tables(
        common::pmf(rng, nx),
        (ny, nz),
        common::table(rng, na * nx, ny * nz),
        &cost,
        DistortionTable::hamming(nx),
        DistortionTable::hamming(nx),
        false,
    )
    .unwrap()
}

#[test]
fn lossless_gaps_are_conditional_entropies() {
    let mut rng = common::rng(31);
    for _ in 0..40 {
        let (nx, ny, nz, na) = (
            common::size(&mut rng, 2, 3),
            common::size(&mut rng, 1, 3),
            common::size(&mut rng, 1, 3),
            common::size(&mut rng, 1, 3),
        );
        let m = general(&mut rng, nx, ny, nz, na);
        let act = action(&mut rng, nx, na);
        let p = eval_broadcast_lossless(&m, &act).unwrap();
        let joint = m.source().compose(&act).unwrap().compose(m.side_info()).unwrap();
        let hy = joint.entropy(&["X", "A", "Y"]).unwrap() - joint.entropy(&["A", "Y"]).unwrap();
        let hz = joint.entropy(&["X", "A", "Z"]).unwrap() - joint.entropy(&["A", "Z"]).unwrap();
        assert!(p.rb_min >= 0.0);
        assert!((p.r1_plus_rb_min - p.rb_min - hy).abs() < 1e-9);
        assert!((p.r2_plus_rb_min - p.rb_min - hz).abs() < 1e-9);
        assert!((p.rb_min - mi_oracle(&joint, &["X"], &["A"], &[]).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn switching_matches_the_expanded_switch_table() {
    let mut rng = common::rng(32);
    for _ in 0..30 {
        let (nx, nw) = (common::size(&mut rng, 2, 3), common::size(&mut rng, 2, 3));
        let lambdas = [0.0, rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), 1.0];
        let m = SwitchingModel::from_tables(common::pmf(&mut rng, nx * nw), (nx, nw), lambdas).unwrap();
        let act = action(&mut rng, nx, 4);
        let a = eval_switching(&m, &act).unwrap();
        let b = eval_broadcast_lossless(&m.to_broadcast().unwrap(), &act).unwrap();
        for (u, v) in [
            (a.rb_min, b.rb_min),
            (a.r1_plus_rb_min, b.r1_plus_rb_min),
            (a.r2_plus_rb_min, b.r2_plus_rb_min),
            (a.cost, b.cost),
        ] {
            assert!((u - v).abs() <= 1e-9, "{u} vs {v}");
        }
    }
    for i in 0..=20 {
        for j in 0..=20 {
            let (q, delta) = (i as f64 / 20.0, j as f64 / 20.0);
            let m = SwitchingModel::bsc(delta).unwrap();
            let act = two_action_channel(q, q).unwrap();
            let a = eval_switching(&m, &act).unwrap();
            let b = eval_broadcast_lossless(&m.to_broadcast().unwrap(), &act).unwrap();
            assert!((a.r1_plus_rb_min - b.r1_plus_rb_min).abs() <= 1e-9);
            assert!((a.r2_plus_rb_min - b.r2_plus_rb_min).abs() <= 1e-9);
        }
    }
}

#[test]
fn full_side_information_makes_both_bounds_equal() {
    let m = SwitchingModel::from_tables(vec![0.3, 0.1, 0.2, 0.4], (2, 2), [0.0, 1.0, 1.0, 2.0]).unwrap();
    let act = ConditionalChannel::new(
        vec![Alphabet::new("X", 2).unwrap()],
        vec![Alphabet::new("A", 4).unwrap()],
        vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
    )
    .unwrap();
    let p = eval_switching(&m, &act).unwrap();
    let pair = m.source_pair();
    let expect = pair.entropy(&["X"]).unwrap() - pair.mutual_information(&["X"], &["W"]).unwrap();
    assert!((p.r1_plus_rb_min - expect).abs() < 1e-12 && (p.r2_plus_rb_min - expect).abs() < 1e-12);
    assert_eq!(p.cost, 2.0);
}

#[test]
fn greedy_never_beats_optimal() {
    let m = SwitchingModel::s_channel(0.6).unwrap();
    let grid = SweepGrid { steps: 40, refine_steps: Some(400) };
    for gamma in [0.0, 0.2, 0.7] {
        for rb in [0.0, 0.3] {
            for eta in [0.0, 0.4, 1.0] {
                let o = weighted_sumrate(&m, eta, rb, gamma, ActionMode::Optimal, grid).unwrap();
                let g = weighted_sumrate(&m, eta, rb, gamma, ActionMode::Greedy, grid).unwrap();
                assert!(g.value >= o.value - 1e-9);
                assert!(o.cost <= gamma + 1e-12 && g.alpha == g.beta);
            }
        }
    }
}

fn identity_recon(m: &BroadcastModel) -> ConditionalChannel {
    ConditionalChannel::deterministic(
        vec![Alphabet::new("X", m.nx()).unwrap(), Alphabet::new("A", m.na()).unwrap()],
        vec![Alphabet::new("Xh1", m.nxhat1()).unwrap(), Alphabet::new("Xh2", m.nxhat2()).unwrap()],
        |xa| vec![xa[0], xa[0]],
    )
    .unwrap()
}

#[test]
fn cr_terms_match_direct_summation() {
    let mut rng = common::rng(33);
    for _ in 0..20 {
        let m = common::degraded(&mut rng, (2, 2, 2, 2));
        let recon = ConditionalChannel::new(
            vec![Alphabet::new("X", 2).unwrap(), Alphabet::new("A", 2).unwrap()],
            vec![Alphabet::new("Xh1", 2).unwrap(), Alphabet::new("Xh2", 2).unwrap()],
            common::table(&mut rng, 4, 4),
        )
        .unwrap();
        let t = CRTestChannel::new(&m, action(&mut rng, 2, 2), recon).unwrap();
        let p = eval_cr_point(&m, &t).unwrap();
        let j = t.joint(&m).unwrap();
        let ia = mi_oracle(&j, &["X"], &["A"], &[]).unwrap();
        let b = mi_oracle(&j, &["X"], &["Xh1", "Xh2"], &["A", "Y"]).unwrap();
        let c = mi_oracle(&j, &["X"], &["Xh2"], &["A", "Z"]).unwrap();
        let d = mi_oracle(&j, &["X"], &["Xh1"], &["A", "Y", "Xh2"]).unwrap();
        assert!((p.rb_min - ia).abs() < 1e-9);
        assert!((p.r1_plus_rb_min - ia - b).abs() < 1e-9);
        assert!((p.r2_plus_rb_min - ia - c).abs() < 1e-9);
        assert!((p.r_sum_min.unwrap() - ia - c - d).abs() < 1e-9);
        assert!(p.r_sum_min.unwrap() >= p.r2_plus_rb_min - 1e-12);
    }
}

#[test]
fn cr_reduces_to_lossless_with_and_without_z() {
    let mut rng = common::rng(34);
    for _ in 0..20 {
        let m = common::degraded(&mut rng, (3, 2, 2, 2));
        let act = action(&mut rng, 3, 2);
        for model in [m.clone(), m.without_z().unwrap()] {
            let t = CRTestChannel::new(&model, act.clone(), identity_recon(&model)).unwrap();
            let cr = eval_cr_point(&model, &t).unwrap();
            let ll = eval_broadcast_lossless(&model, &act).unwrap();
            assert!((cr.rb_min - ll.rb_min).abs() <= 1e-12);
            assert!((cr.r1_plus_rb_min - ll.r1_plus_rb_min).abs() <= 1e-12);
            assert!((cr.r2_plus_rb_min - ll.r2_plus_rb_min).abs() <= 1e-12);
            assert_eq!((cr.d1, cr.d2), (Some(0.0), Some(0.0)));
        }
    }
}

fn search(seed: u64) -> SearchConfig {
    SearchConfig {
        starts: 12,
        sweeps: 80,
        ..SearchConfig::default()
    }
    .with_seed(seed)
}

#[test]
fn zero_distortion_cr_matches_the_lossless_search() {
    let mut rng = common::rng(35);
    for k in 0..3 {
        let m = common::degraded(&mut rng, (2, 2, 2, 2));
        let w = RateWeights::new(1.0, 0.7, 0.5).unwrap();
        let cr = optimize_cr(&m, &Budget::lossless(0.4), &w, &search(k)).unwrap();
        let ll = optimize_broadcast_lossless(&m, 0.4, &w, &search(k)).unwrap();
        assert!((cr.objective - ll.objective).abs() < 2e-3, "{} vs {}", cr.objective, ll.objective);
    }
}

#[test]
fn cr_objective_is_monotone_in_gamma() {
    let mut rng = common::rng(36);
    let m = common::degraded(&mut rng, (2, 2, 2, 2));
    let w = RateWeights::new(1.0, 1.0, 1.0).unwrap();
    let floor = m.d1().min_expected(m.source().mass());
    let mut prev: Option<CrOptimum> = None;
    for gamma in [0.0, 0.2, 0.5, 1.0] {
        let b = Budget::new(gamma, 0.4 * floor, 0.4 * floor).unwrap();
        let seeds: Vec<CRTestChannel> = prev.iter().map(|p| p.channel.clone()).collect();
        let cur = optimize_cr_seeded(&m, &b, &w, &search(1), &seeds).unwrap();
        assert!(cur.point.cost <= gamma + 1e-9);
        if let Some(p) = &prev {
            assert!(cur.objective <= p.objective + 1e-12);
        }
        prev = Some(cur);
    }
}

#[test]
fn non_degraded_models_are_rejected_by_the_lossy_optimizer() {
    let m = SwitchingModel::bsc(0.2).unwrap().to_broadcast().unwrap();
    let w = RateWeights::new(1.0, 1.0, 1.0).unwrap();
    assert!(optimize_cr(&m, &Budget::unconstrained(), &w, &search(0)).is_err());
}
