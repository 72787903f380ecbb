//! Randomized cross-validation battery.

use std::fmt::Write;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vmcascade_core::broadcast::{
    eval_broadcast_lossless, eval_bsc_closed_form, eval_cr_point, eval_schannel_closed_form, eval_switching,
    optimize_cr, two_action_channel, CRTestChannel, RateWeights,
};
use vmcascade_core::cascade::{eval_cascade_lossless, eval_cascade_point, optimize_cascade, CascadeTestChannel};
use vmcascade_core::model::{var, Budget, BroadcastModel, CascadeModel, DistortionTable, SwitchingModel};
use vmcascade_core::oracle::{brute_force_cascade, brute_force_cr, mi_oracle, GridSpec};
use vmcascade_core::prob::{Alphabet, ConditionalChannel, JointDistribution};
use vmcascade_core::{Error, SearchConfig};

use crate::commands::Report;
use crate::config::Invalid;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleCheckOptions {
    /// Random cases per identity check; the oracle checks run
    /// `max(1, trials / 20)` instances each.
    pub trials: usize,
    pub seed: u64,
    /// Allowed discrepancy for identities. Optimizer-versus-oracle
    /// agreement gets `1000 * tolerance`.
    pub tolerance: f64,
    /// Largest alphabet in the random models.
    pub max_size: usize,
}

impl Default for OracleCheckOptions {
    fn default() -> Self {
        OracleCheckOptions {
            trials: 100,
            seed: 0,
            tolerance: 1e-9,
            max_size: 3,
        }
    }
}

fn pmf(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| if rng.gen_range(0..6) == 0 { 0.0 } else { -rng.gen::<f64>().max(1e-12).ln() })
            .collect();
        let s: f64 = w.iter().sum();
        if s > 0.0 {
            return w.into_iter().map(|v| v / s).collect();
        }
    }
}

fn table(rng: &mut ChaCha8Rng, slices: usize, width: usize) -> Vec<f64> {
    (0..slices).flat_map(|_| pmf(rng, width)).collect()
}

fn alph(name: &str, n: usize) -> Alphabet {
    Alphabet::new(name, n).expect("positive size")
}

fn costs(rng: &mut ChaCha8Rng, na: usize) -> Vec<f64> {
    (0..na).map(|a| if a == 0 { 0.0 } else { rng.gen_range(0.0..1.0) }).collect()
}

fn cascade(rng: &mut ChaCha8Rng, nx: usize, ny: usize, nz: usize, na: usize) -> Result<CascadeModel> {
    let pxy = pmf(rng, nx * ny);
    let vm = table(rng, na * ny, nz);
    let cost = costs(rng, na);
    Ok(CascadeModel::from_tables(
        pxy,
        (nx, ny, nz),
        vm,
        &cost,
        DistortionTable::hamming(nx),
        DistortionTable::hamming(nx),
    )?)
}

fn degraded(rng: &mut ChaCha8Rng, nx: usize, ny: usize, nz: usize, na: usize) -> Result<BroadcastModel> {
    let px = pmf(rng, nx);
    let py = table(rng, na * nx, ny);
    let pz = table(rng, na * ny, nz);
    let mut vm = Vec::with_capacity(na * nx * ny * nz);
    for a in 0..na {
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    vm.push(py[(a * nx + x) * ny + y] * pz[(a * ny + y) * nz + z]);
                }
            }
        }
    }
    let cost = costs(rng, na);
    Ok(BroadcastModel::from_tables(
        px,
        (ny, nz),
        vm,
        &cost,
        DistortionTable::hamming(nx),
        DistortionTable::hamming(nx),
        true,
    )?)
}

/// Largest absolute difference over the compared pairs.
fn worst(pairs: &[(f64, f64)]) -> f64 {
    pairs.iter().fold(0.0, |m: f64, (a, b)| {
        let d = (a - b).abs();
        if a == b {
            m
        } else if d.is_nan() {
            f64::INFINITY
        } else {
            m.max(d)
        }
    })
}

struct Check {
    name: &'static str,
    cases: usize,
    err: f64,
    tol: f64,
}

fn mi_check(rng: &mut ChaCha8Rng, o: &OracleCheckOptions) -> Result<Check> {
    let mut err: f64 = 0.0;
    for _ in 0..o.trials {
        let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=o.max_size)).collect();
        let vars = vec![alph("A", sizes[0]), alph("B", sizes[1]), alph("C", sizes[2])];
        let d = JointDistribution::new(vars, pmf(rng, sizes.iter().product()))?;
        for (a, b, c) in [(&["A"][..], &["B"][..], &["C"][..]), (&["A"], &["B", "C"], &[]), (&["C"], &["A"], &["B"])] {
            let fast = d.conditional_mutual_information(a, b, c)?;
            let slow = mi_oracle(&d, a, b, c)?;
            err = err.max(worst(&[(fast, slow)]));
        }
    }
    Ok(Check {
        name: "mi-oracle",
        cases: o.trials,
        err,
        tol: o.tolerance,
    })
}

fn substitution_check(rng: &mut ChaCha8Rng, o: &OracleCheckOptions) -> Result<Check> {
    let mut err: f64 = 0.0;
    for _ in 0..o.trials {
        let n: Vec<usize> = (0..4).map(|_| rng.gen_range(2..=o.max_size)).collect();
        let m = cascade(rng, n[0], n[1], n[2], n[3])?;
        let act = ConditionalChannel::new(
            vec![alph(var::X, n[0]), alph(var::Y, n[1])],
            vec![alph(var::A, n[3])],
            table(rng, n[0] * n[1], n[3]),
        )?;
        let p = eval_cascade_point(&m, &CascadeTestChannel::lossless(&m, &act)?)?;
        let q = eval_cascade_lossless(&m, &act)?;
        err = err.max(worst(&[(p.r1_min, q.r1_min), (p.r2_min, q.r2_min), (p.cost, q.cost), (p.d1, 0.0), (p.d2, 0.0)]));
    }
    Ok(Check {
        name: "lossless-substitution",
        cases: o.trials,
        err,
        tol: o.tolerance,
    })
}

fn switch_check(rng: &mut ChaCha8Rng, o: &OracleCheckOptions) -> Result<Check> {
    let mut err: f64 = 0.0;
    for _ in 0..o.trials {
        let (nx, nw) = (rng.gen_range(2..=o.max_size), rng.gen_range(2..=o.max_size));
        let lambdas = [0.0, rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), 1.0];
        let m = SwitchingModel::from_tables(pmf(rng, nx * nw), (nx, nw), lambdas)?;
        let act = ConditionalChannel::new(vec![alph(var::X, nx)], vec![alph(var::A, 4)], table(rng, nx, 4))?;
        let a = eval_switching(&m, &act)?;
        let b = eval_broadcast_lossless(&m.to_broadcast()?, &act)?;
        err = err.max(worst(&[
            (a.rb_min, b.rb_min),
            (a.r1_plus_rb_min, b.r1_plus_rb_min),
            (a.r2_plus_rb_min, b.r2_plus_rb_min),
            (a.cost, b.cost),
        ]));
    }
    Ok(Check {
        name: "switch-expansion",
        cases: o.trials,
        err,
        tol: o.tolerance,
    })
}

fn cr_reduction_check(rng: &mut ChaCha8Rng, o: &OracleCheckOptions) -> Result<Check> {
    let mut err: f64 = 0.0;
    for _ in 0..o.trials {
        let n: Vec<usize> = (0..4).map(|_| rng.gen_range(2..=o.max_size)).collect();
        let m = degraded(rng, n[0], n[1], n[2], n[3])?;
        let act = ConditionalChannel::new(vec![alph(var::X, n[0])], vec![alph(var::A, n[3])], table(rng, n[0], n[3]))?;
        for model in [m.clone(), m.without_z()?] {
            let cr = eval_cr_point(&model, &CRTestChannel::lossless(&model, act.clone())?)?;
            let ll = eval_broadcast_lossless(&model, &act)?;
            err = err.max(worst(&[
                (cr.rb_min, ll.rb_min),
                (cr.r1_plus_rb_min, ll.r1_plus_rb_min),
                (cr.r2_plus_rb_min, ll.r2_plus_rb_min),
                (cr.d1.unwrap_or(f64::NAN), 0.0),
                (cr.d2.unwrap_or(f64::NAN), 0.0),
            ]));
        }
    }
    Ok(Check {
        name: "cr-reduction",
        cases: o.trials,
        err,
        tol: o.tolerance,
    })
}

fn closed_form_check(o: &OracleCheckOptions) -> Result<Check> {
    let mut err: f64 = 0.0;
    let mut cases = 0;
    for i in 0..=20 {
        for j in 0..=20 {
            let (q, delta) = (i as f64 / 20.0, j as f64 / 20.0);
            let a = eval_bsc_closed_form(q, delta)?;
            let b = eval_switching(&SwitchingModel::bsc(delta)?, &two_action_channel(q, q)?)?;
            err = err.max(worst(&[
                (a.rb_min, b.rb_min),
                (a.r1_plus_rb_min, b.r1_plus_rb_min),
                (a.r2_plus_rb_min, b.r2_plus_rb_min),
            ]));
            cases += 1;
        }
    }
    for delta in [0.2, 0.6, 0.9] {
        let m = SwitchingModel::s_channel(delta)?;
        for i in 0..=20 {
            for j in 0..=20 {
                let (alpha, beta) = (i as f64 / 20.0, j as f64 / 20.0);
                let a = eval_schannel_closed_form(alpha, beta, delta)?;
                let b = eval_switching(&m, &two_action_channel(alpha, beta)?)?;
                err = err.max(worst(&[
                    (a.rb_min, b.rb_min),
                    (a.r1_plus_rb_min, b.r1_plus_rb_min),
                    (a.r2_plus_rb_min, b.r2_plus_rb_min),
                    (a.cost, b.cost),
                ]));
                cases += 1;
            }
        }
    }
    Ok(Check {
        name: "closed-forms",
        cases,
        err,
        tol: o.tolerance,
    })
}

/// Half the distortion of the best constant guess.
fn distortion_budget(px: &[f64]) -> f64 {
    0.5 * (1.0 - px.iter().cloned().fold(0.0, f64::max))
}

fn quantized_search(seed: u64, aux: usize) -> SearchConfig {
    SearchConfig {
        aux_size: Some(aux),
        quantization: Some(0.5),
        ..SearchConfig::default()
    }
    .with_seed(seed)
}

/// Compares objectives; matching `Infeasible` errors count as agreement.
fn agreement<T, U>(a: vmcascade_core::Result<T>, b: vmcascade_core::Result<U>, fa: impl Fn(&T) -> f64, fb: impl Fn(&U) -> f64) -> Result<f64> {
    Ok(match (a, b) {
        (Ok(a), Ok(b)) => worst(&[(fa(&a), fb(&b))]),
        (Err(Error::Infeasible(_)), Err(Error::Infeasible(_))) => 0.0,
        (Err(Error::Infeasible(_)), Ok(_)) | (Ok(_), Err(Error::Infeasible(_))) => f64::INFINITY,
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    })
}

fn cascade_oracle_check(rng: &mut ChaCha8Rng, o: &OracleCheckOptions) -> Result<Check> {
    let n = (o.trials / 20).max(1);
    // |U| = |X| keeps the lossless anchor channel inside the search space
    let grid = GridSpec::new(0.5, 2)?;
    let mut err: f64 = 0.0;
    for k in 0..n {
        let m = cascade(rng, 2, 2, 2, 2)?;
        let px = m.source().marginalize(&[var::X])?;
        let d = distortion_budget(px.mass());
        let budget = Budget::new(0.3, d, d)?;
        let oracle = brute_force_cascade(&m, &budget, 0.7, &grid);
        let opt = optimize_cascade(&m, &budget, 0.7, &quantized_search(o.seed ^ k as u64, 2));
        err = err.max(agreement(oracle, opt, |r| r.objective, |r| r.objective)?);
    }
    Ok(Check {
        name: "cascade-oracle",
        cases: n,
        err,
        tol: 1000.0 * o.tolerance,
    })
}

fn cr_oracle_check(rng: &mut ChaCha8Rng, o: &OracleCheckOptions) -> Result<Check> {
    let n = (o.trials / 20).max(1);
    let grid = GridSpec::new(0.5, 1)?;
    let w = RateWeights::new(1.0, 0.7, 0.5)?;
    let mut err: f64 = 0.0;
    for k in 0..n {
        let m = degraded(rng, 2, 2, 2, 2)?;
        let d = distortion_budget(m.source().mass());
        let budget = Budget::new(0.3, d, d)?;
        let oracle = brute_force_cr(&m, &budget, &w, &grid);
        let opt = optimize_cr(&m, &budget, &w, &quantized_search(o.seed ^ k as u64, 1));
        err = err.max(agreement(oracle, opt, |r| r.objective, |r| r.objective)?);
    }
    Ok(Check {
        name: "cr-oracle",
        cases: n,
        err,
        tol: 1000.0 * o.tolerance,
    })
}

/// Runs every check; passes iff each discrepancy is within its tolerance.
pub fn cmd_oracle_check(o: &OracleCheckOptions) -> Result<Report> {
    if !(o.tolerance >= 0.0) {
        return Err(Invalid(format!("tolerance {} must be nonnegative", o.tolerance)).into());
    }
    if !(2..=4).contains(&o.max_size) {
        return Err(Invalid(format!("max size {} must lie in 2..=4", o.max_size)).into());
    }
    if o.trials == 0 {
        return Err(Invalid("trials must be positive".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let checks = [
        mi_check(&mut rng, o)?,
        substitution_check(&mut rng, o)?,
        switch_check(&mut rng, o)?,
        cr_reduction_check(&mut rng, o)?,
        closed_form_check(o)?,
        cascade_oracle_check(&mut rng, o)?,
        cr_oracle_check(&mut rng, o)?,
    ];
    let mut text = String::new();
    let mut passed = true;
    for c in &checks {
        let ok = c.err <= c.tol;
        passed &= ok;
        let _ = writeln!(
            text,
            "{}: {} max_err={:e} tol={:e} cases={}",
            c.name,
            if ok { "PASS" } else { "FAIL" },
            c.err,
            c.tol,
            c.cases
        );
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Ok(Report { text, passed })
}
