//! The subcommands. Each returns its complete output so the caller can write
//! it in one piece.

use anyhow::Result;
use rayon::prelude::*;
use vmcascade_core::broadcast::{
    eval_broadcast_lossless, eval_bsc_closed_form, eval_cr_point, eval_schannel_closed_form, eval_switching,
    optimize_broadcast_lossless, optimize_cr, two_action_channel, BroadcastRegionPoint, CRTestChannel,
    RateWeights, SweepGrid, SwitchingSweep,
};
use vmcascade_core::cascade::{
    eval_cascade_lossless, eval_cascade_point, lower_convex_envelope, optimize_cascade, optimize_cascade_lossless,
    CascadeTestChannel, RegionPoint,
};
use vmcascade_core::fme::{check_problem, RandomRationalSampler};
use vmcascade_core::model::{var, BroadcastModel, CascadeModel, SwitchingModel};
use vmcascade_core::prob::{Alphabet, ConditionalChannel};

use crate::config::{Builtin, Invalid, Model, RunConfig, Topology};
use crate::csv::{num, opt, Table};
use crate::fme_text;

pub use crate::oracle_check::{cmd_oracle_check, OracleCheckOptions};

/// Text output of a check and whether it passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub passed: bool,
}

/// A check that ran to completion and failed; exit status 4.
#[derive(Debug)]
pub struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for CheckFailed {}

pub const EVAL_HEADER: &[&str] = &[
    "config_hash",
    "topology",
    "kind",
    "index",
    "q",
    "alpha",
    "beta",
    "delta",
    "rb_min",
    "r1_plus_rb_min",
    "r2_plus_rb_min",
    "r_sum_min",
    "r1_min",
    "r2_min",
    "d1",
    "d2",
    "cost",
];

pub const OPTIMIZE_HEADER: &[&str] = &[
    "config_hash",
    "topology",
    "kind",
    "eta",
    "w1",
    "w2",
    "wb",
    "delta",
    "gamma",
    "objective",
    "r1",
    "r2",
    "rb",
    "alpha",
    "beta",
    "d1",
    "d2",
    "cost",
];

fn topology_name(t: Topology) -> &'static str {
    match t {
        Topology::Cascade => "cascade",
        Topology::BroadcastLossless => "broadcast-lossless",
        Topology::Switching => "switching",
        Topology::Cr => "cr",
    }
}

fn bad(what: &str, e: vmcascade_core::Error) -> anyhow::Error {
    Invalid(format!("{what}: {e}")).into()
}

fn alphabets(spec: &[(&str, usize)]) -> Result<Vec<Alphabet>> {
    spec.iter()
        .map(|&(n, s)| Alphabet::new(n, s).map_err(|e| bad("alphabet", e)))
        .collect()
}

fn channel(what: &str, from: &[(&str, usize)], to: &[(&str, usize)], mass: &[f64]) -> Result<ConditionalChannel> {
    ConditionalChannel::new(alphabets(from)?, alphabets(to)?, mass.to_vec()).map_err(|e| bad(what, e))
}

/// Blank-padded eval row.
struct EvalRow {
    kind: &'static str,
    index: usize,
    q: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    delta: Option<f64>,
}

impl EvalRow {
    fn new(kind: &'static str, index: usize) -> Self {
        EvalRow {
            kind,
            index,
            q: None,
            alpha: None,
            beta: None,
            delta: None,
        }
    }

    fn head(&self, hash: &str, topo: Topology) -> Vec<String> {
        vec![
            hash.to_string(),
            topology_name(topo).to_string(),
            self.kind.to_string(),
            self.index.to_string(),
            opt(self.q),
            opt(self.alpha),
            opt(self.beta),
            opt(self.delta),
        ]
    }

    fn broadcast(&self, hash: &str, topo: Topology, p: &BroadcastRegionPoint) -> Vec<String> {
        let mut r = self.head(hash, topo);
        r.extend([
            num(p.rb_min),
            num(p.r1_plus_rb_min),
            num(p.r2_plus_rb_min),
            opt(p.r_sum_min),
            String::new(),
            String::new(),
            opt(p.d1),
            opt(p.d2),
            num(p.cost),
        ]);
        r
    }

    fn cascade(&self, hash: &str, p: &RegionPoint) -> Vec<String> {
        let mut r = self.head(hash, Topology::Cascade);
        r.extend([
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            num(p.r1_min),
            num(p.r2_min),
            num(p.d1),
            num(p.d2),
            num(p.cost),
        ]);
        r
    }
}

fn nothing_to_do() -> anyhow::Error {
    Invalid("[eval] lists nothing to evaluate".into()).into()
}

/// Evaluates every channel or grid point listed in the config.
pub fn cmd_eval(cfg: &RunConfig) -> Result<String> {
    let hash = cfg.hash();
    let topo = cfg.topology();
    let mut table = Table::new(EVAL_HEADER);
    match topo {
        Topology::Cascade => {
            let Model::Cascade(m) = cfg.model(0.0)? else { unreachable!() };
            eval_cascade(cfg, &m, &hash, &mut table)?;
        }
        Topology::BroadcastLossless | Topology::Cr => {
            let Model::Broadcast(m) = cfg.model(0.0)? else { unreachable!() };
            eval_broadcast(cfg, &m, topo, &hash, &mut table)?;
        }
        Topology::Switching => {
            for delta in cfg.deltas() {
                let Model::Switching(m) = cfg.model(delta)? else { unreachable!() };
                let delta = cfg.builtin.map(|_| delta);
                eval_switching_grid(cfg, &m, delta, &hash, &mut table)?;
            }
        }
    }
    if table.is_empty() {
        return Err(nothing_to_do());
    }
    Ok(table.render())
}

fn eval_cascade(cfg: &RunConfig, m: &CascadeModel, hash: &str, table: &mut Table) -> Result<()> {
    let (nx, ny, na, nh) = (m.nx(), m.ny(), m.na(), m.nxhat1());
    let source = [(var::X, nx), (var::Y, ny)];
    for (i, mass) in cfg.eval.channels.iter().enumerate() {
        let per = nx * ny * nh * na;
        let nu = match cfg.eval.aux {
            Some(nu) => nu,
            None if mass.len() % per == 0 && !mass.is_empty() => mass.len() / per,
            None => return Err(Invalid(format!("channel {i}: length {} is not a multiple of {per}", mass.len())).into()),
        };
        let ch = channel(
            &format!("channel {i}"),
            &source,
            &[(var::XHAT1, nh), (var::A, na), (var::U, nu)],
            mass,
        )?;
        let t = CascadeTestChannel::with_optimal_decode(m, ch).map_err(|e| bad(&format!("channel {i}"), e))?;
        let p = eval_cascade_point(m, &t)?;
        table.push(EvalRow::new("channel", i).cascade(hash, &p));
    }
    for (i, mass) in cfg.eval.actions.iter().enumerate() {
        let act = channel(&format!("action {i}"), &source, &[(var::A, na)], mass)?;
        let p = eval_cascade_lossless(m, &act)?;
        table.push(EvalRow::new("lossless", i).cascade(hash, &p));
    }
    Ok(())
}

fn eval_broadcast(cfg: &RunConfig, m: &BroadcastModel, topo: Topology, hash: &str, table: &mut Table) -> Result<()> {
    let (nx, na) = (m.nx(), m.na());
    let recons = &cfg.eval.recons;
    if topo == Topology::Cr && !recons.is_empty() && recons.len() != cfg.eval.actions.len() {
        return Err(Invalid("[eval] needs one reconstruction per action".into()).into());
    }
    for (i, mass) in cfg.eval.actions.iter().enumerate() {
        let act = channel(&format!("action {i}"), &[(var::X, nx)], &[(var::A, na)], mass)?;
        let p = if topo == Topology::Cr {
            let t = match recons.get(i) {
                Some(r) => {
                    let recon = channel(
                        &format!("reconstruction {i}"),
                        &[(var::X, nx), (var::A, na)],
                        &[(var::XHAT1, m.nxhat1()), (var::XHAT2, m.nxhat2())],
                        r,
                    )?;
                    CRTestChannel::new(m, act, recon)
                }
                None => CRTestChannel::lossless(m, act),
            }
            .map_err(|e| bad(&format!("test channel {i}"), e))?;
            eval_cr_point(m, &t)?
        } else {
            eval_broadcast_lossless(m, &act)?
        };
        let kind = if topo == Topology::Cr { "cr" } else { "lossless" };
        table.push(EvalRow::new(kind, i).broadcast(hash, topo, &p));
    }
    Ok(())
}

fn eval_switching_grid(
    cfg: &RunConfig,
    m: &SwitchingModel,
    delta: Option<f64>,
    hash: &str,
    table: &mut Table,
) -> Result<()> {
    let topo = Topology::Switching;
    let sweep = &cfg.sweep;
    if let Some(qs) = &sweep.q {
        if m.nx() != 2 {
            return Err(Invalid("`q` sweeps need binary X".into()).into());
        }
        for (i, &q) in qs.iter().enumerate() {
            let act = two_action_channel(q, q).map_err(|e| bad("q", e))?;
            let row = EvalRow {
                q: Some(q),
                delta,
                ..EvalRow::new("switching", i)
            };
            if let (Some(Builtin::BscExample), Some(d)) = (cfg.builtin, delta) {
                let p = eval_bsc_closed_form(q, d)?;
                table.push(EvalRow { kind: "closed-form", ..row }.broadcast(hash, topo, &p));
                let row = EvalRow {
                    q: Some(q),
                    delta,
                    ..EvalRow::new("switching", i)
                };
                table.push(row.broadcast(hash, topo, &eval_switching(m, &act)?));
            } else {
                table.push(row.broadcast(hash, topo, &eval_switching(m, &act)?));
            }
        }
    }
    if let (Some(alphas), Some(betas)) = (&sweep.alpha, &sweep.beta) {
        if m.nx() != 2 {
            return Err(Invalid("`alpha`/`beta` sweeps need binary X".into()).into());
        }
        let mut i = 0;
        for &a in alphas {
            for &b in betas {
                let act = two_action_channel(a, b).map_err(|e| bad("alpha/beta", e))?;
                let row = |kind| EvalRow {
                    alpha: Some(a),
                    beta: Some(b),
                    delta,
                    ..EvalRow::new(kind, i)
                };
                if let (Some(Builtin::SChannelExample), Some(d)) = (cfg.builtin, delta) {
                    let p = eval_schannel_closed_form(a, b, d)?;
                    table.push(row("closed-form").broadcast(hash, topo, &p));
                }
                table.push(row("switching").broadcast(hash, topo, &eval_switching(m, &act)?));
                i += 1;
            }
        }
    } else if sweep.alpha.is_some() || sweep.beta.is_some() {
        return Err(Invalid("`alpha` and `beta` go together".into()).into());
    }
    for (i, mass) in cfg.eval.actions.iter().enumerate() {
        let act = channel(
            &format!("action {i}"),
            &[(var::X, m.nx())],
            &[(var::A, SwitchingModel::ACTIONS)],
            mass,
        )?;
        let row = EvalRow {
            delta,
            ..EvalRow::new("action", i)
        };
        table.push(row.broadcast(hash, topo, &eval_switching(m, &act)?));
    }
    Ok(())
}

fn opt_row(hash: &str, topo: Topology, kind: &str) -> Vec<String> {
    let mut r = vec![String::new(); OPTIMIZE_HEADER.len()];
    r[0] = hash.to_string();
    r[1] = topology_name(topo).to_string();
    r[2] = kind.to_string();
    r
}

const COL_ETA: usize = 3;
const COL_W: usize = 4;
const COL_DELTA: usize = 7;
const COL_GAMMA: usize = 8;
const COL_OBJ: usize = 9;
const COL_R: usize = 10;
const COL_ALPHA: usize = 13;
const COL_D: usize = 15;
const COL_COST: usize = 17;

fn set_weights(r: &mut [String], w: &RateWeights) {
    r[COL_W] = num(w.r1);
    r[COL_W + 1] = num(w.r2);
    r[COL_W + 2] = num(w.rb);
}

fn set_rates(r: &mut [String], r1: f64, r2: f64, rb: Option<f64>) {
    r[COL_R] = num(r1);
    r[COL_R + 1] = num(r2);
    r[COL_R + 2] = opt(rb);
}

/// Minimizes the weighted rate objective for the configured topology.
pub fn cmd_optimize(cfg: &RunConfig) -> Result<String> {
    let hash = cfg.hash();
    let topo = cfg.topology();
    let budget = cfg.budget()?;
    let search = cfg.search();
    let mut table = Table::new(OPTIMIZE_HEADER);
    match topo {
        Topology::Cascade => {
            let Model::Cascade(m) = cfg.model(0.0)? else { unreachable!() };
            let lossless = budget.d1 == 0.0 && budget.d2 == 0.0;
            let etas = cfg.etas();
            let results: Vec<Result<(f64, RegionPoint)>> = etas
                .par_iter()
                .map(|&eta| {
                    Ok(if lossless {
                        let o = optimize_cascade_lossless(&m, budget.gamma, eta, &search)?;
                        (o.objective, o.point)
                    } else {
                        let o = optimize_cascade(&m, &budget, eta, &search)?;
                        (o.objective, o.point)
                    })
                })
                .collect();
            let mut corners = Vec::new();
            for (eta, res) in etas.iter().zip(results) {
                let (objective, p) = res?;
                let mut r = opt_row(&hash, topo, if lossless { "lossless" } else { "optimum" });
                r[COL_ETA] = num(*eta);
                r[COL_GAMMA] = num(budget.gamma);
                r[COL_OBJ] = num(objective);
                set_rates(&mut r, p.r1_min, p.r2_min, None);
                r[COL_D] = num(p.d1);
                r[COL_D + 1] = num(p.d2);
                r[COL_COST] = num(p.cost);
                table.push(r);
                corners.push((p.r1_min, p.r2_min));
            }
            for (r1, r2) in lower_convex_envelope(&corners) {
                let mut r = opt_row(&hash, topo, "envelope");
                r[COL_GAMMA] = num(budget.gamma);
                set_rates(&mut r, r1, r2, None);
                table.push(r);
            }
        }
        Topology::BroadcastLossless | Topology::Cr => {
            let Model::Broadcast(m) = cfg.model(0.0)? else { unreachable!() };
            for w in cfg.weights()? {
                let (objective, rates, p) = if topo == Topology::Cr {
                    let o = optimize_cr(&m, &budget, &w, &search)?;
                    (o.objective, o.rates, o.point)
                } else {
                    let o = optimize_broadcast_lossless(&m, budget.gamma, &w, &search)?;
                    (o.objective, o.rates, o.point)
                };
                let mut r = opt_row(&hash, topo, "optimum");
                set_weights(&mut r, &w);
                r[COL_GAMMA] = num(budget.gamma);
                r[COL_OBJ] = num(objective);
                set_rates(&mut r, rates.r1, rates.r2, Some(rates.rb));
                r[COL_D] = opt(p.d1);
                r[COL_D + 1] = opt(p.d2);
                r[COL_COST] = num(p.cost);
                table.push(r);
            }
        }
        Topology::Switching => {
            let gammas = cfg.sweep.gamma.clone().unwrap_or_else(|| vec![budget.gamma]);
            let rb = cfg.sweep.rb.unwrap_or(0.4);
            let grid = sweep_grid(cfg);
            for delta in cfg.deltas() {
                let Model::Switching(m) = cfg.model(delta)? else { unreachable!() };
                let sweep = SwitchingSweep::new(&m, grid).map_err(|e| bad("switching sweep", e))?;
                let jobs: Vec<(f64, f64)> = gammas
                    .iter()
                    .flat_map(|&g| cfg.etas().into_iter().map(move |e| (g, e)))
                    .collect();
                let gains: Vec<_> = jobs
                    .par_iter()
                    .map(|&(g, eta)| sweep.greedy_gain(eta, rb, g))
                    .collect();
                for (&(g, eta), res) in jobs.iter().zip(gains) {
                    let res = res?;
                    for (kind, s) in [("optimal", res.optimal), ("greedy", res.greedy)] {
                        let mut r = opt_row(&hash, topo, kind);
                        r[COL_ETA] = num(eta);
                        r[COL_DELTA] = cfg.builtin.map(|_| num(delta)).unwrap_or_default();
                        r[COL_GAMMA] = num(g);
                        r[COL_OBJ] = num(s.value);
                        set_rates(&mut r, s.r1, s.r2, Some(rb));
                        r[COL_ALPHA] = num(s.alpha);
                        r[COL_ALPHA + 1] = num(s.beta);
                        r[COL_COST] = num(s.cost);
                        table.push(r);
                    }
                }
            }
        }
    }
    Ok(table.render())
}

fn sweep_grid(cfg: &RunConfig) -> SweepGrid {
    let d = SweepGrid::default();
    SweepGrid {
        steps: cfg.sweep.steps.unwrap_or(d.steps),
        refine_steps: match cfg.sweep.refine_steps {
            Some(0) => None,
            Some(n) => Some(n),
            None => d.refine_steps,
        },
    }
}

/// Default `eta` axis for the greedy-gain sweep: `k / 50` plus `0.05`.
pub fn fig6_etas() -> Vec<f64> {
    let mut etas: Vec<f64> = (0..=50).map(|k| k as f64 / 50.0).collect();
    etas.push(0.05);
    etas.sort_by(f64::total_cmp);
    etas
}

/// The config `fig6` uses when none is given.
pub fn fig6_default_config() -> RunConfig {
    RunConfig::parse("builtin = \"s-channel-example\"\n").expect("built-in config parses")
}

/// Greedy-minus-optimal weighted sum rate on the S-channel example, one row
/// per `eta` and a column group per budget.
pub fn cmd_fig6(cfg: &RunConfig) -> Result<String> {
    if cfg.topology() != Topology::Switching {
        return Err(Invalid("fig6 needs a switching model".into()).into());
    }
    let hash = cfg.hash();
    let rb = cfg.sweep.rb.unwrap_or(0.4);
    let delta = cfg.deltas()[0];
    let gammas = cfg.sweep.gamma.clone().unwrap_or_else(|| vec![0.1, 0.9]);
    let etas = cfg.sweep.eta.clone().unwrap_or_else(fig6_etas);
    let Model::Switching(m) = cfg.model(delta)? else { unreachable!() };
    let sweep = SwitchingSweep::new(&m, sweep_grid(cfg)).map_err(|e| bad("switching sweep", e))?;

    let mut header = vec!["config_hash".to_string(), "eta".to_string()];
    for i in 1..=gammas.len() {
        for c in ["gamma", "gain", "opt_alpha", "opt_beta", "greedy_alpha"] {
            header.push(format!("{c}{i}"));
        }
    }
    let rows: Vec<Result<Vec<String>>> = etas
        .par_iter()
        .map(|&eta| {
            let mut r = vec![hash.clone(), num(eta)];
            for &g in &gammas {
                let res = sweep.greedy_gain(eta, rb, g)?;
                r.extend([
                    num(g),
                    num(res.gain),
                    num(res.optimal.alpha),
                    num(res.optimal.beta),
                    num(res.greedy.alpha),
                ]);
            }
            Ok(r)
        })
        .collect();
    let mut table = Table::new(&header);
    for r in rows {
        table.push(r?);
    }
    Ok(table.render())
}

/// Eliminates, prunes and compares a problem against its stated projection.
/// `target` is `prop2`, `prop3`, `prop2-mutated` or a path to a problem file.
pub fn cmd_fme_check(target: &str, trials: usize, seed: u64) -> Result<Report> {
    let problem = match fme_text::builtin(target) {
        Some(p) => p,
        None => {
            let text = std::fs::read_to_string(target)
                .map_err(|e| Invalid(format!("`{target}` is neither a built-in problem nor a readable file: {e}")))?;
            fme_text::parse(&text)?
        }
    };
    let mut sampler = RandomRationalSampler::new(seed);
    let check = check_problem(&problem, &mut sampler, trials).map_err(|e| bad("fme", e))?;
    let mut text = format!(
        "problem: {target}\neliminated: {}\nprojected rows: {}\nreduced system:\n",
        problem.eliminate.join(" "),
        check.projected.rows().len()
    );
    for row in check.reduced.rows() {
        text.push_str("  ");
        text.push_str(&check.reduced.format_row(row));
        text.push('\n');
    }
    text.push_str("target system:\n");
    for row in problem.target.rows() {
        text.push_str("  ");
        text.push_str(&problem.target.format_row(row));
        text.push('\n');
    }
    let passed = check.report.equivalent();
    text.push_str(&format!("{}\n{}\n", check.report, if passed { "PASS" } else { "FAIL" }));
    Ok(Report { text, passed })
}
