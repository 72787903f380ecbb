//! The cascade-broadcast network, where a common link of rate `Rb` from
//! Node 1 reaches both Node 2 and Node 3 and selects the action.
//!
//! Three regions are covered:
//!
//! * lossless reconstruction at both nodes, over `p(a | x)`:
//!   `Rb >= I(X;A)`, `R1 + Rb >= I(X;A) + H(X|A,Y)`, `R2 + Rb >= I(X;A) + H(X|A,Z)`;
//! * its switching special case, where the action decides which node sees a
//!   side-information sequence `W` ([`eval_switching`] and the two closed
//!   forms);
//! * lossy reconstruction under a common-reconstruction constraint with
//!   degraded side information ([`eval_cr_point`]).
//!
//! Actions that adapt to past samples of `Y` do not enlarge the lossy region
//! once `Z` is removed, so [`eval_cr_point`] on [`BroadcastModel::without_z`]
//! covers that setting as well.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{check_unit, var, Budget, BroadcastModel, SwitchingModel};
use crate::prob::{binary_entropy, Alphabet, ConditionalChannel, JointDistribution};
use crate::search::{random_simplex, Block, Layout, Minimizer, Score};
use crate::{Error, Result, SearchConfig};

/// Lower bounds on `Rb`, `R1 + Rb`, `R2 + Rb` and, for the lossy region,
/// `R1 + R2 + Rb`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BroadcastRegionPoint {
    pub rb_min: f64,
    pub r1_plus_rb_min: f64,
    pub r2_plus_rb_min: f64,
    pub r_sum_min: Option<f64>,
    /// `+inf` when a forbidden action has positive probability.
    pub cost: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
}

fn action_vars(nx: usize, na: usize) -> Result<(Vec<Alphabet>, Vec<Alphabet>)> {
    Ok((
        vec![Alphabet::new(var::X, nx)?],
        vec![Alphabet::new(var::A, na)?],
    ))
}

fn check_action(action: &ConditionalChannel, nx: usize, na: usize) -> Result<()> {
    let from: Vec<(&str, usize)> = action.from_vars().iter().map(|a| (a.name(), a.size())).collect();
    let to: Vec<(&str, usize)> = action.to_vars().iter().map(|a| (a.name(), a.size())).collect();
    if from != [(var::X, nx)] || to != [(var::A, na)] {
        return Err(Error::Usage("action channel must be p(A | X) over the model alphabets".into()));
    }
    Ok(())
}

/// Lossless bounds for the action channel `p(a | x)`.
pub fn eval_broadcast_lossless(
    m: &BroadcastModel,
    action: &ConditionalChannel,
) -> Result<BroadcastRegionPoint> {
    check_action(action, m.nx(), m.na())?;
    let joint = m.source().compose(action)?.compose(m.side_info())?;
    let rb = joint.mutual_information(&[var::X], &[var::A])?;
    let hy = joint.conditional_entropy(&[var::X], &[var::A, var::Y])?;
    let hz = joint.conditional_entropy(&[var::X], &[var::A, var::Z])?;
    Ok(BroadcastRegionPoint {
        rb_min: rb,
        r1_plus_rb_min: rb + hy,
        r2_plus_rb_min: rb + hz,
        r_sum_min: None,
        cost: crate::model::expected_cost(&joint, var::A, m.cost())?,
        d1: None,
        d2: None,
    })
}

/// The action channel over `{0, 1, 2, 3}` for binary `X` that picks action 1
/// with probability `alpha` when `x = 0` and `beta` when `x = 1`, action 2
/// otherwise.
pub fn two_action_channel(alpha: f64, beta: f64) -> Result<ConditionalChannel> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    let (from, to) = action_vars(2, SwitchingModel::ACTIONS)?;
    ConditionalChannel::new(
        from,
        to,
        vec![0.0, alpha, 1.0 - alpha, 0.0, 0.0, beta, 1.0 - beta, 0.0],
    )
}

/// Switching side information: with `p_j = Pr[A = j]`,
/// `R1 + Rb >= H(X) - p1 I(X;W|A=1) - p3 I(X;W|A=3)` and symmetrically for
/// Node 3 with actions 2 and 3; `Rb >= I(X;A)`.
pub fn eval_switching(
    m: &SwitchingModel,
    action: &ConditionalChannel,
) -> Result<BroadcastRegionPoint> {
    let (nx, nw) = (m.nx(), m.nw());
    check_action(action, nx, SwitchingModel::ACTIONS)?;
    let pxw = m.source_pair().mass();
    let px = m.px();
    let hx = crate::prob::entropy_of(&px);
    let pair_vars = m.source_pair().variables().to_vec();

    let mut pa = [0.0; 4];
    let mut info_given = [0.0; 4];
    for a in 0..SwitchingModel::ACTIONS {
        let table: Vec<f64> = (0..nx * nw)
            .map(|i| pxw[i] * action.slice(i / nw)[a])
            .collect();
        pa[a] = table.iter().sum();
        if pa[a] > 0.0 {
            let cond: Vec<f64> = table.iter().map(|v| v / pa[a]).collect();
            let d = JointDistribution::new(pair_vars.clone(), cond)?;
            info_given[a] = d.mutual_information(&[var::X], &[var::W])?;
        }
    }
    let joint_xa = m
        .source_pair()
        .marginalize(&[var::X])?
        .compose(action)?;
    let rb = joint_xa.mutual_information(&[var::X], &[var::A])?;
    Ok(BroadcastRegionPoint {
        rb_min: rb,
        r1_plus_rb_min: hx - pa[1] * info_given[1] - pa[3] * info_given[3],
        r2_plus_rb_min: hx - pa[2] * info_given[2] - pa[3] * info_given[3],
        r_sum_min: None,
        cost: m.lambdas().expected(&pa),
        d1: None,
        d2: None,
    })
}

/// Closed form for the binary symmetric instance ([`SwitchingModel::bsc`])
/// when the action is drawn independently of `X` with `Pr[A = 1] = q` and
/// `Pr[A = 2] = 1 - q`:
///
/// ```text
/// Rb >= 0,  R1 + Rb >= 1 - q (1 - H(delta)),  R2 + Rb >= 1 - (1 - q)(1 - H(delta))
/// ```
///
/// where `1 - H(delta) = I(X; W)`. Both actions cost one.
pub fn eval_bsc_closed_form(q: f64, delta: f64) -> Result<BroadcastRegionPoint> {
    check_unit("q", q)?;
    check_unit("delta", delta)?;
    let info = 1.0 - binary_entropy(delta);
    Ok(BroadcastRegionPoint {
        rb_min: 0.0,
        r1_plus_rb_min: 1.0 - q * info,
        r2_plus_rb_min: 1.0 - (1.0 - q) * info,
        r_sum_min: None,
        cost: 1.0,
        d1: None,
        d2: None,
    })
}

/// Closed form for the S-channel instance ([`SwitchingModel::s_channel`])
/// with the action channel of [`two_action_channel`]`(alpha, beta)`.
/// At `alpha + beta` equal to 0 or 2 the affected bound takes its limit 1.
pub fn eval_schannel_closed_form(alpha: f64, beta: f64, delta: f64) -> Result<BroadcastRegionPoint> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    check_unit("delta", delta)?;
    let h_delta = binary_entropy(1.0 - delta);
    let bound = |share: f64, x0: f64| {
        // share = 2 Pr[A = j], x0 = Pr[X = 0, A = j] * 2
        if share <= 0.0 {
            return 1.0;
        }
        let frac = x0 / share;
        1.0 - (share / 2.0) * (binary_entropy((1.0 - delta) * frac) - h_delta * frac)
    };
    let p1 = (alpha + beta) / 2.0;
    Ok(BroadcastRegionPoint {
        rb_min: binary_entropy(p1) - 0.5 * (binary_entropy(alpha) + binary_entropy(beta)),
        r1_plus_rb_min: bound(alpha + beta, alpha),
        r2_plus_rb_min: bound(2.0 - alpha - beta, 1.0 - alpha),
        r_sum_min: None,
        cost: p1,
        d1: None,
        d2: None,
    })
}

/// Minimizes `Rb` alone (`R1 = R2 = 0`) for the binary symmetric instance
/// over `q in {0, 1/steps, ..., 1}`. Returns `(q, Rb)`.
pub fn bsc_min_common_rate(delta: f64, steps: usize) -> Result<(f64, f64)> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let m = SwitchingModel::bsc(delta)?;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..=steps {
        let q = k as f64 / steps as f64;
        let p = eval_switching(&m, &two_action_channel(q, q)?)?;
        let rate = p.rb_min.max(p.r1_plus_rb_min).max(p.r2_plus_rb_min);
        if rate < best.1 - 1e-15 {
            best = (q, rate);
        }
    }
    Ok(best)
}

/// Whether the action may depend on the source.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionMode {
    Optimal,
    /// Action independent of `X` (`alpha = beta`).
    Greedy,
}

/// Grid for the `(alpha, beta)` sweeps: a coarse pass, then an optional
/// finer pass in a one-cell window around the incumbent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepGrid {
    pub steps: usize,
    pub refine_steps: Option<usize>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            steps: 200,
            refine_steps: Some(2000),
        }
    }
}

/// Result of [`weighted_sumrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumRate {
    pub value: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `max(R1 + Rb bound - Rb, 0)` at the witness.
    pub r1: f64,
    pub r2: f64,
    pub cost: f64,
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    r1_plus_rb: f64,
    r2_plus_rb: f64,
    rb: f64,
    cost: f64,
}

/// Precomputed switching bounds on the coarse `(alpha, beta)` grid, reused
/// across weights and budgets.
#[derive(Clone, Debug)]
pub struct SwitchingSweep {
    model: SwitchingModel,
    grid: SweepGrid,
    cells: Vec<Cell>,
}

impl SwitchingSweep {
    /// Needs binary `X` with actions 1 and 2 permitted.
    pub fn new(model: &SwitchingModel, grid: SweepGrid) -> Result<Self> {
        if model.nx() != 2 {
            return Err(Error::Usage("the (alpha, beta) sweep needs a binary source".into()));
        }
        if model.lambdas().is_forbidden(1) || model.lambdas().is_forbidden(2) {
            return Err(Error::Usage("the (alpha, beta) sweep uses actions 1 and 2".into()));
        }
        if grid.steps == 0 || grid.refine_steps == Some(0) {
            return Err(Error::InvalidParameter("grid needs at least one step".into()));
        }
        let n = grid.steps;
        let mut cells = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                cells.push(Self::eval_cell(model, i as f64 / n as f64, j as f64 / n as f64)?);
            }
        }
        Ok(SwitchingSweep {
            model: model.clone(),
            grid,
            cells,
        })
    }

    fn eval_cell(model: &SwitchingModel, alpha: f64, beta: f64) -> Result<Cell> {
        let p = eval_switching(model, &two_action_channel(alpha, beta)?)?;
        Ok(Cell {
            r1_plus_rb: p.r1_plus_rb_min,
            r2_plus_rb: p.r2_plus_rb_min,
            rb: p.rb_min,
            cost: p.cost,
        })
    }

    fn score(cell: &Cell, eta: f64, rb: f64, gamma: f64, alpha: f64, beta: f64) -> Option<SumRate> {
        if cell.cost > gamma + 1e-12 || cell.rb > rb + 1e-12 {
            return None;
        }
        let r1 = (cell.r1_plus_rb - rb).max(0.0);
        let r2 = (cell.r2_plus_rb - rb).max(0.0);
        Some(SumRate {
            value: r1 + eta * r2,
            alpha,
            beta,
            r1,
            r2,
            cost: cell.cost,
        })
    }

    fn better(a: &SumRate, b: &Option<SumRate>) -> bool {
        match b {
            None => true,
            Some(b) => {
                if (a.value - b.value).abs() > 1e-15 {
                    return a.value < b.value;
                }
                if (a.cost - b.cost).abs() > 1e-15 {
                    return a.cost < b.cost;
                }
                (a.alpha, a.beta) < (b.alpha, b.beta)
            }
        }
    }

    /// Minimum of `max(R1 + Rb bound - Rb, 0) + eta max(R2 + Rb bound - Rb, 0)`
    /// subject to `E[cost] <= gamma` and `I(X; A) <= Rb`.
    pub fn weighted_sumrate(&self, eta: f64, rb: f64, gamma: f64, mode: ActionMode) -> Result<SumRate> {
        if !(eta >= 0.0) || !(rb >= 0.0) || !(gamma >= 0.0) {
            return Err(Error::InvalidParameter("eta, Rb and gamma must be nonnegative".into()));
        }
        let greedy = self.search(eta, rb, gamma, ActionMode::Greedy)?;
        match mode {
            ActionMode::Greedy => greedy.ok_or_else(|| Error::Infeasible("empty feasible grid".into())),
            ActionMode::Optimal => {
                // The greedy set is contained in the optimal one.
                let mut best = self.search(eta, rb, gamma, ActionMode::Optimal)?;
                if let Some(g) = greedy {
                    if Self::better(&g, &best) {
                        best = Some(g);
                    }
                }
                best.ok_or_else(|| Error::Infeasible("empty feasible grid".into()))
            }
        }
    }

    fn search(&self, eta: f64, rb: f64, gamma: f64, mode: ActionMode) -> Result<Option<SumRate>> {
        let n = self.grid.steps;
        let mut best: Option<SumRate> = None;
        for i in 0..=n {
            let js: Vec<usize> = match mode {
                ActionMode::Greedy => vec![i],
                ActionMode::Optimal => (0..=n).collect(),
            };
            for j in js {
                let (alpha, beta) = (i as f64 / n as f64, j as f64 / n as f64);
                if let Some(s) = Self::score(&self.cells[i * (n + 1) + j], eta, rb, gamma, alpha, beta) {
                    if Self::better(&s, &best) {
                        best = Some(s);
                    }
                }
            }
        }
        let (Some(incumbent), Some(fine)) = (best, self.grid.refine_steps) else {
            return Ok(best);
        };
        let coarse = 1.0 / n as f64;
        let h = 1.0 / fine as f64;
        let span = libm::ceil(coarse / h) as i64;
        let snap = |center: f64, k: i64| -> Option<f64> {
            let v = libm::round(center / h) as i64 + k;
            let v = v as f64 * h;
            (-1e-12..=1.0 + 1e-12).contains(&v).then(|| v.clamp(0.0, 1.0))
        };
        for di in -span..=span {
            let Some(alpha) = snap(incumbent.alpha, di) else { continue };
            let djs: Vec<i64> = match mode {
                ActionMode::Greedy => vec![di],
                ActionMode::Optimal => (-span..=span).collect(),
            };
            for dj in djs {
                let beta = match mode {
                    ActionMode::Greedy => alpha,
                    ActionMode::Optimal => match snap(incumbent.beta, dj) {
                        Some(b) => b,
                        None => continue,
                    },
                };
                let cell = Self::eval_cell(&self.model, alpha, beta)?;
                if let Some(s) = Self::score(&cell, eta, rb, gamma, alpha, beta) {
                    if Self::better(&s, &best) {
                        best = Some(s);
                    }
                }
            }
        }
        Ok(best)
    }
}

/// One-shot [`SwitchingSweep::weighted_sumrate`].
pub fn weighted_sumrate(
    m: &SwitchingModel,
    eta: f64,
    rb: f64,
    gamma: f64,
    mode: ActionMode,
    grid: SweepGrid,
) -> Result<SumRate> {
    SwitchingSweep::new(m, grid)?.weighted_sumrate(eta, rb, gamma, mode)
}

/// Greedy minus optimal weighted sum-rate at one weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreedyGain {
    pub eta: f64,
    pub gain: f64,
    pub optimal: SumRate,
    pub greedy: SumRate,
}

impl SwitchingSweep {
    pub fn greedy_gain(&self, eta: f64, rb: f64, gamma: f64) -> Result<GreedyGain> {
        let optimal = self.weighted_sumrate(eta, rb, gamma, ActionMode::Optimal)?;
        let greedy = self.weighted_sumrate(eta, rb, gamma, ActionMode::Greedy)?;
        Ok(GreedyGain {
            eta,
            gain: greedy.value - optimal.value,
            optimal,
            greedy,
        })
    }
}

/// Nonnegative weights on `(R1, R2, Rb)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateWeights {
    pub r1: f64,
    pub r2: f64,
    pub rb: f64,
}

impl RateWeights {
    pub fn new(r1: f64, r2: f64, rb: f64) -> Result<Self> {
        for w in [r1, r2, rb] {
            if !(w >= 0.0) || w.is_infinite() {
                return Err(Error::InvalidParameter(alloc::format!("weight {w}")));
            }
        }
        Ok(RateWeights { r1, r2, rb })
    }
}

/// A rate triple attaining the minimum weighted sum over a region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateTriple {
    pub r1: f64,
    pub r2: f64,
    pub rb: f64,
    pub value: f64,
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        *o = det(m) / d;
    }
    Some(out)
}

/// Minimizes `w . (R1, R2, Rb)` over the rate region of `p`, including
/// `R1, R2, Rb >= 0`, by enumerating the vertices of the polyhedron.
pub fn min_weighted_rates(p: &BroadcastRegionPoint, w: &RateWeights) -> RateTriple {
    // rows over (R1, R2, Rb)
    let mut rows: Vec<([f64; 3], f64)> = vec![
        ([0.0, 0.0, 1.0], p.rb_min),
        ([1.0, 0.0, 1.0], p.r1_plus_rb_min),
        ([0.0, 1.0, 1.0], p.r2_plus_rb_min),
        ([1.0, 0.0, 0.0], 0.0),
        ([0.0, 1.0, 0.0], 0.0),
        ([0.0, 0.0, 1.0], 0.0),
    ];
    if let Some(s) = p.r_sum_min {
        rows.push(([1.0, 1.0, 1.0], s));
    }
    let mut best: Option<RateTriple> = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                let Some(x) = solve3(
                    [rows[i].0, rows[j].0, rows[k].0],
                    [rows[i].1, rows[j].1, rows[k].1],
                ) else {
                    continue;
                };
                let feasible = rows
                    .iter()
                    .all(|(a, b)| a[0] * x[0] + a[1] * x[1] + a[2] * x[2] >= b - 1e-12);
                if !feasible {
                    continue;
                }
                let cand = RateTriple {
                    r1: x[0],
                    r2: x[1],
                    rb: x[2],
                    value: w.r1 * x[0] + w.r2 * x[1] + w.rb * x[2],
                };
                let replace = match &best {
                    None => true,
                    Some(b) => {
                        if (cand.value - b.value).abs() > 1e-15 {
                            cand.value < b.value
                        } else {
                            (cand.rb, cand.r1, cand.r2) < (b.rb, b.r1, b.r2)
                        }
                    }
                };
                if replace {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("the region always has a vertex")
}

/// `p(a | x)` and `p(xhat1, xhat2 | x, a)` for the lossy region.
#[derive(Clone, Debug, PartialEq)]
pub struct CRTestChannel {
    action: ConditionalChannel,
    recon: ConditionalChannel,
}

impl CRTestChannel {
    pub fn new(m: &BroadcastModel, action: ConditionalChannel, recon: ConditionalChannel) -> Result<Self> {
        check_action(&action, m.nx(), m.na())?;
        let from: Vec<(&str, usize)> = recon.from_vars().iter().map(|a| (a.name(), a.size())).collect();
        let to: Vec<(&str, usize)> = recon.to_vars().iter().map(|a| (a.name(), a.size())).collect();
        if from != [(var::X, m.nx()), (var::A, m.na())]
            || to != [(var::XHAT1, m.nxhat1()), (var::XHAT2, m.nxhat2())]
        {
            return Err(Error::Usage(
                "reconstruction channel must be p(Xh1, Xh2 | X, A) over the model alphabets".into(),
            ));
        }
        Ok(CRTestChannel { action, recon })
    }

    /// Both reconstructions equal to `X` (needs Hamming-sized alphabets).
    pub fn lossless(m: &BroadcastModel, action: ConditionalChannel) -> Result<Self> {
        let recon = ConditionalChannel::deterministic(
            recon_inputs(m)?,
            recon_outputs(m)?,
            |xa| vec![xa[0], xa[0]],
        )?;
        Self::new(m, action, recon)
    }

    pub fn action(&self) -> &ConditionalChannel {
        &self.action
    }

    pub fn recon(&self) -> &ConditionalChannel {
        &self.recon
    }

    /// The joint pmf over `(X, A, Y, Z, Xh1, Xh2)`.
    pub fn joint(&self, m: &BroadcastModel) -> Result<JointDistribution> {
        m.source()
            .compose(&self.action)?
            .compose(m.side_info())?
            .compose(&self.recon)
    }
}

fn recon_inputs(m: &BroadcastModel) -> Result<Vec<Alphabet>> {
    Ok(vec![Alphabet::new(var::X, m.nx())?, Alphabet::new(var::A, m.na())?])
}

fn recon_outputs(m: &BroadcastModel) -> Result<Vec<Alphabet>> {
    Ok(vec![
        Alphabet::new(var::XHAT1, m.nxhat1())?,
        Alphabet::new(var::XHAT2, m.nxhat2())?,
    ])
}

/// The four bounds of the lossy region under common reconstruction:
///
/// ```text
/// Rb           >= I(X;A)
/// R1 + Rb      >= I(X;A) + I(X; Xh1, Xh2 | A, Y)
/// R2 + Rb      >= I(X;A) + I(X; Xh2 | A, Z)
/// R1 + R2 + Rb >= I(X;A) + I(X; Xh2 | A, Z) + I(X; Xh1 | A, Y, Xh2)
/// ```
///
/// The characterization holds only for degraded side information, so other
/// models are rejected.
pub fn eval_cr_point(m: &BroadcastModel, t: &CRTestChannel) -> Result<BroadcastRegionPoint> {
    if !m.is_degraded() {
        return Err(Error::NotDegraded {
            residual: m.degradedness_residual(),
        });
    }
    let joint = t.joint(m)?;
    let ia = joint.mutual_information(&[var::X], &[var::A])?;
    let to_node2 =
        joint.conditional_mutual_information(&[var::X], &[var::XHAT1, var::XHAT2], &[var::A, var::Y])?;
    let to_node3 = joint.conditional_mutual_information(&[var::X], &[var::XHAT2], &[var::A, var::Z])?;
    let refine = joint.conditional_mutual_information(
        &[var::X],
        &[var::XHAT1],
        &[var::A, var::Y, var::XHAT2],
    )?;
    Ok(BroadcastRegionPoint {
        rb_min: ia,
        r1_plus_rb_min: ia + to_node2,
        r2_plus_rb_min: ia + to_node3,
        r_sum_min: Some(ia + to_node3 + refine),
        cost: crate::model::expected_cost(&joint, var::A, m.cost())?,
        d1: Some(crate::model::expected_distortion(&joint, m.d1(), var::X, var::XHAT1)?),
        d2: Some(crate::model::expected_distortion(&joint, m.d2(), var::X, var::XHAT2)?),
    })
}

fn violation(p: &BroadcastRegionPoint, b: &Budget) -> f64 {
    if p.cost.is_infinite() {
        return f64::INFINITY;
    }
    (p.d1.unwrap_or(0.0) - b.d1).max(0.0)
        + (p.d2.unwrap_or(0.0) - b.d2).max(0.0)
        + (p.cost - b.gamma).max(0.0)
}

const INVALID: Score = Score {
    objective: f64::INFINITY,
    cost: f64::INFINITY,
    violation: f64::INFINITY,
};

/// Best point found by [`optimize_cr`].
#[derive(Clone, Debug, PartialEq)]
pub struct CrOptimum {
    pub objective: f64,
    pub rates: RateTriple,
    pub point: BroadcastRegionPoint,
    pub channel: CRTestChannel,
}

/// Approximately minimizes `w1 R1 + w2 R2 + wb Rb` over the lossy region
/// with common reconstruction, subject to `budget`.
pub fn optimize_cr(
    m: &BroadcastModel,
    budget: &Budget,
    weights: &RateWeights,
    search: &SearchConfig,
) -> Result<CrOptimum> {
    optimize_cr_seeded(m, budget, weights, search, &[])
}

/// [`optimize_cr`] with extra starting channels.
pub fn optimize_cr_seeded(
    m: &BroadcastModel,
    budget: &Budget,
    weights: &RateWeights,
    search: &SearchConfig,
    seeds: &[CRTestChannel],
) -> Result<CrOptimum> {
    if !m.is_degraded() {
        return Err(Error::NotDegraded {
            residual: m.degradedness_residual(),
        });
    }
    let (cheap, cheapest) = m.cost().cheapest().expect("validated model has a permitted action");
    if cheapest > budget.gamma {
        return Err(Error::Infeasible(alloc::format!(
            "cheapest action costs {cheapest}, budget is {}",
            budget.gamma
        )));
    }
    let px = m.source().mass();
    for (name, table, d) in [("D1", m.d1(), budget.d1), ("D2", m.d2(), budget.d2)] {
        let floor = table.min_expected(px);
        if floor > d + 1e-12 {
            return Err(Error::Infeasible(alloc::format!(
                "{name} = {d} is below the smallest achievable distortion {floor}"
            )));
        }
    }
    let (nx, na, n1, n2) = (m.nx(), m.na(), m.nxhat1(), m.nxhat2());
    let width = n1 * n2;
    let split = nx * na;
    let layout = Layout::new(vec![
        Block { slices: nx, width: na },
        Block { slices: nx * na, width },
    ]);
    let (afrom, ato) = action_vars(nx, na)?;
    let (rfrom, rto) = (recon_inputs(m)?, recon_outputs(m)?);
    let best_slot = |x: usize| m.d1().best_recon(x) * n2 + m.d2().best_recon(x);

    let mut anchor = vec![0.0; split + nx * na * width];
    for x in 0..nx {
        anchor[x * na + cheap] = 1.0;
        for a in 0..na {
            anchor[split + (x * na + a) * width + best_slot(x)] = 1.0;
        }
    }
    let build = |mass: &[f64]| CRTestChannel {
        action: ConditionalChannel::from_parts(afrom.clone(), ato.clone(), mass[..split].to_vec()),
        recon: ConditionalChannel::from_parts(rfrom.clone(), rto.clone(), mass[split..].to_vec()),
    };
    let eval = |mass: &[f64]| match eval_cr_point(m, &build(mass)) {
        Ok(p) => Score {
            objective: min_weighted_rates(&p, weights).value,
            cost: p.cost,
            violation: violation(&p, budget),
        },
        Err(_) => INVALID,
    };
    let mut starts = |rng: &mut rand_chacha::ChaCha8Rng, i: usize, units: Option<usize>| {
        let mut mass: Vec<f64> = (0..nx).flat_map(|_| random_simplex(rng, na, units)).collect();
        if i % 2 == 0 {
            let mut recon = vec![0.0; nx * na * width];
            for x in 0..nx {
                for a in 0..na {
                    recon[(x * na + a) * width + best_slot(x)] = 1.0;
                }
            }
            mass.extend(recon);
        } else {
            mass.extend((0..nx * na).flat_map(|_| random_simplex(rng, width, units)));
        }
        mass
    };
    let mut minimizer = Minimizer {
        layout: &layout,
        config: search,
        eval,
    };
    let seed_masses: Vec<Vec<f64>> = seeds
        .iter()
        .filter(|t| check_action(&t.action, nx, na).is_ok())
        .map(|t| t.action.mass().iter().chain(t.recon.mass()).copied().collect())
        .collect();
    let (mass, score) = minimizer.run(anchor, &seed_masses, &mut starts)?;
    let channel = build(&mass);
    let point = eval_cr_point(m, &channel)?;
    Ok(CrOptimum {
        objective: score.objective,
        rates: min_weighted_rates(&point, weights),
        point,
        channel,
    })
}

/// Best action channel found by [`optimize_broadcast_lossless`].
#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastLosslessOptimum {
    pub objective: f64,
    pub rates: RateTriple,
    pub point: BroadcastRegionPoint,
    pub action: ConditionalChannel,
}

/// Approximately minimizes `w1 R1 + w2 R2 + wb Rb` over the lossless region,
/// searching `p(a | x)` with `E[cost] <= gamma`.
pub fn optimize_broadcast_lossless(
    m: &BroadcastModel,
    gamma: f64,
    weights: &RateWeights,
    search: &SearchConfig,
) -> Result<BroadcastLosslessOptimum> {
    let (cheap, cheapest) = m.cost().cheapest().expect("validated model has a permitted action");
    if cheapest > gamma {
        return Err(Error::Infeasible(alloc::format!(
            "cheapest action costs {cheapest}, budget is {gamma}"
        )));
    }
    let budget = Budget::lossless(gamma);
    let (nx, na) = (m.nx(), m.na());
    let layout = Layout::new(vec![Block { slices: nx, width: na }]);
    let (from, to) = action_vars(nx, na)?;
    let mut anchor = vec![0.0; nx * na];
    for x in 0..nx {
        anchor[x * na + cheap] = 1.0;
    }
    let build = |mass: &[f64]| ConditionalChannel::from_parts(from.clone(), to.clone(), mass.to_vec());
    let eval = |mass: &[f64]| match eval_broadcast_lossless(m, &build(mass)) {
        Ok(p) => Score {
            objective: min_weighted_rates(&p, weights).value,
            cost: p.cost,
            violation: violation(&p, &budget),
        },
        Err(_) => INVALID,
    };
    let mut starts = |rng: &mut rand_chacha::ChaCha8Rng, _: usize, units: Option<usize>| {
        (0..nx).flat_map(|_| random_simplex(rng, na, units)).collect()
    };
    let mut minimizer = Minimizer {
        layout: &layout,
        config: search,
        eval,
    };
    let (mass, score) = minimizer.run(anchor, &[], &mut starts)?;
    let action = build(&mass);
    let point = eval_broadcast_lossless(m, &action)?;
    Ok(BroadcastLosslessOptimum {
        objective: score.objective,
        rates: min_weighted_rates(&point, weights),
        point,
        action,
    })
}
