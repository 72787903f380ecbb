//! The cascade network: rate pairs `(R1, R2)` achievable at distortions
//! `(D1, D2)` and action cost `Gamma`.
//!
//! For a test channel `p(xhat1, a, u | x, y)` and decoder `xhat2 = f(u, z)`
//! the region contains every pair with
//!
//! ```text
//! R1 >= I(X; Xh1, A, U | Y)
//! R2 >= I(X, Y; A) + I(X, Y; U | A, Z)
//! ```
//!
//! evaluated under `p(x, y) p(xhat1, a, u | x, y) p(z | a, y)`. With Hamming
//! distortion and `D1 = D2 = 0` this collapses to a search over `p(a | x, y)`
//! alone ([`eval_cascade_lossless`]). Letting the action adapt to past
//! samples of `Z` leaves the region unchanged, so these evaluators also
//! describe the adaptive-action cascade.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{var, Budget, CascadeModel};
use crate::prob::{Alphabet, ConditionalChannel, JointDistribution};
use crate::search::{random_simplex, Block, Layout, Minimizer, Score};
use crate::{Error, Result, SearchConfig};

/// Rate bounds, distortions and cost of one test channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionPoint {
    pub r1_min: f64,
    pub r2_min: f64,
    pub d1: f64,
    pub d2: f64,
    /// `+inf` when a forbidden action has positive probability.
    pub cost: f64,
}

impl RegionPoint {
    /// Whether the point meets `budget` up to `tol`.
    pub fn satisfies(&self, budget: &Budget, tol: f64) -> bool {
        self.d1 <= budget.d1 + tol && self.d2 <= budget.d2 + tol && self.cost <= budget.gamma + tol
    }

    pub fn weighted(&self, eta: f64) -> f64 {
        self.r1_min + eta * self.r2_min
    }
}

/// `p(xhat1, a, u | x, y)` plus the Node 3 decoder `f: U x Z -> Xhat2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeTestChannel {
    channel: ConditionalChannel,
    /// `f(u, z)` stored at `u * |Z| + z`.
    decode: Vec<usize>,
}

impl CascadeTestChannel {
    /// Checks shapes against `m`, including `|U| <= |X||Y||A| + 3`.
    pub fn new(m: &CascadeModel, channel: ConditionalChannel, decode: Vec<usize>) -> Result<Self> {
        let t = Self::unbounded(m, channel, decode)?;
        if t.aux_size() > m.aux_bound() {
            return Err(Error::InvalidParameter(alloc::format!(
                "auxiliary alphabet {} exceeds the bound {}",
                t.aux_size(),
                m.aux_bound()
            )));
        }
        Ok(t)
    }

    /// Like [`new`](Self::new) without the cardinality bound; only the
    /// auxiliary-sufficiency checks go past it.
    pub(crate) fn unbounded(
        m: &CascadeModel,
        channel: ConditionalChannel,
        decode: Vec<usize>,
    ) -> Result<Self> {
        let from: Vec<&str> = channel.from_vars().iter().map(Alphabet::name).collect();
        let to: Vec<&str> = channel.to_vars().iter().map(Alphabet::name).collect();
        if from != [var::X, var::Y] || to != [var::XHAT1, var::A, var::U] {
            return Err(Error::Usage(alloc::format!(
                "cascade test channel must map (X, Y) to (Xh1, A, U), found {from:?} -> {to:?}"
            )));
        }
        let sizes = |vs: &[Alphabet]| vs.iter().map(Alphabet::size).collect::<Vec<_>>();
        if sizes(channel.from_vars()) != [m.nx(), m.ny()]
            || sizes(&channel.to_vars()[..2]) != [m.nxhat1(), m.na()]
        {
            return Err(Error::Usage("test channel alphabets do not match the model".into()));
        }
        let nu = channel.to_vars()[2].size();
        if decode.len() != nu * m.nz() {
            return Err(Error::ShapeMismatch {
                what: "decoder table".into(),
                expected: nu * m.nz(),
                found: decode.len(),
            });
        }
        if decode.iter().any(|&x| x >= m.nxhat2()) {
            return Err(Error::Usage("decoder output outside the Xhat2 alphabet".into()));
        }
        Ok(CascadeTestChannel { channel, decode })
    }

    /// Pairs `channel` with the decoder minimizing `E[d2]` for it.
    pub fn with_optimal_decode(m: &CascadeModel, channel: ConditionalChannel) -> Result<Self> {
        let nu = channel.to_vars().get(2).map(Alphabet::size).unwrap_or(0);
        let placeholder = vec![0; nu * m.nz()];
        let t = Self::new(m, channel, placeholder)?;
        let joint = t.joint(m)?;
        let decode = optimal_decoder(m, &joint)?;
        Ok(CascadeTestChannel {
            channel: t.channel,
            decode,
        })
    }

    /// `U := X`, `Xh1 := X`, `f(u, z) := u` with the given action channel
    /// `p(a | x, y)`. Needs reconstruction alphabets at least as large as `X`.
    pub fn lossless(m: &CascadeModel, action: &ConditionalChannel) -> Result<Self> {
        check_action(m, action)?;
        let (nx, ny, na) = (m.nx(), m.ny(), m.na());
        if m.nxhat1() < nx || m.nxhat2() < nx {
            return Err(Error::Usage("reconstruction alphabets smaller than X".into()));
        }
        let nh = m.nxhat1();
        let mut mass = vec![0.0; nx * ny * nh * na * nx];
        for x in 0..nx {
            for y in 0..ny {
                let s = x * ny + y;
                for a in 0..na {
                    let idx = ((x * na) + a) * nx + x;
                    mass[s * nh * na * nx + idx] = action.slice(s)[a];
                }
            }
        }
        let channel = ConditionalChannel::from_parts(
            source_vars(m)?,
            test_outputs(m, nx)?,
            mass,
        );
        let nz = m.nz();
        let decode = (0..nx * nz).map(|i| i / nz).collect();
        Self::new(m, channel, decode)
    }

    pub fn channel(&self) -> &ConditionalChannel {
        &self.channel
    }

    pub fn decode(&self) -> &[usize] {
        &self.decode
    }

    pub fn aux_size(&self) -> usize {
        self.channel.to_vars()[2].size()
    }

    /// The joint pmf over `(X, Y, Xh1, A, U, Z)`.
    pub fn joint(&self, m: &CascadeModel) -> Result<JointDistribution> {
        m.source().compose(&self.channel)?.compose(m.side_info())
    }
}

fn source_vars(m: &CascadeModel) -> Result<Vec<Alphabet>> {
    Ok(vec![Alphabet::new(var::X, m.nx())?, Alphabet::new(var::Y, m.ny())?])
}

fn test_outputs(m: &CascadeModel, nu: usize) -> Result<Vec<Alphabet>> {
    Ok(vec![
        Alphabet::new(var::XHAT1, m.nxhat1())?,
        Alphabet::new(var::A, m.na())?,
        Alphabet::new(var::U, nu)?,
    ])
}

fn check_action(m: &CascadeModel, action: &ConditionalChannel) -> Result<()> {
    let from: Vec<(&str, usize)> = action.from_vars().iter().map(|a| (a.name(), a.size())).collect();
    let to: Vec<(&str, usize)> = action.to_vars().iter().map(|a| (a.name(), a.size())).collect();
    if from != [(var::X, m.nx()), (var::Y, m.ny())] || to != [(var::A, m.na())] {
        return Err(Error::Usage("action channel must be p(A | X, Y) over the model alphabets".into()));
    }
    Ok(())
}

/// For each `(u, z)`, the reconstruction minimizing the posterior expected
/// `d2`; ties go to the smallest symbol.
fn optimal_decoder(m: &CascadeModel, joint: &JointDistribution) -> Result<Vec<usize>> {
    let pxuz = joint.marginalize(&[var::U, var::Z, var::X])?;
    let (nu, nz, nx) = (
        pxuz.variables()[0].size(),
        pxuz.variables()[1].size(),
        pxuz.variables()[2].size(),
    );
    let d2 = m.d2();
    let mut decode = Vec::with_capacity(nu * nz);
    for uz in 0..nu * nz {
        let col = &pxuz.mass()[uz * nx..(uz + 1) * nx];
        let mut best = (0, f64::INFINITY);
        for xh in 0..d2.recons() {
            let loss: f64 = col.iter().enumerate().map(|(x, p)| p * d2.get(x, xh)).sum();
            if loss < best.1 - 1e-15 {
                best = (xh, loss);
            }
        }
        decode.push(best.0);
    }
    Ok(decode)
}

/// Evaluates both rate bounds, the distortions and the cost of `t`.
pub fn eval_cascade_point(m: &CascadeModel, t: &CascadeTestChannel) -> Result<RegionPoint> {
    let joint = t.joint(m)?;
    let r1_min = joint.conditional_mutual_information(
        &[var::X],
        &[var::XHAT1, var::A, var::U],
        &[var::Y],
    )?;
    let r2_min = joint.mutual_information(&[var::X, var::Y], &[var::A])?
        + joint.conditional_mutual_information(&[var::X, var::Y], &[var::U], &[var::A, var::Z])?;
    let d1 = crate::model::expected_distortion(&joint, m.d1(), var::X, var::XHAT1)?;
    let pxuz = joint.marginalize(&[var::X, var::U, var::Z])?;
    let (nu, nz) = (t.aux_size(), m.nz());
    let d2 = pxuz
        .mass()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (x, uz) = (i / (nu * nz), i % (nu * nz));
            p * m.d2().get(x, t.decode[uz])
        })
        .sum();
    let cost = crate::model::expected_cost(&joint, var::A, m.cost())?;
    Ok(RegionPoint {
        r1_min,
        r2_min,
        d1,
        d2,
        cost,
    })
}

/// Lossless rates for the action channel `p(a | x, y)`:
/// `R1 >= I(X; A | Y) + H(X | A, Y)`, `R2 >= I(X, Y; A) + H(X | A, Z)`.
pub fn eval_cascade_lossless(m: &CascadeModel, action: &ConditionalChannel) -> Result<RegionPoint> {
    check_action(m, action)?;
    let joint = m.source().compose(action)?.compose(m.side_info())?;
    let r1_min = joint.conditional_mutual_information(&[var::X], &[var::A], &[var::Y])?
        + joint.conditional_entropy(&[var::X], &[var::A, var::Y])?;
    let r2_min = joint.mutual_information(&[var::X, var::Y], &[var::A])?
        + joint.conditional_entropy(&[var::X], &[var::A, var::Z])?;
    let cost = crate::model::expected_cost(&joint, var::A, m.cost())?;
    Ok(RegionPoint {
        r1_min,
        r2_min,
        d1: 0.0,
        d2: 0.0,
        cost,
    })
}

/// Best point found by [`optimize_cascade`] and its witness.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeOptimum {
    pub objective: f64,
    pub point: RegionPoint,
    pub channel: CascadeTestChannel,
}

fn violation(p: &RegionPoint, b: &Budget) -> f64 {
    if p.cost.is_infinite() {
        return f64::INFINITY;
    }
    (p.d1 - b.d1).max(0.0) + (p.d2 - b.d2).max(0.0) + (p.cost - b.gamma).max(0.0)
}

fn check_weight(eta: f64) -> Result<()> {
    if eta.is_nan() || eta < 0.0 || eta.is_infinite() {
        return Err(Error::InvalidParameter(alloc::format!("weight {eta}")));
    }
    Ok(())
}

/// Rejects budgets that no test channel can meet.
fn check_budget(m: &CascadeModel, budget: &Budget) -> Result<()> {
    let (_, cheapest) = m.cost().cheapest().expect("validated model has a permitted action");
    if cheapest > budget.gamma {
        return Err(Error::Infeasible(alloc::format!(
            "cheapest action costs {cheapest}, budget is {}",
            budget.gamma
        )));
    }
    let px = m.source().marginalize(&[var::X])?;
    for (name, table, d) in [("D1", m.d1(), budget.d1), ("D2", m.d2(), budget.d2)] {
        let floor = table.min_expected(px.mass());
        if floor > d + 1e-12 {
            return Err(Error::Infeasible(alloc::format!(
                "{name} = {d} is below the smallest achievable distortion {floor}"
            )));
        }
    }
    Ok(())
}

/// Approximately minimizes `r1_min + eta * r2_min` over test channels that
/// meet `budget`; see [`SearchConfig`] for the search parameters.
pub fn optimize_cascade(
    m: &CascadeModel,
    budget: &Budget,
    eta: f64,
    search: &SearchConfig,
) -> Result<CascadeOptimum> {
    optimize_cascade_seeded(m, budget, eta, search, &[])
}

/// [`optimize_cascade`] with extra starting channels, e.g. the optimum of a
/// tighter budget when sweeping.
pub fn optimize_cascade_seeded(
    m: &CascadeModel,
    budget: &Budget,
    eta: f64,
    search: &SearchConfig,
    seeds: &[CascadeTestChannel],
) -> Result<CascadeOptimum> {
    check_weight(eta)?;
    check_budget(m, budget)?;
    let (nx, ny, na, nh) = (m.nx(), m.ny(), m.na(), m.nxhat1());
    let nu = search.aux_size.unwrap_or_else(|| m.aux_bound());
    if nu == 0 {
        return Err(Error::InvalidParameter("auxiliary alphabet must be nonempty".into()));
    }
    let width = nh * na * nu;
    let layout = Layout::new(vec![Block {
        slices: nx * ny,
        width,
    }]);
    let from = source_vars(m)?;
    let to = test_outputs(m, nu)?;
    let (cheap, _) = m.cost().cheapest().expect("validated model has a permitted action");

    let slot = |xh: usize, a: usize, u: usize| (xh * na + a) * nu + u;
    let mut anchor = vec![0.0; nx * ny * width];
    for x in 0..nx {
        for y in 0..ny {
            anchor[(x * ny + y) * width + slot(m.d1().best_recon(x), cheap, x % nu)] = 1.0;
        }
    }

    let build = |mass: &[f64]| -> Result<CascadeTestChannel> {
        let ch = ConditionalChannel::from_parts(from.clone(), to.clone(), mass.to_vec());
        let joint = m.source().compose(&ch)?.compose(m.side_info())?;
        let decode = optimal_decoder(m, &joint)?;
        Ok(CascadeTestChannel {
            channel: ch,
            decode,
        })
    };
    let eval = |mass: &[f64]| -> Score {
        match build(mass).and_then(|t| eval_cascade_point(m, &t)) {
            Ok(p) => Score {
                objective: p.weighted(eta),
                cost: p.cost,
                violation: violation(&p, budget),
            },
            Err(_) => Score {
                objective: f64::INFINITY,
                cost: f64::INFINITY,
                violation: f64::INFINITY,
            },
        }
    };

    let seed_masses: Vec<Vec<f64>> = seeds
        .iter()
        .filter(|t| t.aux_size() == nu)
        .map(|t| t.channel.mass().to_vec())
        .collect();
    let mut starts = |rng: &mut rand_chacha::ChaCha8Rng, i: usize, units: Option<usize>| {
        if i % 2 == 0 {
            // Random action on top of a lossless description of X.
            let mut mass = vec![0.0; nx * ny * width];
            for x in 0..nx {
                for y in 0..ny {
                    let pa = random_simplex(rng, na, units);
                    for (a, p) in pa.into_iter().enumerate() {
                        mass[(x * ny + y) * width + slot(m.d1().best_recon(x), a, x % nu)] = p;
                    }
                }
            }
            mass
        } else {
            (0..nx * ny).flat_map(|_| random_simplex(rng, width, units)).collect()
        }
    };
    let mut minimizer = Minimizer {
        layout: &layout,
        config: search,
        eval,
    };
    let (mass, score) = minimizer.run(anchor, &seed_masses, &mut starts)?;
    let channel = build(&mass)?;
    let point = eval_cascade_point(m, &channel)?;
    Ok(CascadeOptimum {
        objective: score.objective,
        point,
        channel,
    })
}

/// Best action channel found by [`optimize_cascade_lossless`].
#[derive(Clone, Debug, PartialEq)]
pub struct LosslessOptimum {
    pub objective: f64,
    pub point: RegionPoint,
    pub action: ConditionalChannel,
}

/// Minimizes `r1_min + eta * r2_min` of the lossless region over `p(a | x, y)`
/// with `E[cost] <= gamma`.
pub fn optimize_cascade_lossless(
    m: &CascadeModel,
    gamma: f64,
    eta: f64,
    search: &SearchConfig,
) -> Result<LosslessOptimum> {
    check_weight(eta)?;
    let budget = Budget::lossless(gamma);
    let (cheap, cheapest) = m.cost().cheapest().expect("validated model has a permitted action");
    if cheapest > gamma {
        return Err(Error::Infeasible(alloc::format!(
            "cheapest action costs {cheapest}, budget is {gamma}"
        )));
    }
    let (nx, ny, na) = (m.nx(), m.ny(), m.na());
    let layout = Layout::new(vec![Block {
        slices: nx * ny,
        width: na,
    }]);
    let from = source_vars(m)?;
    let to = vec![Alphabet::new(var::A, na)?];
    let mut anchor = vec![0.0; nx * ny * na];
    for s in 0..nx * ny {
        anchor[s * na + cheap] = 1.0;
    }
    let build = |mass: &[f64]| ConditionalChannel::from_parts(from.clone(), to.clone(), mass.to_vec());
    let eval = |mass: &[f64]| -> Score {
        match eval_cascade_lossless(m, &build(mass)) {
            Ok(p) => Score {
                objective: p.weighted(eta),
                cost: p.cost,
                violation: violation(&p, &budget),
            },
            Err(_) => Score {
                objective: f64::INFINITY,
                cost: f64::INFINITY,
                violation: f64::INFINITY,
            },
        }
    };
    let mut starts = |rng: &mut rand_chacha::ChaCha8Rng, _: usize, units: Option<usize>| {
        (0..nx * ny).flat_map(|_| random_simplex(rng, na, units)).collect()
    };
    let mut minimizer = Minimizer {
        layout: &layout,
        config: search,
        eval,
    };
    let (mass, score) = minimizer.run(anchor, &[], &mut starts)?;
    let action = build(&mass);
    let point = eval_cascade_lossless(m, &action)?;
    Ok(LosslessOptimum {
        objective: score.objective,
        point,
        action,
    })
}

/// Lower-left convex envelope of a set of `(R1, R2)` corner points: the
/// boundary of the region once time-sharing between the points is allowed.
/// Returned in increasing `R1`.
pub fn lower_convex_envelope(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .collect();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    pts.dedup();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        // keep one point per R1, the lowest
        if let Some(last) = hull.last() {
            if last.0 == p.0 {
                continue;
            }
        }
        hull.push(p);
    }
    // Beyond the lowest R2 the hull turns upward; those points are dominated.
    if let Some(k) = hull
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(a.0.cmp(&b.0)))
        .map(|(k, _)| k)
    {
        hull.truncate(k + 1);
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DistortionTable;

    fn model(vm_action_dependent: bool) -> CascadeModel {
        // X uniform, Y = BSC(0.2) of X; Z = Y through BSC(0.1) for a = 1,
        // erased to a constant for a = 0 (unless action independent).
        let pxy = vec![0.4, 0.1, 0.1, 0.4];
        let mut vm = Vec::new();
        for a in 0..2 {
            for y in 0..2 {
                let good = if a == 1 || !vm_action_dependent { 0.9 } else { 0.5 };
                vm.extend(if y == 0 { [good, 1.0 - good] } else { [1.0 - good, good] });
            }
        }
        CascadeModel::from_tables(
            pxy,
            (2, 2, 2),
            vm,
            &[0.0, 1.0],
            DistortionTable::hamming(2),
            DistortionTable::hamming(2),
        )
        .unwrap()
    }

    fn constant_action(m: &CascadeModel, a: usize) -> ConditionalChannel {
        ConditionalChannel::deterministic(
            source_vars(m).unwrap(),
            vec![Alphabet::new(var::A, m.na()).unwrap()],
            |_| vec![a],
        )
        .unwrap()
    }

    #[test]
    fn constant_channel_has_zero_rates() {
        let m = model(true);
        let ch = ConditionalChannel::deterministic(source_vars(&m).unwrap(), test_outputs(&m, 1).unwrap(), |_| {
            vec![1, 0, 0]
        })
        .unwrap();
        let t = CascadeTestChannel::with_optimal_decode(&m, ch).unwrap();
        let p = eval_cascade_point(&m, &t).unwrap();
        assert!(p.r1_min.abs() < 1e-12 && p.r2_min.abs() < 1e-12);
        assert!((p.d1 - 0.5).abs() < 1e-12);
        assert_eq!(p.cost, 0.0);
    }

    #[test]
    fn lossless_substitution_matches_corollary_form() {
        let m = model(true);
        let action = ConditionalChannel::new(
            source_vars(&m).unwrap(),
            vec![Alphabet::new(var::A, 2).unwrap()],
            vec![0.7, 0.3, 0.2, 0.8, 0.5, 0.5, 0.1, 0.9],
        )
        .unwrap();
        let full = eval_cascade_point(&m, &CascadeTestChannel::lossless(&m, &action).unwrap()).unwrap();
        let joint = m.source().compose(&action).unwrap().compose(m.side_info()).unwrap();
        let r1 = joint.conditional_mutual_information(&["X"], &["A"], &["Y"]).unwrap()
            + joint.conditional_entropy(&["X"], &["A", "Y"]).unwrap();
        let r2 = joint.mutual_information(&["X", "Y"], &["A"]).unwrap()
            + joint.conditional_entropy(&["X"], &["A", "Z"]).unwrap();
        assert!((full.r1_min - r1).abs() < 1e-12);
        assert!((full.r2_min - r2).abs() < 1e-12);
        assert_eq!((full.d1, full.d2), (0.0, 0.0));
    }

    #[test]
    fn single_action_lossless_rates_are_conditional_entropies() {
        let m = model(true);
        let p = eval_cascade_lossless(&m, &constant_action(&m, 1)).unwrap();
        let joint = m.source().compose(&constant_action(&m, 1)).unwrap().compose(m.side_info()).unwrap();
        assert!((p.r1_min - joint.conditional_entropy(&["X"], &["Y"]).unwrap()).abs() < 1e-12);
        assert!((p.r2_min - joint.conditional_entropy(&["X"], &["Z"]).unwrap()).abs() < 1e-12);
        assert_eq!(p.cost, 1.0);
    }

    #[test]
    fn forbidden_action_gives_infinite_cost() {
        let m = CascadeModel::from_tables(
            vec![0.25; 4],
            (2, 2, 1),
            vec![1.0; 4],
            &[0.0, f64::INFINITY],
            DistortionTable::hamming(2),
            DistortionTable::hamming(2),
        )
        .unwrap();
        let p = eval_cascade_lossless(&m, &constant_action(&m, 1)).unwrap();
        assert_eq!(p.cost, f64::INFINITY);
    }

    #[test]
    fn aux_bound_is_enforced() {
        let m = model(true);
        let nu = m.aux_bound() + 1;
        let ch = ConditionalChannel::deterministic(source_vars(&m).unwrap(), test_outputs(&m, nu).unwrap(), |_| {
            vec![0, 0, 0]
        })
        .unwrap();
        assert!(CascadeTestChannel::new(&m, ch, vec![0; nu * 2]).is_err());
    }

    #[test]
    fn infeasible_budgets_are_reported() {
        let m = CascadeModel::from_tables(
            vec![0.25; 4],
            (2, 2, 1),
            vec![1.0; 4],
            &[0.5, 1.0],
            DistortionTable::hamming(2),
            DistortionTable::hamming(2),
        )
        .unwrap();
        let cfg = SearchConfig { starts: 2, sweeps: 5, ..SearchConfig::default() };
        assert!(matches!(
            optimize_cascade(&m, &Budget::new(0.1, 1.0, 1.0).unwrap(), 1.0, &cfg),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn envelope_keeps_the_lower_left_boundary() {
        let pts = [(0.0, 2.0), (1.0, 1.5), (1.0, 0.9), (2.0, 0.5), (3.0, 0.4), (4.0, 0.45), (0.5, 3.0)];
        let env = lower_convex_envelope(&pts);
        assert_eq!(env, vec![(0.0, 2.0), (1.0, 0.9), (2.0, 0.5), (3.0, 0.4)]);
    }
}
