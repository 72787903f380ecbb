//! Network models: source and side-information tables, action costs and
//! distortion measures, validated on construction.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::prob::{Alphabet, ConditionalChannel, JointDistribution};
use crate::{Error, Result};

/// Variable names used by every evaluator.
pub mod var {
    pub const X: &str = "X";
    pub const Y: &str = "Y";
    pub const Z: &str = "Z";
    pub const A: &str = "A";
    pub const U: &str = "U";
    pub const W: &str = "W";
    pub const XHAT1: &str = "Xh1";
    pub const XHAT2: &str = "Xh2";
}

/// Residual allowed when checking the degradedness factorization.
pub const DEGRADEDNESS_TOLERANCE: f64 = 1e-9;

/// Cost of one action. `Forbidden` stands for an infinite cost: a test
/// channel is feasible only if it never takes that action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActionCost {
    Finite(f64),
    Forbidden,
}

impl ActionCost {
    pub fn value(self) -> f64 {
        match self {
            ActionCost::Finite(c) => c,
            ActionCost::Forbidden => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostTable {
    costs: Vec<ActionCost>,
}

impl CostTable {
    /// `f64::INFINITY` entries become [`ActionCost::Forbidden`].
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroSizedAlphabet(var::A.into()));
        }
        let mut costs = Vec::with_capacity(values.len());
        for (a, &c) in values.iter().enumerate() {
            if c.is_nan() || c < 0.0 {
                return Err(Error::NegativeCost(a));
            }
            costs.push(if c.is_infinite() {
                ActionCost::Forbidden
            } else {
                ActionCost::Finite(c)
            });
        }
        Ok(CostTable { costs })
    }

    pub fn zero(actions: usize) -> Result<Self> {
        Self::new(&vec![0.0; actions])
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn get(&self, a: usize) -> ActionCost {
        self.costs[a]
    }

    pub fn is_forbidden(&self, a: usize) -> bool {
        self.costs[a] == ActionCost::Forbidden
    }

    /// Cheapest permitted action and its cost.
    pub fn cheapest(&self) -> Option<(usize, f64)> {
        self.costs
            .iter()
            .enumerate()
            .filter_map(|(a, c)| match c {
                ActionCost::Finite(v) => Some((a, *v)),
                ActionCost::Forbidden => None,
            })
            .fold(None, |best: Option<(usize, f64)>, (a, v)| match best {
                Some((_, bv)) if bv <= v => best,
                _ => Some((a, v)),
            })
    }

    /// `E[cost]` under an action marginal; `+inf` if a forbidden action has
    /// positive probability.
    pub fn expected(&self, action_marginal: &[f64]) -> f64 {
        let mut total = 0.0;
        for (c, &p) in self.costs.iter().zip(action_marginal) {
            match c {
                ActionCost::Finite(v) => total += p * v,
                ActionCost::Forbidden if p > 0.0 => return f64::INFINITY,
                ActionCost::Forbidden => {}
            }
        }
        total
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let values: Vec<f64> = self.costs.iter().map(|c| c.value() * factor).collect();
        Self::new(&values)
    }
}

/// A distortion measure `d(x, xhat)` stored row-major over source symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionTable {
    sources: usize,
    recons: usize,
    entries: Vec<f64>,
}

impl DistortionTable {
    pub fn new(sources: usize, recons: usize, entries: Vec<f64>) -> Result<Self> {
        if sources == 0 || recons == 0 {
            return Err(Error::InvalidDistortion("empty table".into()));
        }
        if entries.len() != sources * recons {
            return Err(Error::ShapeMismatch {
                what: "distortion table".into(),
                expected: sources * recons,
                found: entries.len(),
            });
        }
        if let Some(e) = entries.iter().find(|e| !e.is_finite() || **e < 0.0) {
            return Err(Error::InvalidDistortion(format!("entry {e} outside [0, inf)")));
        }
        Ok(DistortionTable {
            sources,
            recons,
            entries,
        })
    }

    pub fn hamming(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { 0.0 } else { 1.0 })
            .collect();
        DistortionTable {
            sources: n,
            recons: n,
            entries,
        }
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    pub fn recons(&self) -> usize {
        self.recons
    }

    pub fn get(&self, x: usize, xhat: usize) -> f64 {
        self.entries[x * self.recons + xhat]
    }

    /// Largest entry of the table.
    pub fn dmax(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// Reconstruction minimizing the distortion for a known source symbol.
    pub fn best_recon(&self, x: usize) -> usize {
        (0..self.recons)
            .min_by(|&a, &b| self.get(x, a).total_cmp(&self.get(x, b)))
            .unwrap_or(0)
    }

    /// `E[d(X, Xhat)]` when every source symbol is reproduced by `best_recon`.
    pub fn min_expected(&self, px: &[f64]) -> f64 {
        px.iter()
            .enumerate()
            .map(|(x, p)| p * self.get(x, self.best_recon(x)))
            .sum()
    }
}

/// Average cost and distortion targets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    pub gamma: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Budget {
    pub fn new(gamma: f64, d1: f64, d2: f64) -> Result<Self> {
        for (name, v) in [("cost budget", gamma), ("D1", d1), ("D2", d2)] {
            if v.is_nan() || v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} = {v}")));
            }
        }
        Ok(Budget { gamma, d1, d2 })
    }

    pub fn unconstrained() -> Self {
        Budget {
            gamma: f64::INFINITY,
            d1: f64::INFINITY,
            d2: f64::INFINITY,
        }
    }

    pub fn lossless(gamma: f64) -> Self {
        Budget {
            gamma,
            d1: 0.0,
            d2: 0.0,
        }
    }
}

/// `sum_a p(a) cost(a)` for the variable `action` of `joint`.
pub fn expected_cost(joint: &JointDistribution, action: &str, cost: &CostTable) -> Result<f64> {
    let pa = joint.marginalize(&[action])?;
    if pa.mass().len() != cost.len() {
        return Err(Error::ShapeMismatch {
            what: "cost table".into(),
            expected: pa.mass().len(),
            found: cost.len(),
        });
    }
    Ok(cost.expected(pa.mass()))
}

/// `sum p(x, xhat) d(x, xhat)` over the two named variables of `joint`.
pub fn expected_distortion(
    joint: &JointDistribution,
    table: &DistortionTable,
    source: &str,
    recon: &str,
) -> Result<f64> {
    let p = joint.marginalize(&[source, recon])?;
    let (nx, nr) = (p.variables()[0].size(), p.variables()[1].size());
    if nx != table.sources || nr != table.recons {
        return Err(Error::ShapeMismatch {
            what: "distortion table".into(),
            expected: nx * nr,
            found: table.sources * table.recons,
        });
    }
    Ok(p
        .mass()
        .iter()
        .enumerate()
        .map(|(i, m)| m * table.get(i / nr, i % nr))
        .sum())
}

fn expect_vars(what: &str, got: &[Alphabet], names: &[&str]) -> Result<()> {
    if got.len() != names.len() || got.iter().zip(names).any(|(a, n)| a.name() != *n) {
        let found: Vec<&str> = got.iter().map(Alphabet::name).collect();
        return Err(Error::Usage(format!(
            "{what} must be over {names:?}, found {found:?}"
        )));
    }
    Ok(())
}

fn expect_size(what: &str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::ShapeMismatch {
            what: what.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

/// The cascade network: Node 1 sees `(X, Y)`, Node 2 sees `Y`, and Node 3
/// acquires `Z ~ p(z | a, y)` after the action `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeModel {
    source: JointDistribution,
    side_info: ConditionalChannel,
    cost: CostTable,
    d1: DistortionTable,
    d2: DistortionTable,
}

impl CascadeModel {
    /// `source` over `(X, Y)`; `side_info` is `p(Z | A, Y)`.
    pub fn new(
        source: JointDistribution,
        side_info: ConditionalChannel,
        cost: CostTable,
        d1: DistortionTable,
        d2: DistortionTable,
    ) -> Result<Self> {
        let m = CascadeModel {
            source,
            side_info,
            cost,
            d1,
            d2,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds the model from raw row-major tables: `pxy[x][y]`, `vm[a][y][z]`.
    pub fn from_tables(
        pxy: Vec<f64>,
        (nx, ny, nz): (usize, usize, usize),
        vm: Vec<f64>,
        cost: &[f64],
        d1: DistortionTable,
        d2: DistortionTable,
    ) -> Result<Self> {
        let na = cost.len();
        let source = JointDistribution::new(
            vec![Alphabet::new(var::X, nx)?, Alphabet::new(var::Y, ny)?],
            pxy,
        )?;
        let side_info = ConditionalChannel::new(
            vec![Alphabet::new(var::A, na)?, Alphabet::new(var::Y, ny)?],
            vec![Alphabet::new(var::Z, nz)?],
            vm,
        )?;
        Self::new(source, side_info, CostTable::new(cost)?, d1, d2)
    }

    /// Re-checks every invariant. Construction already does this, so calling
    /// it on an existing model always succeeds.
    pub fn validate(&self) -> Result<()> {
        expect_vars("cascade source", self.source.variables(), &[var::X, var::Y])?;
        expect_vars("side information input", self.side_info.from_vars(), &[var::A, var::Y])?;
        expect_vars("side information output", self.side_info.to_vars(), &[var::Z])?;
        expect_size("cost table", self.side_info.from_vars()[0].size(), self.cost.len())?;
        expect_size("side information Y", self.ny(), self.side_info.from_vars()[1].size())?;
        expect_size("d1 source alphabet", self.nx(), self.d1.sources)?;
        expect_size("d2 source alphabet", self.nx(), self.d2.sources)?;
        if self.cost.cheapest().is_none() {
            return Err(Error::Infeasible("every action is forbidden".into()));
        }
        Ok(())
    }

    pub fn source(&self) -> &JointDistribution {
        &self.source
    }
    pub fn side_info(&self) -> &ConditionalChannel {
        &self.side_info
    }
    pub fn cost(&self) -> &CostTable {
        &self.cost
    }
    pub fn d1(&self) -> &DistortionTable {
        &self.d1
    }
    pub fn d2(&self) -> &DistortionTable {
        &self.d2
    }
    pub fn nx(&self) -> usize {
        self.source.variables()[0].size()
    }
    pub fn ny(&self) -> usize {
        self.source.variables()[1].size()
    }
    pub fn nz(&self) -> usize {
        self.side_info.to_vars()[0].size()
    }
    pub fn na(&self) -> usize {
        self.cost.len()
    }
    pub fn nxhat1(&self) -> usize {
        self.d1.recons
    }
    pub fn nxhat2(&self) -> usize {
        self.d2.recons
    }

    /// Largest auxiliary alphabet needed without loss of optimality:
    /// `|X||Y||A| + 3`.
    pub fn aux_bound(&self) -> usize {
        self.nx() * self.ny() * self.na() + 3
    }

    /// Returns the model with every action cost multiplied by `factor`.
    pub fn with_scaled_cost(&self, factor: f64) -> Result<Self> {
        let mut m = self.clone();
        m.cost = self.cost.scaled(factor)?;
        Ok(m)
    }

    /// Same model with the side-information channel replaced.
    pub fn with_side_info(&self, side_info: ConditionalChannel) -> Result<Self> {
        Self::new(
            self.source.clone(),
            side_info,
            self.cost.clone(),
            self.d1.clone(),
            self.d2.clone(),
        )
    }
}

/// The cascade-broadcast network: Node 1 sees `X`, the action `A` is
/// common to Nodes 2 and 3, which observe `(Y, Z) ~ p(y, z | a, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastModel {
    source: JointDistribution,
    side_info: ConditionalChannel,
    cost: CostTable,
    d1: DistortionTable,
    d2: DistortionTable,
    degraded: bool,
}

impl BroadcastModel {
    /// `source` over `X`; `side_info` is `p(Y, Z | A, X)`. With `degraded`
    /// set, the channel must factor as `p(y | a, x) p(z | y, a)`.
    pub fn new(
        source: JointDistribution,
        side_info: ConditionalChannel,
        cost: CostTable,
        d1: DistortionTable,
        d2: DistortionTable,
        degraded: bool,
    ) -> Result<Self> {
        let m = BroadcastModel {
            source,
            side_info,
            cost,
            d1,
            d2,
            degraded,
        };
        m.validate()?;
        Ok(m)
    }

    /// Raw row-major tables: `px[x]`, `vm[a][x][y][z]`.
    pub fn from_tables(
        px: Vec<f64>,
        (ny, nz): (usize, usize),
        vm: Vec<f64>,
        cost: &[f64],
        d1: DistortionTable,
        d2: DistortionTable,
        degraded: bool,
    ) -> Result<Self> {
        let nx = px.len();
        let source = JointDistribution::new(vec![Alphabet::new(var::X, nx)?], px)?;
        let side_info = ConditionalChannel::new(
            vec![Alphabet::new(var::A, cost.len())?, Alphabet::new(var::X, nx)?],
            vec![Alphabet::new(var::Y, ny)?, Alphabet::new(var::Z, nz)?],
            vm,
        )?;
        Self::new(source, side_info, CostTable::new(cost)?, d1, d2, degraded)
    }

    pub fn validate(&self) -> Result<()> {
        expect_vars("broadcast source", self.source.variables(), &[var::X])?;
        expect_vars("side information input", self.side_info.from_vars(), &[var::A, var::X])?;
        expect_vars("side information output", self.side_info.to_vars(), &[var::Y, var::Z])?;
        expect_size("cost table", self.side_info.from_vars()[0].size(), self.cost.len())?;
        expect_size("side information X", self.nx(), self.side_info.from_vars()[1].size())?;
        expect_size("d1 source alphabet", self.nx(), self.d1.sources)?;
        expect_size("d2 source alphabet", self.nx(), self.d2.sources)?;
        if self.cost.cheapest().is_none() {
            return Err(Error::Infeasible("every action is forbidden".into()));
        }
        if self.degraded {
            let residual = self.degradedness_residual();
            if residual > DEGRADEDNESS_TOLERANCE {
                return Err(Error::NotDegraded { residual });
            }
        }
        Ok(())
    }

    /// Largest deviation of `p(z | a, x, y)` across `x` for fixed `(a, y)`;
    /// zero iff the channel factors as `p(y | a, x) p(z | y, a)`.
    pub fn degradedness_residual(&self) -> f64 {
        let (na, nx, ny, nz) = (self.na(), self.nx(), self.ny(), self.nz());
        let mut residual: f64 = 0.0;
        for a in 0..na {
            for y in 0..ny {
                let mut reference: Option<Vec<f64>> = None;
                for x in 0..nx {
                    let slice = self.side_info.slice(a * nx + x);
                    let py: f64 = slice[y * nz..(y + 1) * nz].iter().sum();
                    if py <= 0.0 {
                        continue;
                    }
                    let pz: Vec<f64> = slice[y * nz..(y + 1) * nz].iter().map(|v| v / py).collect();
                    match &reference {
                        None => reference = Some(pz),
                        Some(r) => {
                            for (u, v) in r.iter().zip(&pz) {
                                residual = residual.max((u - v).abs());
                            }
                        }
                    }
                }
            }
        }
        residual
    }

    pub fn source(&self) -> &JointDistribution {
        &self.source
    }
    pub fn side_info(&self) -> &ConditionalChannel {
        &self.side_info
    }
    pub fn cost(&self) -> &CostTable {
        &self.cost
    }
    pub fn d1(&self) -> &DistortionTable {
        &self.d1
    }
    pub fn d2(&self) -> &DistortionTable {
        &self.d2
    }
    pub fn is_degraded(&self) -> bool {
        self.degraded
    }
    pub fn nx(&self) -> usize {
        self.source.variables()[0].size()
    }
    pub fn ny(&self) -> usize {
        self.side_info.to_vars()[0].size()
    }
    pub fn nz(&self) -> usize {
        self.side_info.to_vars()[1].size()
    }
    pub fn na(&self) -> usize {
        self.cost.len()
    }
    pub fn nxhat1(&self) -> usize {
        self.d1.recons
    }
    pub fn nxhat2(&self) -> usize {
        self.d2.recons
    }

    /// Same model with `Z` removed (a constant): the setting where the action
    /// may adapt to past side information at Node 2.
    pub fn without_z(&self) -> Result<Self> {
        let (na, nx, ny, nz) = (self.na(), self.nx(), self.ny(), self.nz());
        let mut vm = Vec::with_capacity(na * nx * ny);
        for s in 0..na * nx {
            let slice = self.side_info.slice(s);
            for y in 0..ny {
                vm.push(slice[y * nz..(y + 1) * nz].iter().sum());
            }
        }
        let side_info = ConditionalChannel::new(
            self.side_info.from_vars().to_vec(),
            vec![Alphabet::new(var::Y, ny)?, Alphabet::new(var::Z, 1)?],
            vm,
        )?;
        Self::new(
            self.source.clone(),
            side_info,
            self.cost.clone(),
            self.d1.clone(),
            self.d2.clone(),
            self.degraded,
        )
    }
}

/// Switching side information: `W ~ p(w | x)` is revealed to Node 2, Node 3,
/// both or neither depending on the action `A in {0, 1, 2, 3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchingModel {
    source_pair: JointDistribution,
    lambdas: CostTable,
}

impl SwitchingModel {
    pub const ACTIONS: usize = 4;

    /// `source_pair` over `(X, W)`; `lambdas` are the four action costs.
    pub fn new(source_pair: JointDistribution, lambdas: [f64; 4]) -> Result<Self> {
        let m = SwitchingModel {
            source_pair,
            lambdas: CostTable::new(&lambdas)?,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_tables(pxw: Vec<f64>, (nx, nw): (usize, usize), lambdas: [f64; 4]) -> Result<Self> {
        let pair = JointDistribution::new(
            vec![Alphabet::new(var::X, nx)?, Alphabet::new(var::W, nw)?],
            pxw,
        )?;
        Self::new(pair, lambdas)
    }

    /// Uniform binary `X` seen through a binary symmetric channel with
    /// crossover `delta`; actions 0 and 3 forbidden, 1 and 2 cost one.
    pub fn bsc(delta: f64) -> Result<Self> {
        check_unit("delta", delta)?;
        let d = delta;
        Self::from_tables(
            vec![(1.0 - d) / 2.0, d / 2.0, d / 2.0, (1.0 - d) / 2.0],
            (2, 2),
            [f64::INFINITY, 1.0, 1.0, f64::INFINITY],
        )
    }

    /// Uniform binary `X` seen through the S-channel `p(0|0) = 1 - delta`,
    /// `p(1|1) = 1`; only action 1 (side information at Node 2) costs.
    pub fn s_channel(delta: f64) -> Result<Self> {
        check_unit("delta", delta)?;
        Self::from_tables(
            vec![(1.0 - delta) / 2.0, delta / 2.0, 0.0, 0.5],
            (2, 2),
            [f64::INFINITY, 1.0, 0.0, f64::INFINITY],
        )
    }

    pub fn validate(&self) -> Result<()> {
        expect_vars("switching source", self.source_pair.variables(), &[var::X, var::W])?;
        expect_size("switching actions", Self::ACTIONS, self.lambdas.len())?;
        if self.lambdas.cheapest().is_none() {
            return Err(Error::Infeasible("every action is forbidden".into()));
        }
        Ok(())
    }

    pub fn source_pair(&self) -> &JointDistribution {
        &self.source_pair
    }
    pub fn lambdas(&self) -> &CostTable {
        &self.lambdas
    }
    pub fn nx(&self) -> usize {
        self.source_pair.variables()[0].size()
    }
    pub fn nw(&self) -> usize {
        self.source_pair.variables()[1].size()
    }

    /// Index of the erasure symbol in the `Y` and `Z` alphabets.
    pub fn erasure(&self) -> usize {
        self.nw()
    }

    pub fn px(&self) -> Vec<f64> {
        let nw = self.nw();
        self.source_pair
            .mass()
            .chunks(nw)
            .map(|row| row.iter().sum())
            .collect()
    }

    /// The equivalent cascade-broadcast model with the switch table spelled
    /// out: `Y, Z` range over `W`'s symbols plus the erasure, and both
    /// decoders use Hamming distortion on `X`.
    pub fn to_broadcast(&self) -> Result<BroadcastModel> {
        let (nx, nw) = (self.nx(), self.nw());
        let e = self.erasure();
        let px = self.px();
        let mass = self.source_pair.mass();
        let side_info = ConditionalChannel::from_fn(
            vec![Alphabet::new(var::A, 4)?, Alphabet::new(var::X, nx)?],
            vec![Alphabet::new(var::Y, nw + 1)?, Alphabet::new(var::Z, nw + 1)?],
            |ax, yz| {
                let (a, x) = (ax[0], ax[1]);
                let (y, z) = (yz[0], yz[1]);
                let reveal_y = a == 1 || a == 3;
                let reveal_z = a == 2 || a == 3;
                // p(w | x); an impossible x gets an arbitrary valid row
                let pw = |w: usize| {
                    if px[x] > 0.0 {
                        mass[x * nw + w] / px[x]
                    } else if w == 0 {
                        1.0
                    } else {
                        0.0
                    }
                };
                match (reveal_y, reveal_z) {
                    (false, false) => f64::from(u8::from(y == e && z == e)),
                    (true, false) if z == e && y < nw => pw(y),
                    (false, true) if y == e && z < nw => pw(z),
                    (true, true) if y == z && y < nw => pw(y),
                    _ => 0.0,
                }
            },
        )?;
        let source = JointDistribution::new(vec![Alphabet::new(var::X, nx)?], px)?;
        BroadcastModel::new(
            source,
            side_info,
            self.lambdas.clone(),
            DistortionTable::hamming(nx),
            DistortionTable::hamming(nx),
            false,
        )
    }
}

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bit(name: &str) -> Alphabet {
        Alphabet::new(name, 2).unwrap()
    }

    fn joint_with_action(pa: &[f64]) -> JointDistribution {
        JointDistribution::new(vec![Alphabet::new(var::A, pa.len()).unwrap()], pa.to_vec()).unwrap()
    }

    #[test]
    fn bsc_switching_model_is_accepted() {
        let m = SwitchingModel::bsc(0.1).unwrap();
        m.validate().unwrap();
        let b = m.to_broadcast().unwrap();
        assert_eq!((b.ny(), b.nz()), (3, 3));
    }

    #[test]
    fn unnormalized_side_information_is_rejected() {
        let err = CascadeModel::from_tables(
            vec![0.25; 4],
            (2, 2, 2),
            vec![0.5, 0.48, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5],
            &[0.0, 1.0],
            DistortionTable::hamming(2),
            DistortionTable::hamming(2),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Normalization { .. }), "{err}");
    }

    #[test]
    fn degraded_flag_requires_factorization() {
        // p(y|a,x) = BSC(0.2) of x; Z = Y for a = 0 but Z = X for a = 1,
        // so Z depends on X beyond (A, Y).
        let vm = ConditionalChannel::from_fn(
            vec![bit(var::A), bit(var::X)],
            vec![bit(var::Y), bit(var::Z)],
            |ax, yz| {
                let py = if yz[0] == ax[1] { 0.8 } else { 0.2 };
                let z_target = if ax[0] == 0 { yz[0] } else { ax[1] };
                if yz[1] == z_target {
                    py
                } else {
                    0.0
                }
            },
        )
        .unwrap();
        let px = JointDistribution::uniform(vec![bit(var::X)]).unwrap();
        let build = |degraded| {
            BroadcastModel::new(
                px.clone(),
                vm.clone(),
                CostTable::zero(2).unwrap(),
                DistortionTable::hamming(2),
                DistortionTable::hamming(2),
                degraded,
            )
        };
        let err = build(true).unwrap_err();
        match err {
            Error::NotDegraded { residual } => assert!(residual > 1e-9),
            other => panic!("unexpected {other}"),
        }
        assert!(build(false).is_ok());
    }

    #[test]
    fn negative_cost_and_distortion_are_rejected() {
        assert_eq!(CostTable::new(&[0.0, -1.0]).unwrap_err(), Error::NegativeCost(1));
        assert!(DistortionTable::new(2, 2, vec![0.0, -0.1, 1.0, 0.0]).is_err());
    }

    #[test]
    fn expected_cost_examples() {
        let inf = f64::INFINITY;
        let q = 0.3;
        let cost = CostTable::new(&[inf, 1.0, 0.0, inf]).unwrap();
        let j = joint_with_action(&[0.0, q, 1.0 - q, 0.0]);
        assert!((expected_cost(&j, var::A, &cost).unwrap() - q).abs() < 1e-15);

        let free = CostTable::zero(2).unwrap();
        assert_eq!(expected_cost(&joint_with_action(&[0.5, 0.5]), var::A, &free).unwrap(), 0.0);

        let j = joint_with_action(&[0.1, 0.4, 0.5, 0.0]);
        assert_eq!(expected_cost(&j, var::A, &cost).unwrap(), f64::INFINITY);
    }

    #[test]
    fn expected_cost_scales_linearly() {
        let cost = CostTable::new(&[0.5, 2.0, 3.5]).unwrap();
        let j = joint_with_action(&[0.2, 0.3, 0.5]);
        let base = expected_cost(&j, var::A, &cost).unwrap();
        let scaled = expected_cost(&j, var::A, &cost.scaled(2.5).unwrap()).unwrap();
        assert!((scaled - 2.5 * base).abs() < 1e-12);
    }

    #[test]
    fn expected_distortion_examples() {
        let h = DistortionTable::hamming(2);
        let copy = JointDistribution::new(vec![bit("X"), bit("Xh")], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(expected_distortion(&copy, &h, "X", "Xh").unwrap(), 0.0);
        let ind = JointDistribution::uniform(vec![bit("X"), bit("Xh")]).unwrap();
        assert_eq!(expected_distortion(&ind, &h, "X", "Xh").unwrap(), 0.5);
        let bsc = JointDistribution::new(vec![bit("X"), bit("Xh")], vec![0.45, 0.05, 0.05, 0.45])
            .unwrap();
        assert!((expected_distortion(&bsc, &h, "X", "Xh").unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn validate_is_idempotent() {
        let m = SwitchingModel::s_channel(0.6).unwrap().to_broadcast().unwrap();
        m.validate().unwrap();
        m.validate().unwrap();
        assert_eq!(m.clone(), m);
    }

    #[test]
    fn dmax_is_the_largest_entry() {
        let d = DistortionTable::new(2, 3, vec![0.0, 2.0, 1.0, 0.5, 0.0, 4.0]).unwrap();
        assert_eq!(d.dmax(), 4.0);
        assert_eq!(d.best_recon(1), 1);
    }
}
