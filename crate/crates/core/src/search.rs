//! Multi-start local search over products of probability simplices.
//!
//! A decision variable is a flat vector of conditional pmfs: a list of blocks,
//! each holding `slices` consecutive simplices of `width` entries. Moves
//! transfer mass between two entries of one simplex, so every iterate stays
//! normalized. Each start runs a penalized warm phase if it begins
//! infeasible, is then pulled into the feasible set by mixing with a known
//! feasible anchor, and finally descends accepting only feasible improvements.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Constraint slack accepted as feasible.
pub(crate) const FEASIBILITY_TOLERANCE: f64 = 1e-12;
const IMPROVEMENT: f64 = 1e-13;
const PENALTY: f64 = 1e3;
const MIN_STEP: f64 = 1e-9;
const EXHAUSTIVE_PAIRS: usize = 240;
/// Largest joint two-simplex neighborhood searched on the lattice.
const JOINT_MOVES: usize = 200_000;
/// Simplex lattices up to this many points are enumerated whole.
const FULL_LATTICE: usize = 64;

/// Settings for the multi-start optimizers.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Number of starting points, including the feasible anchor.
    pub starts: usize,
    /// Upper bound on refinement sweeps per start.
    pub sweeps: usize,
    /// Penalized sweeps applied to a start that begins infeasible.
    pub warm_sweeps: usize,
    pub seed: u64,
    /// Auxiliary alphabet size; `None` uses the cardinality bound.
    pub aux_size: Option<usize>,
    /// Restrict every conditional pmf to multiples of this step.
    pub quantization: Option<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            starts: 64,
            sweeps: 200,
            warm_sweeps: 10,
            seed: 0,
            aux_size: None,
            quantization: None,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidParameter("search needs at least one start".into()));
        }
        if let Some(q) = self.quantization {
            lattice_units(q)?;
        }
        Ok(())
    }
}

/// Number of lattice units per simplex for quantization step `q`.
pub(crate) fn lattice_units(q: f64) -> Result<usize> {
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::InvalidParameter(alloc::format!(
            "quantization step {q} outside (0, 0.5]"
        )));
    }
    let n = libm::round(1.0 / q);
    if (n * q - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(alloc::format!(
            "quantization step {q} does not divide 1"
        )));
    }
    Ok(n as usize)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Block {
    pub slices: usize,
    pub width: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    blocks: Vec<Block>,
}

impl Layout {
    pub fn new(blocks: Vec<Block>) -> Self {
        Layout { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.slices * b.width).sum()
    }

    /// `(offset, width)` of every simplex in order.
    fn simplices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for b in &self.blocks {
            for _ in 0..b.slices {
                out.push((off, b.width));
                off += b.width;
            }
        }
        out
    }
}

/// Evaluation of one candidate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Score {
    pub objective: f64,
    pub cost: f64,
    /// Total constraint excess; zero when every budget is met.
    pub violation: f64,
}

impl Score {
    pub fn feasible(&self) -> bool {
        self.violation <= FEASIBILITY_TOLERANCE
    }

    fn penalized(&self) -> f64 {
        self.objective + PENALTY * self.violation
    }
}

/// Total order used to pick the winner: feasibility, then objective, then
/// cost, then the lexicographic order of the channel entries.
pub(crate) fn compare(a: (&Score, &[f64]), b: (&Score, &[f64])) -> Ordering {
    let (sa, xa) = a;
    let (sb, xb) = b;
    match (sa.feasible(), sb.feasible()) {
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        (false, false) => return sa.violation.total_cmp(&sb.violation),
        (true, true) => {}
    }
    if (sa.objective - sb.objective).abs() > 1e-12 {
        return sa.objective.total_cmp(&sb.objective);
    }
    if (sa.cost - sb.cost).abs() > 1e-12 {
        return sa.cost.total_cmp(&sb.cost);
    }
    for (u, v) in xa.iter().zip(xb) {
        match u.total_cmp(v) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

pub(crate) fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (start as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A random point of the `width`-simplex; on the lattice when `units` is set.
pub(crate) fn random_simplex(rng: &mut ChaCha8Rng, width: usize, units: Option<usize>) -> Vec<f64> {
    let sharpness = [1.0, 2.0, 4.0][rng.gen_range(0..3)];
    let mut w: Vec<f64> = (0..width)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            libm::pow(-libm::log(u), sharpness)
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    match units {
        None => w,
        Some(n) => {
            let mut counts = vec![0usize; width];
            for _ in 0..n {
                let r: f64 = rng.gen();
                let mut acc = 0.0;
                let mut pick = width - 1;
                for (i, p) in w.iter().enumerate() {
                    acc += p;
                    if r < acc {
                        pick = i;
                        break;
                    }
                }
                counts[pick] += 1;
            }
            counts.iter().map(|&c| c as f64 / n as f64).collect()
        }
    }
}

/// Generates non-anchor starting points.
pub(crate) type StartFn<'a> = dyn FnMut(&mut ChaCha8Rng, usize, Option<usize>) -> Vec<f64> + 'a;

pub(crate) struct Minimizer<'a, F: FnMut(&[f64]) -> Score> {
    pub layout: &'a Layout,
    pub config: &'a SearchConfig,
    pub eval: F,
}

#[derive(Clone, Copy, PartialEq)]
enum Phase {
    Warm,
    Strict,
    /// Strict, plus joint two-simplex moves on the lattice.
    Polish,
}

impl<F: FnMut(&[f64]) -> Score> Minimizer<'_, F> {
    /// Runs every start and returns the best point found.
    ///
    /// `anchor` must be feasible. `seeds` are extra deterministic starts;
    /// `starts(rng, index, units)` produces the randomized ones.
    pub fn run(
        &mut self,
        anchor: Vec<f64>,
        seeds: &[Vec<f64>],
        starts: &mut StartFn<'_>,
    ) -> Result<(Vec<f64>, Score)> {
        self.config.check()?;
        debug_assert_eq!(anchor.len(), self.layout.len());
        let units = self.config.quantization.map(lattice_units).transpose()?;
        let anchor_score = (self.eval)(&anchor);
        if !anchor_score.feasible() {
            return Err(Error::Infeasible("no feasible starting channel".into()));
        }
        let mut found: Vec<(Vec<f64>, Score)> = Vec::new();
        let mut candidates: Vec<Vec<f64>> = vec![anchor.clone()];
        candidates.extend(seeds.iter().cloned());
        let random = self.config.starts.saturating_sub(1);
        for (i, start) in candidates
            .into_iter()
            .map(Some)
            .chain((0..random).map(|_| None))
            .enumerate()
        {
            let mut rng = start_rng(self.config.seed, i);
            let x = match start {
                Some(x) => x,
                None => starts(&mut rng, i, units),
            };
            if let Some(r) = self.refine(x, &anchor, units, &mut rng) {
                found.push(r);
            }
        }
        found.sort_by(|a, b| compare((&a.1, &a.0), (&b.1, &b.0)));
        found.dedup_by(|a, b| a.0 == b.0);
        if let Some(n) = units {
            let mut rng = start_rng(self.config.seed, usize::MAX);
            for (x, s) in found.iter_mut() {
                self.descend(x, s, Phase::Polish, self.config.sweeps, Some(n), &mut rng);
            }
            found.sort_by(|a, b| compare((&a.1, &a.0), (&b.1, &b.0)));
        }
        found
            .into_iter()
            .next()
            .ok_or_else(|| Error::Infeasible("search found no feasible point".into()))
    }

    fn refine(
        &mut self,
        mut x: Vec<f64>,
        anchor: &[f64],
        units: Option<usize>,
        rng: &mut ChaCha8Rng,
    ) -> Option<(Vec<f64>, Score)> {
        let mut score = (self.eval)(&x);
        if !score.feasible() {
            self.descend(&mut x, &mut score, Phase::Warm, self.config.warm_sweeps, units, rng);
        }
        if !score.feasible() {
            if units.is_some() {
                return None;
            }
            let (mixed, s) = self.mix_into_feasible(&x, anchor)?;
            x = mixed;
            score = s;
        }
        self.descend(&mut x, &mut score, Phase::Strict, self.config.sweeps, units, rng);
        Some((x, score))
    }

    /// Smallest mixture weight on `anchor` that makes `x` feasible.
    fn mix_into_feasible(&mut self, x: &[f64], anchor: &[f64]) -> Option<(Vec<f64>, Score)> {
        let mix = |lambda: f64| -> Vec<f64> {
            x.iter()
                .zip(anchor)
                .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
                .collect()
        };
        let mut hi = 1.0;
        let mut lo = 0.0;
        let mut best = (anchor.to_vec(), (self.eval)(anchor));
        if !best.1.feasible() {
            return None;
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            let cand = mix(mid);
            let s = (self.eval)(&cand);
            if s.feasible() {
                hi = mid;
                best = (cand, s);
            } else {
                lo = mid;
            }
        }
        Some(best)
    }

    fn accepts(&self, phase: Phase, current: &Score, cand: &Score) -> bool {
        match phase {
            Phase::Warm => cand.penalized() < current.penalized() - IMPROVEMENT,
            Phase::Strict | Phase::Polish => cand.feasible() && cand.objective < current.objective - IMPROVEMENT,
        }
    }

    fn descend(
        &mut self,
        x: &mut [f64],
        score: &mut Score,
        phase: Phase,
        sweeps: usize,
        units: Option<usize>,
        rng: &mut ChaCha8Rng,
    ) {
        let simplices = self.layout.simplices();
        let mut step = match units {
            Some(n) => 1.0 / n as f64,
            None => 0.25,
        };
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut amounts: Vec<f64> = Vec::new();
        for _ in 0..sweeps {
            let mut improved = false;
            for &(off, width) in &simplices {
                pairs.clear();
                if width * (width - 1) <= EXHAUSTIVE_PAIRS {
                    for i in 0..width {
                        for j in 0..width {
                            if i != j {
                                pairs.push((i, j));
                            }
                        }
                    }
                } else {
                    for _ in 0..width {
                        let i = rng.gen_range(0..width);
                        let j = (i + rng.gen_range(1..width)) % width;
                        pairs.push((i, j));
                    }
                }
                for &(i, j) in &pairs {
                    let available = x[off + i];
                    if available <= 0.0 {
                        continue;
                    }
                    amounts.clear();
                    match units {
                        Some(n) => {
                            let k = libm::round(available * n as f64) as usize;
                            amounts.extend((1..=k).map(|c| c as f64 / n as f64));
                        }
                        None => {
                            if available > step {
                                amounts.push(step);
                            }
                            amounts.push(available);
                        }
                    }
                    for &amount in &amounts {
                        let (old_i, old_j) = (x[off + i], x[off + j]);
                        let (new_i, new_j) = match units {
                            Some(n) => {
                                let n = n as f64;
                                (
                                    libm::round((old_i - amount) * n) / n,
                                    libm::round((old_j + amount) * n) / n,
                                )
                            }
                            None if amount >= old_i => (0.0, old_j + old_i),
                            None => (old_i - amount, old_j + amount),
                        };
                        x[off + i] = new_i;
                        x[off + j] = new_j;
                        let cand = (self.eval)(x);
                        if self.accepts(phase, score, &cand) {
                            *score = cand;
                            improved = true;
                            break;
                        }
                        x[off + i] = old_i;
                        x[off + j] = old_j;
                    }
                }
            }
            if phase == Phase::Warm && score.feasible() {
                return;
            }
            if !improved {
                if let Some(n) = units {
                    if phase == Phase::Polish && self.joint_move(x, score, &simplices, n) {
                        continue;
                    }
                    return;
                }
                step *= 0.5;
                if step < MIN_STEP {
                    return;
                }
            }
        }
    }

    /// Replacement values for one simplex: every lattice point when the
    /// lattice is small, else the single transfers from `x`.
    fn lattice_neighbors(x: &[f64], off: usize, width: usize, n: usize) -> Vec<Vec<f64>> {
        if crate::oracle::grid_size(width, n, 1) <= FULL_LATTICE as f64 {
            return crate::oracle::simplex_grid(width, n);
        }
        let nf = n as f64;
        let cur = &x[off..off + width];
        let mut out = Vec::new();
        for i in 0..width {
            let k = libm::round(cur[i] * nf) as usize;
            for j in (0..width).filter(|&j| j != i) {
                for c in 1..=k {
                    let mut v = cur.to_vec();
                    v[i] = libm::round(cur[i] * nf - c as f64) / nf;
                    v[j] = libm::round(cur[j] * nf + c as f64) / nf;
                    out.push(v);
                }
            }
        }
        out
    }

    /// First improving simultaneous change of two simplices.
    fn joint_move(&mut self, x: &mut [f64], score: &mut Score, simplices: &[(usize, usize)], n: usize) -> bool {
        let moves: Vec<_> = simplices
            .iter()
            .map(|&(off, width)| Self::lattice_neighbors(x, off, width, n))
            .collect();
        let mut total = 0usize;
        for a in 0..moves.len() {
            for b in a + 1..moves.len() {
                total = total.saturating_add(moves[a].len() * moves[b].len());
            }
        }
        if total > JOINT_MOVES {
            return false;
        }
        for a in 0..simplices.len() {
            for b in a + 1..simplices.len() {
                let ((oa, wa), (ob, wb)) = (simplices[a], simplices[b]);
                let saved_a = x[oa..oa + wa].to_vec();
                let saved_b = x[ob..ob + wb].to_vec();
                for va in &moves[a] {
                    x[oa..oa + wa].copy_from_slice(va);
                    for vb in &moves[b] {
                        x[ob..ob + wb].copy_from_slice(vb);
                        let cand = (self.eval)(x);
                        if self.accepts(Phase::Strict, score, &cand) {
                            *score = cand;
                            return true;
                        }
                    }
                    x[ob..ob + wb].copy_from_slice(&saved_b);
                }
                x[oa..oa + wa].copy_from_slice(&saved_a);
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_points_stay_on_the_lattice() {
        let mut rng = start_rng(3, 1);
        for _ in 0..50 {
            let p = random_simplex(&mut rng, 5, Some(4));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert!(p.iter().all(|v| (v * 4.0 - libm::round(v * 4.0)).abs() < 1e-12));
        }
        assert!(lattice_units(0.3).is_err());
        assert!(lattice_units(0.6).is_err());
        assert_eq!(lattice_units(0.25).unwrap(), 4);
    }

    #[test]
    fn minimizes_a_linear_objective_over_a_simplex() {
        // min <c, p> over the 4-simplex with p[3] <= 0.2 as the only budget.
        let layout = Layout::new(vec![Block { slices: 1, width: 4 }]);
        let config = SearchConfig {
            starts: 4,
            sweeps: 100,
            ..SearchConfig::default()
        };
        let c = [0.5, 0.9, 0.3, 0.0];
        let mut m = Minimizer {
            layout: &layout,
            config: &config,
            eval: |p: &[f64]| Score {
                objective: p.iter().zip(&c).map(|(a, b)| a * b).sum(),
                cost: p[3],
                violation: (p[3] - 0.2).max(0.0),
            },
        };
        let (p, s) = m
            .run(vec![1.0, 0.0, 0.0, 0.0], &[], &mut |rng, _, u| random_simplex(rng, 4, u))
            .unwrap();
        assert!(s.feasible());
        assert!((s.objective - 0.8 * 0.3).abs() < 1e-8, "{p:?} {s:?}");
    }

    #[test]
    fn lattice_search_escapes_single_move_traps() {
        // Moving either simplex alone is penalized; only a joint move helps.
        let layout = Layout::new(vec![Block { slices: 2, width: 2 }]);
        let config = SearchConfig {
            starts: 1,
            quantization: Some(0.5),
            ..SearchConfig::default()
        };
        let mut m = Minimizer {
            layout: &layout,
            config: &config,
            eval: |p: &[f64]| Score {
                objective: if p[1] == p[3] { 1.0 - p[1] } else { 2.0 },
                cost: 0.0,
                violation: 0.0,
            },
        };
        let (p, s) = m
            .run(vec![1.0, 0.0, 1.0, 0.0], &[], &mut |rng, _, u| random_simplex(rng, 4, u))
            .unwrap();
        assert_eq!(s.objective, 0.0);
        assert_eq!(p, vec![0.0, 1.0, 0.0, 1.0]);
    }
}
