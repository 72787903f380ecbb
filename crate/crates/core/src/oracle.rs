//! Brute-force reference implementations for cross-validation.
//!
//! Nothing here calls the evaluators of [`cascade`](crate::cascade) or
//! [`broadcast`](crate::broadcast): information measures are computed by
//! direct summation of `p log (p p / (p p))` over flat tables, and the
//! optimizers are replaced by exhaustive enumeration of conditional pmfs
//! whose entries are multiples of a fixed step.

use alloc::vec;
use alloc::vec::Vec;

use crate::broadcast::{BroadcastRegionPoint, RateWeights};
use crate::cascade::RegionPoint;
use crate::model::{ActionCost, Budget, BroadcastModel, CascadeModel, CostTable};
use crate::prob::JointDistribution;
use crate::{Error, Result};

const TOL: f64 = 1e-12;

/// Quantization and size limits for the brute-force searches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    /// Every conditional probability is a multiple of `step`.
    pub step: f64,
    /// Size of the auxiliary alphabet `U` in the cascade search.
    pub aux_size: usize,
    /// Largest source or action alphabet accepted.
    pub max_alphabet: usize,
    /// Enumeration size above which the search refuses to run.
    pub max_points: f64,
}

impl GridSpec {
    pub fn new(step: f64, aux_size: usize) -> Result<Self> {
        let g = GridSpec {
            step,
            aux_size,
            max_alphabet: 3,
            max_points: 5e6,
        };
        g.units()?;
        if aux_size == 0 {
            return Err(Error::InvalidParameter("auxiliary alphabet must be nonempty".into()));
        }
        Ok(g)
    }

    fn units(&self) -> Result<usize> {
        if !(self.step > 0.0 && self.step <= 0.5) {
            return Err(Error::InvalidParameter(alloc::format!("grid step {} outside (0, 0.5]", self.step)));
        }
        let n = libm::round(1.0 / self.step);
        if libm::fabs(n * self.step - 1.0) > 1e-9 {
            return Err(Error::InvalidParameter(alloc::format!("1/step must be an integer, got {}", self.step)));
        }
        Ok(n as usize)
    }
}

/// All pmfs on `width` symbols with entries in `{0, 1/units, ..., 1}`.
pub fn simplex_grid(width: usize, units: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(left - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut counts = Vec::new();
    rec(units, width, &mut Vec::new(), &mut counts);
    counts
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / units as f64).collect())
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn grid_size(width: usize, units: usize, slices: usize) -> f64 {
    libm::pow(binomial(units + width - 1, width - 1), slices as f64)
}

/// `I(A; B | G)` on a row-major table with axis sizes `sizes`, by direct
/// summation over the support of `p(a, b, g)`.
fn cmi_flat(mass: &[f64], sizes: &[usize], a: &[usize], b: &[usize], g: &[usize]) -> f64 {
    let groups: [Vec<usize>; 4] = [
        a.iter().chain(b).chain(g).copied().collect(),
        a.iter().chain(g).copied().collect(),
        b.iter().chain(g).copied().collect(),
        g.to_vec(),
    ];
    // contribution of each axis to each group's flat index
    let mut contrib = [vec![0usize; sizes.len()], vec![0; sizes.len()], vec![0; sizes.len()], vec![0; sizes.len()]];
    let mut lens = [1usize; 4];
    for (k, grp) in groups.iter().enumerate() {
        for &ax in grp.iter().rev() {
            contrib[k][ax] = lens[k];
            lens[k] *= sizes[ax];
        }
    }
    let mut tables = [vec![0.0; lens[0]], vec![0.0; lens[1]], vec![0.0; lens[2]], vec![0.0; lens[3]]];
    let mut digits = vec![0usize; sizes.len()];
    let mut idx = [0usize; 4];
    for &p in mass {
        for k in 0..4 {
            tables[k][idx[k]] += p;
        }
        for ax in (0..sizes.len()).rev() {
            digits[ax] += 1;
            for k in 0..4 {
                idx[k] += contrib[k][ax];
            }
            if digits[ax] < sizes[ax] {
                break;
            }
            for k in 0..4 {
                idx[k] -= contrib[k][ax] * sizes[ax];
            }
            digits[ax] = 0;
        }
    }
    // walk the (a, b, g) table
    let abg = &groups[0];
    let mut d = vec![0usize; abg.len()];
    let mut total = 0.0;
    for &p in &tables[0] {
        if p > 0.0 {
            let at = |k: usize| -> f64 {
                let i: usize = abg.iter().zip(&d).map(|(&ax, &v)| v * contrib[k][ax]).sum();
                tables[k][i]
            };
            let (pag, pbg, pg) = (at(1), at(2), at(3));
            total += p * libm::log2(p * pg / (pag * pbg));
        }
        for j in (0..abg.len()).rev() {
            d[j] += 1;
            if d[j] < sizes[abg[j]] {
                break;
            }
            d[j] = 0;
        }
    }
    total.max(0.0)
}

/// `I(a; b | given)` by the defining double sum, without any entropy
/// decomposition.
pub fn mi_oracle(d: &JointDistribution, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySubset);
    }
    let axes = |names: &[&str]| -> Result<Vec<usize>> { names.iter().map(|n| d.axis(n)).collect() };
    let (ia, ib, ig) = (axes(a)?, axes(b)?, axes(given)?);
    let all: Vec<usize> = ia.iter().chain(&ib).chain(&ig).copied().collect();
    for (i, x) in all.iter().enumerate() {
        if all[..i].contains(x) {
            return Err(Error::OverlappingGroups(d.variables()[*x].name().into()));
        }
    }
    Ok(cmi_flat(d.mass(), &d.sizes(), &ia, &ib, &ig))
}

fn cost_of(cost: &CostTable, pa: &[f64]) -> f64 {
    let mut total = 0.0;
    for (a, &p) in pa.iter().enumerate() {
        if p > 0.0 {
            match cost.get(a) {
                ActionCost::Finite(c) => total += p * c,
                ActionCost::Forbidden => return f64::INFINITY,
            }
        }
    }
    total
}

fn check_sizes(grid: &GridSpec, sizes: &[usize]) -> Result<()> {
    if let Some(&s) = sizes.iter().find(|&&s| s > grid.max_alphabet) {
        return Err(Error::InvalidParameter(alloc::format!(
            "alphabet of size {s} exceeds the oracle limit {}",
            grid.max_alphabet
        )));
    }
    Ok(())
}

fn check_budget(estimate: f64, grid: &GridSpec) -> Result<()> {
    if estimate > grid.max_points {
        return Err(Error::BudgetExceeded {
            estimate,
            limit: grid.max_points,
        });
    }
    Ok(())
}

/// Enumerates the cartesian product of `choices` per slice.
fn for_each_product(slices: usize, choices: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let mut pick = vec![0usize; slices];
    loop {
        f(&pick)?;
        let mut j = slices;
        loop {
            if j == 0 {
                return Ok(());
            }
            j -= 1;
            pick[j] += 1;
            if pick[j] < choices {
                break;
            }
            pick[j] = 0;
        }
    }
}

/// Best point found by a brute-force search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult<P> {
    pub objective: f64,
    pub point: P,
    pub evaluated: f64,
}

/// Exhaustive minimum of `r1 + eta r2` for the cascade over every
/// quantized `p(xhat1, a, u | x, y)`, each paired with its optimal decoder.
pub fn brute_force_cascade(
    m: &CascadeModel,
    budget: &Budget,
    eta: f64,
    grid: &GridSpec,
) -> Result<OracleResult<RegionPoint>> {
    let units = grid.units()?;
    let (nx, ny, nz, na, n1, n2, nu) = (m.nx(), m.ny(), m.nz(), m.na(), m.nxhat1(), m.nxhat2(), grid.aux_size);
    check_sizes(grid, &[nx, ny, nz, na, n1, n2, nu])?;
    let width = n1 * na * nu;
    let slices = nx * ny;
    let estimate = grid_size(width, units, slices);
    check_budget(estimate, grid)?;
    let options = simplex_grid(width, units);
    let pxy = m.source().mass();
    let vm = m.side_info().mass();
    let sizes = [nx, ny, n1, na, nu, nz];
    let (ax_x, ax_y, ax_h, ax_a, ax_u, ax_z) = (0, 1, 2, 3, 4, 5);
    let mut joint = vec![0.0; nx * ny * width * nz];
    let mut best: Option<(f64, RegionPoint)> = None;
    let mut evaluated = 0.0;
    for_each_product(slices, options.len(), |pick| {
        evaluated += 1.0;
        let mut pa = vec![0.0; na];
        let mut d1 = 0.0;
        for x in 0..nx {
            for y in 0..ny {
                let row = &options[pick[x * ny + y]];
                let pxy_ = pxy[x * ny + y];
                for h in 0..n1 {
                    for a in 0..na {
                        for u in 0..nu {
                            let t = pxy_ * row[(h * na + a) * nu + u];
                            pa[a] += t;
                            d1 += t * m.d1().get(x, h);
                            for z in 0..nz {
                                let i = ((((x * ny + y) * n1 + h) * na + a) * nu + u) * nz + z;
                                joint[i] = t * vm[(a * ny + y) * nz + z];
                            }
                        }
                    }
                }
            }
        }
        let cost = cost_of(m.cost(), &pa);
        if cost > budget.gamma + TOL || d1 > budget.d1 + TOL {
            return Ok(());
        }
        // p(x, u, z) for the decoder
        let mut pxuz = vec![0.0; nx * nu * nz];
        for (i, &p) in joint.iter().enumerate() {
            let z = i % nz;
            let u = (i / nz) % nu;
            let x = i / (nz * nu * na * n1 * ny);
            pxuz[(x * nu + u) * nz + z] += p;
        }
        let mut d2 = 0.0;
        for u in 0..nu {
            for z in 0..nz {
                let mut loss = f64::INFINITY;
                for h in 0..n2 {
                    let l: f64 = (0..nx).map(|x| pxuz[(x * nu + u) * nz + z] * m.d2().get(x, h)).sum();
                    if l < loss {
                        loss = l;
                    }
                }
                d2 += loss;
            }
        }
        if d2 > budget.d2 + TOL {
            return Ok(());
        }
        let r1 = cmi_flat(&joint, &sizes, &[ax_x], &[ax_h, ax_a, ax_u], &[ax_y]);
        let r2 = cmi_flat(&joint, &sizes, &[ax_x, ax_y], &[ax_a], &[])
            + cmi_flat(&joint, &sizes, &[ax_x, ax_y], &[ax_u], &[ax_a, ax_z]);
        let obj = r1 + eta * r2;
        if best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((
                obj,
                RegionPoint {
                    r1_min: r1,
                    r2_min: r2,
                    d1,
                    d2,
                    cost,
                },
            ));
        }
        Ok(())
    })?;
    let (objective, point) = best.ok_or_else(|| Error::Infeasible("no grid point meets the budget".into()))?;
    Ok(OracleResult {
        objective,
        point,
        evaluated,
    })
}

/// `min w1 R1 + w2 R2 + wb Rb` over the region with the given bounds, by
/// scanning the breakpoints of the objective as a function of `Rb`.
fn weighted_min(p: &BroadcastRegionPoint, w: &RateWeights) -> f64 {
    let (a1, a2) = (p.r1_plus_rb_min, p.r2_plus_rb_min);
    let s = p.r_sum_min.unwrap_or(f64::NEG_INFINITY);
    let cheaper = w.r1.min(w.r2);
    let at = |rb: f64| {
        let l1 = (a1 - rb).max(0.0);
        let l2 = (a2 - rb).max(0.0);
        w.rb * rb + w.r1 * l1 + w.r2 * l2 + cheaper * (s - rb - l1 - l2).max(0.0)
    };
    [p.rb_min, a1, a2, s, a1 + a2 - s]
        .into_iter()
        .filter(|r| r.is_finite() && *r >= p.rb_min)
        .map(at)
        .fold(f64::INFINITY, f64::min)
}

/// Exhaustive minimum of `w1 R1 + w2 R2 + wb Rb` over the lossy region with
/// common reconstruction, enumerating quantized `p(a | x)` and
/// `p(xhat1, xhat2 | x, a)`.
pub fn brute_force_cr(
    m: &BroadcastModel,
    budget: &Budget,
    weights: &RateWeights,
    grid: &GridSpec,
) -> Result<OracleResult<BroadcastRegionPoint>> {
    if !m.is_degraded() {
        return Err(Error::NotDegraded {
            residual: m.degradedness_residual(),
        });
    }
    let units = grid.units()?;
    let (nx, ny, nz, na, n1, n2) = (m.nx(), m.ny(), m.nz(), m.na(), m.nxhat1(), m.nxhat2());
    check_sizes(grid, &[nx, ny, nz, na, n1, n2])?;
    let estimate = grid_size(na, units, nx) * grid_size(n1 * n2, units, nx * na);
    check_budget(estimate, grid)?;
    let actions = simplex_grid(na, units);
    let recons = simplex_grid(n1 * n2, units);
    let px = m.source().mass();
    let vm = m.side_info().mass();
    // (X, A, Y, Z, Xh1, Xh2)
    let sizes = [nx, na, ny, nz, n1, n2];
    let (x_, a_, y_, z_, h1, h2) = (0, 1, 2, 3, 4, 5);
    let mut joint = vec![0.0; nx * na * ny * nz * n1 * n2];
    let mut best: Option<(f64, BroadcastRegionPoint)> = None;
    let mut evaluated = 0.0;
    for_each_product(nx, actions.len(), |apick| {
        let mut pa = vec![0.0; na];
        for x in 0..nx {
            for a in 0..na {
                pa[a] += px[x] * actions[apick[x]][a];
            }
        }
        let cost = cost_of(m.cost(), &pa);
        if cost > budget.gamma + TOL {
            evaluated += libm::pow(recons.len() as f64, (nx * na) as f64);
            return Ok(());
        }
        for_each_product(nx * na, recons.len(), |rpick| {
            evaluated += 1.0;
            let (mut d1, mut d2) = (0.0, 0.0);
            for x in 0..nx {
                for a in 0..na {
                    let pxa = px[x] * actions[apick[x]][a];
                    let rec = &recons[rpick[x * na + a]];
                    for (k, &r) in rec.iter().enumerate() {
                        d1 += pxa * r * m.d1().get(x, k / n2);
                        d2 += pxa * r * m.d2().get(x, k % n2);
                    }
                    for y in 0..ny {
                        for z in 0..nz {
                            let pyz = pxa * vm[((a * nx + x) * ny + y) * nz + z];
                            let base = (((x * na + a) * ny + y) * nz + z) * n1 * n2;
                            for (k, &r) in rec.iter().enumerate() {
                                joint[base + k] = pyz * r;
                            }
                        }
                    }
                }
            }
            if d1 > budget.d1 + TOL || d2 > budget.d2 + TOL {
                return Ok(());
            }
            let ia = cmi_flat(&joint, &sizes, &[x_], &[a_], &[]);
            let to2 = cmi_flat(&joint, &sizes, &[x_], &[h1, h2], &[a_, y_]);
            let to3 = cmi_flat(&joint, &sizes, &[x_], &[h2], &[a_, z_]);
            let refine = cmi_flat(&joint, &sizes, &[x_], &[h1], &[a_, y_, h2]);
            let point = BroadcastRegionPoint {
                rb_min: ia,
                r1_plus_rb_min: ia + to2,
                r2_plus_rb_min: ia + to3,
                r_sum_min: Some(ia + to3 + refine),
                cost,
                d1: Some(d1),
                d2: Some(d2),
            };
            let obj = weighted_min(&point, weights);
            if best.as_ref().map_or(true, |(b, _)| obj < *b) {
                best = Some((obj, point));
            }
            Ok(())
        })
    })?;
    let (objective, point) = best.ok_or_else(|| Error::Infeasible("no grid point meets the budget".into()))?;
    Ok(OracleResult {
        objective,
        point,
        evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Alphabet;

    #[test]
    fn simplex_grid_counts() {
        assert_eq!(simplex_grid(3, 2).len(), 6);
        assert_eq!(simplex_grid(8, 2).len(), 36);
        assert!(simplex_grid(4, 3).iter().all(|p| (p.iter().sum::<f64>() - 1.0).abs() < 1e-12));
        assert_eq!(grid_size(8, 2, 4), 36f64.powi(4));
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(0.6, 2).is_err());
        assert!(GridSpec::new(0.3, 2).is_err());
        assert!(GridSpec::new(0.25, 2).is_ok());
        assert!(GridSpec::new(0.5, 0).is_err());
    }

    #[test]
    fn mi_oracle_examples() {
        let v = |n: &str| Alphabet::new(n, 2).unwrap();
        let indep = JointDistribution::uniform(vec![v("X"), v("Y")]).unwrap();
        assert!(mi_oracle(&indep, &["X"], &["Y"], &[]).unwrap().abs() < 1e-12);
        let copy = JointDistribution::new(vec![v("X"), v("Y")], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mi_oracle(&copy, &["X"], &["Y"], &[]).unwrap() - 1.0).abs() < 1e-12);
        let d = JointDistribution::new(vec![v("X"), v("Y")], vec![0.2, 0.3, 0.3, 0.2]).unwrap();
        assert!((mi_oracle(&d, &["X"], &["Y"], &[]).unwrap() - 0.0290494).abs() < 1e-6);
        assert!(matches!(mi_oracle(&d, &["X"], &["X"], &[]), Err(Error::OverlappingGroups(_))));
    }

    #[test]
    fn refuses_large_enumerations() {
        let m = CascadeModel::from_tables(
            vec![0.25; 4],
            (2, 2, 2),
            vec![0.5; 8],
            &[0.0, 1.0],
            crate::model::DistortionTable::hamming(2),
            crate::model::DistortionTable::hamming(2),
        )
        .unwrap();
        let grid = GridSpec::new(0.1, 2).unwrap();
        assert!(matches!(
            brute_force_cascade(&m, &Budget::unconstrained(), 1.0, &grid),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn breakpoint_scan_matches_hand_values() {
        let p = BroadcastRegionPoint {
            rb_min: 0.2,
            r1_plus_rb_min: 1.0,
            r2_plus_rb_min: 0.7,
            r_sum_min: Some(1.5),
            cost: 0.0,
            d1: None,
            d2: None,
        };
        let w = |a, b, c| RateWeights::new(a, b, c).unwrap();
        assert!(weighted_min(&p, &w(1.0, 0.0, 0.0)).abs() < 1e-12);
        assert!((weighted_min(&p, &w(1.0, 1.0, 1.0)) - 1.5).abs() < 1e-12);
        assert!((weighted_min(&p, &w(0.0, 0.0, 1.0)) - 0.2).abs() < 1e-12);
    }
}
