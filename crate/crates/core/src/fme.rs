//! Fourier-Motzkin elimination over linear inequality systems whose
//! right-hand sides are linear in symbolic nonnegative parameters.
//!
//! Arithmetic is exact ([`BigRational`]). Parameters stand for information
//! quantities but are treated as free nonnegative reals, so identities such
//! as the chain rule are never assumed. Redundancy and equivalence checks
//! instantiate the parameters with random nonnegative rationals and decide
//! each instance exactly.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Largest number of inequalities any elimination step may produce.
pub const ROW_CAP: usize = 10_000;

/// `sum lhs[i] * var[i] >= sum rhs[j] * param[j] + constant`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inequality {
    pub lhs: Vec<BigRational>,
    pub rhs: Vec<BigRational>,
    pub constant: BigRational,
}

impl Inequality {
    fn zero(nv: usize, np: usize) -> Self {
        Inequality {
            lhs: vec![BigRational::zero(); nv],
            rhs: vec![BigRational::zero(); np],
            constant: BigRational::zero(),
        }
    }

    fn scaled_sum(&self, a: &BigRational, other: &Self, b: &BigRational) -> Self {
        let mix = |x: &[BigRational], y: &[BigRational]| -> Vec<BigRational> {
            x.iter().zip(y).map(|(u, v)| u * a + v * b).collect()
        };
        Inequality {
            lhs: mix(&self.lhs, &other.lhs),
            rhs: mix(&self.rhs, &other.rhs),
            constant: &self.constant * a + &other.constant * b,
        }
    }

    /// Positive rescaling so the first nonzero coefficient has magnitude one.
    fn normalized(mut self) -> Self {
        let lead = self
            .lhs
            .iter()
            .chain(self.rhs.iter())
            .chain(core::iter::once(&self.constant))
            .find(|c| !c.is_zero())
            .map(|c| c.abs());
        if let Some(s) = lead {
            for c in self.lhs.iter_mut().chain(self.rhs.iter_mut()) {
                *c = &*c / &s;
            }
            self.constant = &self.constant / &s;
        }
        self
    }

    /// Holds for every nonnegative parameter value and every point of the
    /// variable domain.
    fn is_tautology(&self, nonnegative: &[bool]) -> bool {
        self.lhs
            .iter()
            .zip(nonnegative)
            .all(|(c, &nn)| c.is_zero() || (nn && c.is_positive()))
            && !self.constant.is_positive()
            && self.rhs.iter().all(|c| !c.is_positive())
    }

    fn bound(&self, params: &[BigRational]) -> BigRational {
        self.rhs
            .iter()
            .zip(params)
            .fold(self.constant.clone(), |acc, (c, p)| acc + c * p)
    }
}

/// Linear inequalities over named variables with a parametric right side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    variables: Vec<String>,
    parameters: Vec<String>,
    nonnegative: Vec<bool>,
    rows: Vec<Inequality>,
}

fn check_names(names: &[&str]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::DuplicateVariable((*n).to_string()));
        }
    }
    Ok(())
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl InequalitySystem {
    /// An empty system; every variable starts out nonnegative.
    pub fn new(variables: &[&str], parameters: &[&str]) -> Result<Self> {
        let all: Vec<&str> = variables.iter().chain(parameters).copied().collect();
        check_names(&all)?;
        Ok(InequalitySystem {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            parameters: parameters.iter().map(|s| s.to_string()).collect(),
            nonnegative: vec![true; variables.len()],
            rows: Vec::new(),
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn is_nonnegative(&self, var: &str) -> Result<bool> {
        Ok(self.nonnegative[self.var_index(var)?])
    }

    /// Lets `var` take negative values.
    pub fn set_signed(&mut self, var: &str) -> Result<()> {
        let i = self.var_index(var)?;
        self.nonnegative[i] = false;
        Ok(())
    }

    fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn param_index(&self, name: &str) -> Result<usize> {
        self.parameters
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Adds `sum lhs >= sum rhs + constant` with rational coefficients.
    pub fn add_terms(
        &mut self,
        lhs: &[(BigRational, &str)],
        rhs: &[(BigRational, &str)],
        constant: BigRational,
    ) -> Result<()> {
        let mut row = Inequality::zero(self.variables.len(), self.parameters.len());
        for (c, name) in lhs {
            let i = self.var_index(name)?;
            row.lhs[i] += c;
        }
        for (c, name) in rhs {
            let i = self.param_index(name)?;
            row.rhs[i] += c;
        }
        row.constant = constant;
        self.rows.push(row);
        Ok(())
    }

    /// Integer-coefficient form of [`InequalitySystem::add_terms`].
    pub fn add(&mut self, lhs: &[(i64, &str)], rhs: &[(i64, &str)], constant: i64) -> Result<()> {
        let conv = |t: &[(i64, &str)]| -> Vec<(BigRational, String)> {
            t.iter().map(|(c, n)| (rational(*c), n.to_string())).collect()
        };
        let (l, r) = (conv(lhs), conv(rhs));
        let l: Vec<(BigRational, &str)> = l.iter().map(|(c, n)| (c.clone(), n.as_str())).collect();
        let r: Vec<(BigRational, &str)> = r.iter().map(|(c, n)| (c.clone(), n.as_str())).collect();
        self.add_terms(&l, &r, rational(constant))
    }

    /// The same polyhedron over `variables` (a permutation of the current
    /// ones) and `parameters` (a superset of the current ones).
    pub fn aligned(&self, variables: &[String], parameters: &[String]) -> Result<Self> {
        let mut names: Vec<&String> = variables.iter().collect();
        names.sort();
        let mut own: Vec<&String> = self.variables.iter().collect();
        own.sort();
        if names != own {
            return Err(Error::Usage(format!(
                "variable sets differ: {:?} vs {:?}",
                self.variables, variables
            )));
        }
        let vmap: Vec<usize> = variables
            .iter()
            .map(|v| self.var_index(v))
            .collect::<Result<_>>()?;
        let pmap: Vec<Option<usize>> = parameters
            .iter()
            .map(|p| self.parameters.iter().position(|q| q == p))
            .collect();
        for p in &self.parameters {
            if !parameters.contains(p) {
                return Err(Error::UnknownVariable(p.clone()));
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| Inequality {
                lhs: vmap.iter().map(|&i| r.lhs[i].clone()).collect(),
                rhs: pmap
                    .iter()
                    .map(|i| i.map_or_else(BigRational::zero, |i| r.rhs[i].clone()))
                    .collect(),
                constant: r.constant.clone(),
            })
            .collect();
        Ok(InequalitySystem {
            variables: variables.to_vec(),
            parameters: parameters.to_vec(),
            nonnegative: vmap.iter().map(|&i| self.nonnegative[i]).collect(),
            rows,
        })
    }

    fn with_rows(&self, rows: Vec<Inequality>) -> Self {
        InequalitySystem {
            variables: self.variables.clone(),
            parameters: self.parameters.clone(),
            nonnegative: self.nonnegative.clone(),
            rows,
        }
    }

    /// Numeric rows at one parameter instance, nonnegativity included.
    fn instantiate(&self, params: &[BigRational]) -> Vec<NumRow> {
        let n = self.variables.len();
        let mut out: Vec<NumRow> = self
            .rows
            .iter()
            .map(|r| NumRow {
                a: r.lhs.clone(),
                b: r.bound(params),
                strict: false,
            })
            .collect();
        for (i, &nn) in self.nonnegative.iter().enumerate() {
            if nn {
                let mut a = vec![BigRational::zero(); n];
                a[i] = BigRational::one();
                out.push(NumRow {
                    a,
                    b: BigRational::zero(),
                    strict: false,
                });
            }
        }
        out
    }

    pub fn format_row(&self, row: &Inequality) -> String {
        let lhs = format_terms(row.lhs.iter().zip(&self.variables), None);
        let rhs = format_terms(row.rhs.iter().zip(&self.parameters), Some(&row.constant));
        format!("{lhs} >= {rhs}")
    }
}

fn format_terms<'a>(
    terms: impl Iterator<Item = (&'a BigRational, &'a String)>,
    constant: Option<&BigRational>,
) -> String {
    let mut out = String::new();
    let mut push = |c: &BigRational, name: Option<&str>| {
        if c.is_zero() {
            return;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let m = c.abs();
        match name {
            Some(n) if m.is_one() => out.push_str(n),
            Some(n) => out.push_str(&format!("{m}*{n}")),
            None => out.push_str(&format!("{m}")),
        }
    };
    for (c, n) in terms {
        push(c, Some(n));
    }
    if let Some(c) = constant {
        push(c, None);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for InequalitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{}", self.format_row(r))?;
        }
        Ok(())
    }
}

fn dedup(rows: Vec<Inequality>, nonnegative: &[bool]) -> Vec<Inequality> {
    let mut seen = BTreeSet::new();
    rows.into_iter()
        .map(Inequality::normalized)
        .filter(|r| !r.is_tautology(nonnegative))
        .filter(|r| seen.insert(r.clone()))
        .collect()
}

/// Projects out `drop`, one variable at a time in the given order. A
/// nonnegative variable contributes its bound `v >= 0` before it is removed.
pub fn fme_eliminate(sys: &InequalitySystem, drop: &[&str]) -> Result<InequalitySystem> {
    check_names(drop)?;
    let mut cur = sys.clone();
    for name in drop {
        let k = cur.var_index(name)?;
        let mut rows = cur.rows.clone();
        if cur.nonnegative[k] {
            let mut r = Inequality::zero(cur.variables.len(), cur.parameters.len());
            r.lhs[k] = BigRational::one();
            rows.push(r);
        }
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.lhs[k].is_positive() {
                pos.push(r);
            } else if r.lhs[k].is_negative() {
                neg.push(r);
            } else {
                next.push(r);
            }
        }
        if next.len() + pos.len() * neg.len() > ROW_CAP {
            return Err(Error::RowCapExceeded(ROW_CAP));
        }
        for p in &pos {
            for n in &neg {
                let a = p.lhs[k].recip();
                let b = -n.lhs[k].recip();
                next.push(p.scaled_sum(&a, n, &b));
            }
        }
        for r in &mut next {
            r.lhs.remove(k);
        }
        cur.variables.remove(k);
        cur.nonnegative.remove(k);
        cur.rows = dedup(next, &cur.nonnegative);
    }
    cur.rows = dedup(cur.rows, &cur.nonnegative);
    Ok(cur)
}

#[derive(Clone, Debug)]
struct NumRow {
    a: Vec<BigRational>,
    b: BigRational,
    strict: bool,
}

/// Exact feasibility of `a.x >= b` / `a.x > b` by elimination of every
/// variable.
fn feasible(mut rows: Vec<NumRow>, nvars: usize) -> Result<bool> {
    for k in 0..nvars {
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[k].is_positive() {
                pos.push(r);
            } else if r.a[k].is_negative() {
                neg.push(r);
            } else {
                next.push(r);
            }
        }
        if next.len() + pos.len() * neg.len() > ROW_CAP {
            return Err(Error::RowCapExceeded(ROW_CAP));
        }
        for p in &pos {
            for n in &neg {
                let s = p.a[k].recip();
                let t = -n.a[k].recip();
                next.push(NumRow {
                    a: p.a.iter().zip(&n.a).map(|(u, v)| u * &s + v * &t).collect(),
                    b: &p.b * &s + &n.b * &t,
                    strict: p.strict || n.strict,
                });
            }
        }
        let mut kept = Vec::with_capacity(next.len());
        let mut seen = BTreeSet::new();
        for r in next {
            if r.a.iter().all(Zero::is_zero) {
                let violated = if r.strict { !r.b.is_negative() } else { r.b.is_positive() };
                if violated {
                    return Ok(false);
                }
                continue;
            }
            let lead = r.a.iter().find(|c| !c.is_zero()).unwrap().abs();
            let a: Vec<BigRational> = r.a.iter().map(|c| c / &lead).collect();
            let b = &r.b / &lead;
            if seen.insert((a.clone(), b.clone(), r.strict)) {
                kept.push(NumRow { a, b, strict: r.strict });
            }
        }
        rows = kept;
    }
    Ok(rows.iter().all(|r| if r.strict { r.b.is_negative() } else { !r.b.is_positive() }))
}

/// Whether `rows` (over `nvars` variables) forces `target` at this instance.
fn implies(rows: &[NumRow], target: &NumRow, nvars: usize) -> Result<bool> {
    let mut sys = rows.to_vec();
    sys.push(NumRow {
        a: target.a.iter().map(|c| -c).collect(),
        b: -target.b.clone(),
        strict: true,
    });
    Ok(!feasible(sys, nvars)?)
}

/// Source of nonnegative parameter instances.
pub trait ParamSampler {
    fn sample(&mut self, count: usize) -> Vec<BigRational>;
}

/// Random nonnegative rationals `k / d` with small denominators; about one
/// draw in eight is exactly zero.
#[derive(Clone, Debug)]
pub struct RandomRationalSampler {
    rng: ChaCha8Rng,
}

impl RandomRationalSampler {
    pub fn new(seed: u64) -> Self {
        RandomRationalSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl ParamSampler for RandomRationalSampler {
    fn sample(&mut self, count: usize) -> Vec<BigRational> {
        (0..count)
            .map(|_| {
                if self.rng.gen_range(0..8) == 0 {
                    return BigRational::zero();
                }
                let d: i64 = self.rng.gen_range(1..=12);
                let k: i64 = self.rng.gen_range(0..=3 * d);
                BigRational::new(BigInt::from(k), BigInt::from(d))
            })
            .collect()
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(())
}

/// Drops, in order, each inequality that the remaining ones imply at every
/// one of `trials` sampled parameter instances. Exact duplicates keep their
/// last copy.
pub fn remove_redundant(
    sys: &InequalitySystem,
    sampler: &mut dyn ParamSampler,
    trials: usize,
) -> Result<InequalitySystem> {
    check_trials(trials)?;
    let samples: Vec<Vec<BigRational>> = (0..trials).map(|_| sampler.sample(sys.parameters.len())).collect();
    let n = sys.variables.len();
    let mut keep: Vec<Inequality> = sys.rows.clone();
    let mut i = 0;
    while i < keep.len() {
        let rest = sys.with_rows(keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect());
        let mut redundant = true;
        for p in &samples {
            let target = NumRow {
                a: keep[i].lhs.clone(),
                b: keep[i].bound(p),
                strict: false,
            };
            if !implies(&rest.instantiate(p), &target, n)? {
                redundant = false;
                break;
            }
        }
        if redundant {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(sys.with_rows(keep))
}

/// A parameter instance at which one polyhedron is not contained in the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub parameters: Vec<(String, BigRational)>,
    /// The inequality of the second-named system that fails to follow.
    pub inequality: String,
    /// `"a => b"` or `"b => a"`.
    pub direction: &'static str,
}

/// Outcome of [`verify_region_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub trials: usize,
    pub counterexample: Option<Counterexample>,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "equivalent at all {} sampled instances (parameters treated as free nonnegative reals)",
                self.trials
            ),
            Some(c) => {
                write!(f, "NOT equivalent at trial {} ({}): {} fails;", c.trial, c.direction, c.inequality)?;
                for (n, v) in &c.parameters {
                    write!(f, " {n}={v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Checks mutual containment of the two polyhedra at `trials` sampled
/// parameter instances.
pub fn verify_region_equivalence(
    a: &InequalitySystem,
    b: &InequalitySystem,
    sampler: &mut dyn ParamSampler,
    trials: usize,
) -> Result<EquivalenceReport> {
    check_trials(trials)?;
    let mut params = a.parameters.clone();
    for p in &b.parameters {
        if !params.contains(p) {
            params.push(p.clone());
        }
    }
    let a = a.aligned(&a.variables, &params)?;
    let b = b.aligned(&a.variables, &params)?;
    let n = a.variables.len();
    for trial in 0..trials {
        let p = sampler.sample(params.len());
        let (ra, rb) = (a.instantiate(&p), b.instantiate(&p));
        for (from, to, sys, direction) in [(&ra, &rb, &b, "a => b"), (&rb, &ra, &a, "b => a")] {
            for (k, t) in to.iter().enumerate() {
                if !implies(from, t, n)? {
                    let inequality = match sys.rows.get(k) {
                        Some(r) => sys.format_row(r),
                        None => {
                            let v = t.a.iter().position(|c| !c.is_zero()).unwrap_or(0);
                            format!("{} >= 0", sys.variables[v])
                        }
                    };
                    return Ok(EquivalenceReport {
                        trials: trial + 1,
                        counterexample: Some(Counterexample {
                            trial,
                            parameters: params.iter().cloned().zip(p).collect(),
                            inequality,
                            direction,
                        }),
                    });
                }
            }
        }
    }
    Ok(EquivalenceReport {
        trials,
        counterexample: None,
    })
}

/// A system, the variables to project out, and the claimed projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmeProblem {
    pub system: InequalitySystem,
    pub eliminate: Vec<String>,
    pub target: InequalitySystem,
}

/// Result of [`check_problem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmeCheck {
    pub projected: InequalitySystem,
    pub reduced: InequalitySystem,
    pub report: EquivalenceReport,
}

/// Eliminates, removes redundancy and compares against the target, drawing
/// both redundancy and equivalence samples from `sampler`.
pub fn check_problem(problem: &FmeProblem, sampler: &mut dyn ParamSampler, trials: usize) -> Result<FmeCheck> {
    let drop: Vec<&str> = problem.eliminate.iter().map(String::as_str).collect();
    let projected = fme_eliminate(&problem.system, &drop)?;
    let reduced = remove_redundant(&projected, sampler, trials)?;
    let report = verify_region_equivalence(&reduced, &problem.target, sampler, trials)?;
    Ok(FmeCheck {
        projected,
        reduced,
        report,
    })
}

const RATES: [&str; 3] = ["R1", "R2", "Rb"];

/// Rate splitting for lossless cascade-broadcast: `r1b`, `r2b` travel on the
/// common link, `r1d`, `r2d` on the dedicated links.
pub fn prop2_problem() -> FmeProblem {
    let params = ["I_XA", "H_X_AY", "H_X_AZ"];
    let mut s = InequalitySystem::new(&["R1", "R2", "Rb", "r1b", "r1d", "r2b", "r2d"], &params)
        .expect("fixed names");
    let rows: [(&[(i64, &str)], &[(i64, &str)]); 5] = [
        (&[(1, "r2b"), (1, "r2d"), (1, "r1b")], &[(1, "H_X_AZ")]),
        (&[(1, "r1b"), (1, "r1d")], &[(1, "H_X_AY")]),
        (&[(1, "R1"), (-1, "r1d")], &[]),
        (&[(1, "R2"), (-1, "r2d")], &[]),
        (&[(1, "Rb"), (-1, "r1b"), (-1, "r2b")], &[(1, "I_XA")]),
    ];
    for (l, r) in rows {
        s.add(l, r, 0).expect("fixed names");
    }
    FmeProblem {
        system: s,
        eliminate: ["r1b", "r1d", "r2b", "r2d"].iter().map(|v| v.to_string()).collect(),
        target: prop2_target("H_X_AZ"),
    }
}

fn prop2_target(node3: &str) -> InequalitySystem {
    let mut t = InequalitySystem::new(&RATES, &["I_XA", "H_X_AY", "H_X_AZ"]).expect("fixed names");
    t.add(&[(1, "Rb")], &[(1, "I_XA")], 0).expect("fixed names");
    t.add(&[(1, "R1"), (1, "Rb")], &[(1, "I_XA"), (1, "H_X_AY")], 0)
        .expect("fixed names");
    t.add(&[(1, "R2"), (1, "Rb")], &[(1, "I_XA"), (1, node3)], 0)
        .expect("fixed names");
    t
}

/// [`prop2_problem`] with the Node 3 bound's parameter replaced by
/// `H_X_AY`; its projection must not match.
pub fn prop2_mutated_problem() -> FmeProblem {
    FmeProblem {
        target: prop2_target("H_X_AY"),
        ..prop2_problem()
    }
}

/// Rate splitting for the lossy region with common reconstruction:
/// `r0` carries the Node 3 description, `r2` its refinement for Node 2
/// and `r1` the Node 2 private part.
pub fn prop3_problem() -> FmeProblem {
    let params = ["I_XA", "I_XX2_AY", "I_XX2_AZ", "I_XX1_AYX2"];
    let vars = ["R1", "R2", "Rb", "r0b", "r0d", "r1b", "r1d", "r2b", "r2d"];
    let mut s = InequalitySystem::new(&vars, &params).expect("fixed names");
    let rows: [(&[(i64, &str)], &[(i64, &str)]); 6] = [
        (&[(1, "r0b"), (1, "r0d"), (1, "r2b")], &[(1, "I_XX2_AZ")]),
        (&[(1, "r2b"), (1, "r2d")], &[(1, "I_XX2_AY")]),
        (&[(1, "r1b"), (1, "r1d")], &[(1, "I_XX1_AYX2")]),
        (&[(1, "R1"), (-1, "r1d"), (-1, "r2d")], &[]),
        (&[(1, "R2"), (-1, "r0d")], &[]),
        (&[(1, "Rb"), (-1, "r1b"), (-1, "r2b"), (-1, "r0b")], &[(1, "I_XA")]),
    ];
    for (l, r) in rows {
        s.add(l, r, 0).expect("fixed names");
    }
    let mut t = InequalitySystem::new(&RATES, &params).expect("fixed names");
    t.add(&[(1, "Rb")], &[(1, "I_XA")], 0).expect("fixed names");
    t.add(
        &[(1, "R1"), (1, "Rb")],
        &[(1, "I_XA"), (1, "I_XX2_AY"), (1, "I_XX1_AYX2")],
        0,
    )
    .expect("fixed names");
    t.add(&[(1, "R2"), (1, "Rb")], &[(1, "I_XA"), (1, "I_XX2_AZ")], 0)
        .expect("fixed names");
    t.add(
        &[(1, "R1"), (1, "R2"), (1, "Rb")],
        &[(1, "I_XA"), (1, "I_XX2_AZ"), (1, "I_XX1_AYX2")],
        0,
    )
    .expect("fixed names");
    FmeProblem {
        system: s,
        eliminate: ["r0b", "r0d", "r1b", "r1d", "r2b", "r2d"].iter().map(|v| v.to_string()).collect(),
        target: t,
    }
}
