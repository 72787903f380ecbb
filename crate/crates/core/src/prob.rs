//! Dense finite-alphabet distributions and the information measures built on
//! them. All logarithms are base 2, so every quantity is in bits.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Tolerance on the total mass of any ingested table.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A named finite alphabet whose symbols are `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    name: String,
    size: usize,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, size: usize) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::ZeroSizedAlphabet(name));
        }
        Ok(Alphabet { name, size })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// `p log2 p` with the convention `0 log 0 = 0`.
#[inline]
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * libm::log2(p)
    } else {
        0.0
    }
}

/// Binary entropy function in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -plogp(p) - plogp(1.0 - p)
}

/// Shannon entropy of a probability vector in bits.
pub fn entropy_of(p: &[f64]) -> f64 {
    let h = -p.iter().map(|&v| plogp(v)).sum::<f64>();
    if h < 0.0 {
        0.0
    } else {
        h
    }
}

fn product(vars: &[Alphabet]) -> usize {
    vars.iter().map(Alphabet::size).product()
}

fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1; sizes.len()];
    for k in (0..sizes.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * sizes[k + 1];
    }
    s
}

/// Visits every flat row-major index of a table with the given axis sizes,
/// together with the index it projects to under `out_strides` (a zero stride
/// drops the axis).
pub(crate) fn for_each_projected(
    sizes: &[usize],
    out_strides: &[usize],
    mut f: impl FnMut(usize, usize),
) {
    let total: usize = sizes.iter().product();
    let mut counter = vec![0usize; sizes.len()];
    let mut proj = 0usize;
    for flat in 0..total {
        f(flat, proj);
        for k in (0..sizes.len()).rev() {
            counter[k] += 1;
            proj += out_strides[k];
            if counter[k] < sizes[k] {
                break;
            }
            proj -= sizes[k] * out_strides[k];
            counter[k] = 0;
        }
    }
}

/// Checks a probability vector and rescales it to sum exactly to one.
pub(crate) fn normalize_checked(what: &str, p: &mut [f64]) -> Result<()> {
    let mut sum = 0.0;
    for &v in p.iter() {
        if v.is_nan() {
            return Err(Error::NotANumber(what.to_string()));
        }
        if v < 0.0 || v.is_infinite() {
            return Err(Error::NegativeEntry(what.to_string()));
        }
        sum += v;
    }
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization {
            what: what.to_string(),
            sum,
        });
    }
    for v in p.iter_mut() {
        *v /= sum;
    }
    Ok(())
}

fn check_unique(vars: &[Alphabet]) -> Result<()> {
    for (i, a) in vars.iter().enumerate() {
        if vars[..i].iter().any(|b| b.name == a.name) {
            return Err(Error::DuplicateVariable(a.name.clone()));
        }
    }
    Ok(())
}

/// A normalized probability table over an ordered list of variables, stored
/// row-major with the last variable varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    vars: Vec<Alphabet>,
    mass: Vec<f64>,
}

impl JointDistribution {
    /// Validates and renormalizes `mass`. Tables whose total is within
    /// [`NORMALIZATION_TOLERANCE`] of one are rescaled exactly.
    pub fn new(vars: Vec<Alphabet>, mut mass: Vec<f64>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::EmptySubset);
        }
        check_unique(&vars)?;
        let expected = product(&vars);
        if mass.len() != expected {
            return Err(Error::ShapeMismatch {
                what: "joint distribution".into(),
                expected,
                found: mass.len(),
            });
        }
        normalize_checked("joint distribution", &mut mass)?;
        Ok(JointDistribution { vars, mass })
    }

    pub fn uniform(vars: Vec<Alphabet>) -> Result<Self> {
        let n = product(&vars);
        Self::new(vars, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(vars: Vec<Alphabet>, at: &[usize]) -> Result<Self> {
        let sizes: Vec<usize> = vars.iter().map(Alphabet::size).collect();
        if at.len() != sizes.len() || at.iter().zip(&sizes).any(|(a, s)| a >= s) {
            return Err(Error::Usage("point mass outside the alphabets".into()));
        }
        let st = strides(&sizes);
        let mut mass = vec![0.0; product(&vars)];
        mass[at.iter().zip(&st).map(|(a, s)| a * s).sum::<usize>()] = 1.0;
        Self::new(vars, mass)
    }

    /// Builds a table by evaluating `f` on every symbol tuple.
    pub fn from_fn(vars: Vec<Alphabet>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let sizes: Vec<usize> = vars.iter().map(Alphabet::size).collect();
        let mut mass = Vec::with_capacity(product(&vars));
        let mut idx = vec![0usize; sizes.len()];
        for _ in 0..product(&vars) {
            mass.push(f(&idx));
            for k in (0..sizes.len()).rev() {
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Self::new(vars, mass)
    }

    /// Skips validation; callers guarantee a normalized nonnegative table.
    pub(crate) fn from_parts(vars: Vec<Alphabet>, mass: Vec<f64>) -> Self {
        debug_assert_eq!(mass.len(), product(&vars));
        JointDistribution { vars, mass }
    }

    pub fn variables(&self) -> &[Alphabet] {
        &self.vars
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.vars.iter().map(Alphabet::size).collect()
    }

    pub fn axis(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn alphabet(&self, name: &str) -> Result<&Alphabet> {
        Ok(&self.vars[self.axis(name)?])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v.name == name)
    }

    /// Probability of one symbol tuple, in variable order.
    pub fn prob(&self, at: &[usize]) -> f64 {
        let st = strides(&self.sizes());
        self.mass[at.iter().zip(&st).map(|(a, s)| a * s).sum::<usize>()]
    }

    fn axes(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let a = self.axis(n)?;
            if out.contains(&a) {
                return Err(Error::DuplicateVariable(n.to_string()));
            }
            out.push(a);
        }
        Ok(out)
    }

    /// Marginal table over `axes`, laid out in the order given.
    fn marginal_table(&self, axes: &[usize]) -> Vec<f64> {
        let sizes = self.sizes();
        let kept: Vec<usize> = axes.iter().map(|&a| sizes[a]).collect();
        let kept_strides = strides(&kept);
        let mut out_strides = vec![0; sizes.len()];
        for (k, &a) in axes.iter().enumerate() {
            out_strides[a] = kept_strides[k];
        }
        let mut out = vec![0.0; kept.iter().product()];
        for_each_projected(&sizes, &out_strides, |flat, proj| out[proj] += self.mass[flat]);
        out
    }

    fn entropy_axes(&self, axes: &[usize]) -> f64 {
        if axes.is_empty() {
            return 0.0;
        }
        if axes.len() == self.vars.len() {
            return entropy_of(&self.mass);
        }
        let mut sorted = axes.to_vec();
        sorted.sort_unstable();
        entropy_of(&self.marginal_table(&sorted))
    }

    /// Joint entropy `H(subset)` in bits.
    pub fn entropy(&self, subset: &[&str]) -> Result<f64> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(self.entropy_axes(&self.axes(subset)?))
    }

    /// `H(a | given)`; `given` may be empty.
    pub fn conditional_entropy(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        let groups = self.disjoint_groups(&[a, given])?;
        if groups[0].is_empty() {
            return Err(Error::EmptySubset);
        }
        let joint: Vec<usize> = groups[0].iter().chain(&groups[1]).copied().collect();
        let h = self.entropy_axes(&joint) - self.entropy_axes(&groups[1]);
        Ok(if h < 0.0 { 0.0 } else { h })
    }

    fn disjoint_groups(&self, groups: &[&[&str]]) -> Result<Vec<Vec<usize>>> {
        let mut seen: Vec<usize> = Vec::new();
        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            let axes = self.axes(g)?;
            for (&a, n) in axes.iter().zip(g.iter()) {
                if seen.contains(&a) {
                    return Err(Error::OverlappingGroups(n.to_string()));
                }
                seen.push(a);
            }
            out.push(axes);
        }
        Ok(out)
    }

    /// `I(a; b | given)` in bits, from the entropy decomposition
    /// `H(a,g) + H(b,g) - H(a,b,g) - H(g)`. Rounding negatives are clamped to 0.
    pub fn conditional_mutual_information(
        &self,
        a: &[&str],
        b: &[&str],
        given: &[&str],
    ) -> Result<f64> {
        let groups = self.disjoint_groups(&[a, b, given])?;
        if groups[0].is_empty() || groups[1].is_empty() {
            return Err(Error::EmptySubset);
        }
        let (ga, gb, gc) = (&groups[0], &groups[1], &groups[2]);
        let ac: Vec<usize> = ga.iter().chain(gc).copied().collect();
        let bc: Vec<usize> = gb.iter().chain(gc).copied().collect();
        let abc: Vec<usize> = ga.iter().chain(gb).chain(gc).copied().collect();
        let i = self.entropy_axes(&ac) + self.entropy_axes(&bc)
            - self.entropy_axes(&abc)
            - self.entropy_axes(gc);
        Ok(if i < 0.0 { 0.0 } else { i })
    }

    pub fn mutual_information(&self, a: &[&str], b: &[&str]) -> Result<f64> {
        self.conditional_mutual_information(a, b, &[])
    }

    /// Sums out every variable not in `keep`; the result lists the kept
    /// variables in the order given.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointDistribution> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let axes = self.axes(keep)?;
        let vars = axes.iter().map(|&a| self.vars[a].clone()).collect();
        Ok(JointDistribution::from_parts(vars, self.marginal_table(&axes)))
    }

    /// Multiplies in a conditional channel: the result carries the base
    /// variables followed by `ch`'s output variables.
    pub fn compose(&self, ch: &ConditionalChannel) -> Result<JointDistribution> {
        let sizes = self.sizes();
        let from_sizes: Vec<usize> = ch.from.iter().map(Alphabet::size).collect();
        let from_strides = strides(&from_sizes);
        let mut out_strides = vec![0; sizes.len()];
        for (k, v) in ch.from.iter().enumerate() {
            let a = self.axis(&v.name)?;
            if self.vars[a].size != v.size {
                return Err(Error::ShapeMismatch {
                    what: format!("alphabet `{}`", v.name),
                    expected: self.vars[a].size,
                    found: v.size,
                });
            }
            out_strides[a] = from_strides[k];
        }
        for v in &ch.to {
            if self.contains(&v.name) {
                return Err(Error::OverlappingGroups(v.name.clone()));
            }
        }
        let width = ch.width();
        let mut mass = vec![0.0; self.mass.len() * width];
        for_each_projected(&sizes, &out_strides, |flat, cond| {
            let p = self.mass[flat];
            if p == 0.0 {
                return;
            }
            let src = &ch.mass[cond * width..(cond + 1) * width];
            for (dst, &q) in mass[flat * width..(flat + 1) * width].iter_mut().zip(src) {
                *dst = p * q;
            }
        });
        let mut vars = self.vars.clone();
        vars.extend(ch.to.iter().cloned());
        Ok(JointDistribution::from_parts(vars, mass))
    }

    /// True iff `a - b - c` is a Markov chain, i.e. `I(a; c | b) <= tol`.
    pub fn is_markov_chain(&self, a: &[&str], b: &[&str], c: &[&str], tol: f64) -> Result<bool> {
        Ok(self.conditional_mutual_information(a, c, b)? <= tol)
    }
}

/// A conditional pmf `p(to | from)`, stored as one contiguous slice over the
/// `to` variables per `from` tuple (row-major over `from`).
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalChannel {
    from: Vec<Alphabet>,
    to: Vec<Alphabet>,
    mass: Vec<f64>,
}

impl ConditionalChannel {
    pub fn new(from: Vec<Alphabet>, to: Vec<Alphabet>, mut mass: Vec<f64>) -> Result<Self> {
        if to.is_empty() {
            return Err(Error::EmptySubset);
        }
        let all: Vec<Alphabet> = from.iter().chain(&to).cloned().collect();
        check_unique(&all)?;
        let expected = product(&all);
        if mass.len() != expected {
            return Err(Error::ShapeMismatch {
                what: "conditional channel".into(),
                expected,
                found: mass.len(),
            });
        }
        let width = product(&to);
        for (i, slice) in mass.chunks_mut(width).enumerate() {
            normalize_checked(&format!("channel slice {i}"), slice)?;
        }
        Ok(ConditionalChannel { from, to, mass })
    }

    /// Builds the table from `f(from_tuple, to_tuple)`.
    pub fn from_fn(
        from: Vec<Alphabet>,
        to: Vec<Alphabet>,
        mut f: impl FnMut(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let nf = from.len();
        let sizes: Vec<usize> = from.iter().chain(&to).map(Alphabet::size).collect();
        let total: usize = sizes.iter().product();
        let mut mass = Vec::with_capacity(total);
        let mut idx = vec![0usize; sizes.len()];
        for _ in 0..total {
            mass.push(f(&idx[..nf], &idx[nf..]));
            for k in (0..sizes.len()).rev() {
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Self::new(from, to, mass)
    }

    /// A channel putting all mass on `f(from_tuple)`.
    pub fn deterministic(
        from: Vec<Alphabet>,
        to: Vec<Alphabet>,
        mut f: impl FnMut(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        Self::from_fn(from, to, |cond, out| {
            if f(cond).as_slice() == out {
                1.0
            } else {
                0.0
            }
        })
    }

    pub(crate) fn from_parts(from: Vec<Alphabet>, to: Vec<Alphabet>, mass: Vec<f64>) -> Self {
        debug_assert_eq!(mass.len(), product(&from) * product(&to));
        ConditionalChannel { from, to, mass }
    }

    pub fn from_vars(&self) -> &[Alphabet] {
        &self.from
    }

    pub fn to_vars(&self) -> &[Alphabet] {
        &self.to
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Number of conditioning tuples.
    pub fn slices(&self) -> usize {
        product(&self.from)
    }

    /// Number of output tuples per slice.
    pub fn width(&self) -> usize {
        product(&self.to)
    }

    pub fn slice(&self, cond: usize) -> &[f64] {
        let w = self.width();
        &self.mass[cond * w..(cond + 1) * w]
    }
}
