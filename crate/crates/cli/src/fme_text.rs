//! Text format for elimination problems.
//!
//! ```text
//! # comment
//! variables: R1 R2 Rb r1b r1d
//! parameters: I_XA H_X_AY
//! signed: r1b            # optional; all other variables are nonnegative
//! eliminate: r1b r1d
//! system:
//! r1b + r1d >= H_X_AY
//! R1 - r1d >= 0
//! target:
//! R1 + Rb >= I_XA + H_X_AY
//! ```
//!
//! Terms are `name`, `c*name` or a bare constant `c`, where `c` is an
//! integer, a decimal or a fraction `p/q`. Variables may appear on either
//! side of `>=` or `<=`, and so may parameters.

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use vmcascade_core::fme::{prop2_mutated_problem, prop2_problem, prop3_problem, FmeProblem, InequalitySystem};

use crate::config::Invalid;

/// One of the bundled problems: `prop2`, `prop3` or `prop2-mutated`.
pub fn builtin(name: &str) -> Option<FmeProblem> {
    match name {
        "prop2" => Some(prop2_problem()),
        "prop3" => Some(prop3_problem()),
        "prop2-mutated" => Some(prop2_mutated_problem()),
        _ => None,
    }
}

fn number(s: &str) -> Result<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let (p, q) = (number(p)?, number(q)?);
        if q.is_zero() {
            bail!("division by zero in `{s}`");
        }
        return Ok(p / q);
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        bail!("bad number `{s}`");
    }
    let digits: BigInt = format!("{int}{frac}").parse()?;
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(BigRational::new(digits, scale))
}

fn is_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Signed terms; `None` marks a constant.
fn terms(expr: &str) -> Result<Vec<(BigRational, Option<String>)>> {
    if expr.trim_end().ends_with(['+', '-']) {
        bail!("dangling operator in `{expr}`");
    }
    let mut out = Vec::new();
    let mut sign = BigRational::one();
    let mut cur = String::new();
    let flush = |cur: &mut String, sign: &BigRational, out: &mut Vec<_>| -> Result<()> {
        let t: String = cur.split_whitespace().collect();
        cur.clear();
        if t.is_empty() {
            return Ok(());
        }
        if t == "0" {
            return Ok(());
        }
        let (coef, name) = match t.split_once('*') {
            Some((c, n)) => (number(c)?, Some(n.to_string())),
            None if is_name(&t) => (BigRational::one(), Some(t.clone())),
            None => (number(&t)?, None),
        };
        if let Some(n) = &name {
            if !is_name(n) {
                bail!("bad name `{n}`");
            }
        }
        out.push((sign * coef, name));
        Ok(())
    };
    for ch in expr.chars() {
        match ch {
            '+' | '-' => {
                if cur.trim().is_empty() && !out.is_empty() {
                    bail!("dangling operator in `{expr}`");
                }
                flush(&mut cur, &sign, &mut out)?;
                sign = if ch == '-' { -BigRational::one() } else { BigRational::one() };
            }
            _ => cur.push(ch),
        }
    }
    flush(&mut cur, &sign, &mut out)?;
    Ok(out)
}

fn add_line(sys: &mut InequalitySystem, line: &str) -> Result<()> {
    let (lhs, rhs, flip) = if let Some((l, r)) = line.split_once(">=") {
        (l, r, false)
    } else if let Some((l, r)) = line.split_once("<=") {
        (l, r, true)
    } else {
        bail!("expected `>=` or `<=`");
    };
    let (lhs, rhs) = if flip { (rhs, lhs) } else { (lhs, rhs) };
    let vars: Vec<String> = sys.variables().to_vec();
    let params: Vec<String> = sys.parameters().to_vec();
    let mut left: Vec<(BigRational, String)> = Vec::new();
    let mut right: Vec<(BigRational, String)> = Vec::new();
    let mut constant = BigRational::zero();
    for (side, list) in [(1, terms(lhs)?), (-1, terms(rhs)?)] {
        for (c, name) in list {
            // move everything to the form sum(vars) >= sum(params) + constant
            let c = if side == 1 { c } else { -c };
            match name {
                None => constant -= c,
                Some(n) if vars.contains(&n) => left.push((c, n)),
                Some(n) if params.contains(&n) => right.push((-c, n)),
                Some(n) => bail!("undeclared name `{n}`"),
            }
        }
    }
    let l: Vec<(BigRational, &str)> = left.iter().map(|(c, n)| (c.clone(), n.as_str())).collect();
    let r: Vec<(BigRational, &str)> = right.iter().map(|(c, n)| (c.clone(), n.as_str())).collect();
    sys.add_terms(&l, &r, constant)?;
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    Header,
    System,
    Target,
}

pub fn parse(text: &str) -> Result<FmeProblem> {
    parse_inner(text).map_err(|e| Invalid(format!("{e:#}")).into())
}

fn as_str(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn parse_inner(text: &str) -> Result<FmeProblem> {
    let mut variables: Vec<String> = Vec::new();
    let mut parameters: Vec<String> = Vec::new();
    let mut signed: Vec<String> = Vec::new();
    let mut eliminate: Vec<String> = Vec::new();
    let mut system_lines = Vec::new();
    let mut target_lines = Vec::new();
    let mut section = Section::Header;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words = |rest: &str| rest.split_whitespace().map(String::from).collect::<Vec<_>>();
        if let Some((key, rest)) = line.split_once(':') {
            match key.trim() {
                "variables" => variables = words(rest),
                "parameters" => parameters = words(rest),
                "signed" => signed = words(rest),
                "eliminate" => eliminate = words(rest),
                "system" => section = Section::System,
                "target" => section = Section::Target,
                k => bail!("line {}: unknown section `{k}`", no + 1),
            }
            continue;
        }
        match section {
            Section::Header => bail!("line {}: inequality outside `system:` or `target:`", no + 1),
            Section::System => system_lines.push((no + 1, line.to_string())),
            Section::Target => target_lines.push((no + 1, line.to_string())),
        }
    }
    if variables.is_empty() {
        bail!("no `variables:` line");
    }
        let mut system = InequalitySystem::new(&as_str(&variables), &as_str(&parameters))?;
    for e in &eliminate {
        if !variables.contains(e) {
            bail!("cannot eliminate undeclared variable `{e}`");
        }
    }
    let kept: Vec<String> = variables.iter().filter(|v| !eliminate.contains(v)).cloned().collect();
    let mut target = InequalitySystem::new(&as_str(&kept), &as_str(&parameters))?;
    for s in &signed {
        system.set_signed(s)?;
        if kept.contains(s) {
            target.set_signed(s)?;
        }
    }
    for (no, l) in &system_lines {
        add_line(&mut system, l).with_context(|| format!("line {no}"))?;
    }
    for (no, l) in &target_lines {
        add_line(&mut target, l).with_context(|| format!("line {no}"))?;
    }
    Ok(FmeProblem {
        system,
        eliminate,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(number("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(number("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert!(number("1e3").is_err());
        assert!(number("1/0").is_err());
    }

    #[test]
    fn sides_are_normalized() {
        let p = parse("variables: x y\nparameters: a\nsystem:\n2*x + a <= y + 1\ntarget:\n").unwrap();
        let row = &p.system.rows()[0];
        assert_eq!(p.system.format_row(row), "-2*x + y >= a - 1");
    }

    #[test]
    fn rejects_undeclared_names() {
        assert!(parse("variables: x\nsystem:\nx >= b\n").is_err());
        assert!(parse("variables: x\nsystem:\nx + >= 1\n").is_err());
        assert!(parse("system:\nx >= 1\n").is_err());
    }
}
