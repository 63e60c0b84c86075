//! Textual forms of group specs and elements.

use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};

const LETTERS: [&str; 4] = ["x", "y", "z", "w"];

pub(super) fn parse_spec(s: &str) -> Result<GroupSpec> {
    let s = s.trim();
    if s.contains('*') {
        let factors = s.split('*').map(parse_spec).collect::<Result<Vec<_>>>()?;
        let spec = GroupSpec::Product { factors };
        spec.validate()?;
        return Ok(spec);
    }
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (s, None),
    };
    let number = |what: &str| -> Result<u64> {
        let a = arg.ok_or_else(|| Error::Parse(format!("group kind '{kind}' needs a {what}")))?;
        a.parse::<u64>().map_err(|_| Error::Parse(format!("invalid {what} '{a}' in group '{s}'")))
    };
    let spec = match kind.to_ascii_lowercase().as_str() {
        "z" | "lattice" => GroupSpec::Lattice { dim: number("dimension")? as usize },
        "free" | "f" => GroupSpec::Free { rank: number("rank")? as usize },
        "heisenberg" | "h3" => GroupSpec::Heisenberg,
        "cyclic" | "c" => GroupSpec::Cyclic { order: number("order")? },
        other => return Err(Error::Parse(format!("unknown group kind '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

/// Generator (or shorthand element) named `name`, before exponentiation.
fn named(spec: &GroupSpec, name: &str) -> Result<GroupElement> {
    let unknown = || Error::Parse(format!("unknown generator '{name}' for group {spec}"));
    let indexed = |max: usize| -> Option<usize> {
        if let Some(pos) = LETTERS.iter().position(|l| *l == name) {
            return (pos < max).then_some(pos);
        }
        let digits = name.strip_prefix('g').or_else(|| name.strip_prefix('e'))?;
        let i: usize = digits.parse().ok()?;
        (i >= 1 && i <= max).then_some(i - 1)
    };
    match spec {
        GroupSpec::Lattice { dim } => {
            let i = indexed(*dim).ok_or_else(unknown)?;
            let mut v = vec![0; *dim];
            v[i] = 1;
            Ok(GroupElement::Lattice(v))
        }
        GroupSpec::Free { rank } => {
            let i = indexed(*rank).ok_or_else(unknown)?;
            Ok(GroupElement::Free(vec![i as i32 + 1]))
        }
        GroupSpec::Heisenberg => match name {
            "x" => Ok(GroupElement::Heisenberg([1, 0, 0])),
            "y" => Ok(GroupElement::Heisenberg([0, 1, 0])),
            "z" => Ok(GroupElement::Heisenberg([0, 0, 1])),
            _ => Err(unknown()),
        },
        GroupSpec::Cyclic { order } => match name {
            "g" | "x" => Ok(GroupElement::Cyclic(1 % order)),
            _ => Err(unknown()),
        },
        GroupSpec::Product { .. } => {
            Err(Error::Parse("product elements are written component-wise, separated by '|'".into()))
        }
    }
}

fn power(spec: &GroupSpec, g: &GroupElement, exp: i64) -> GroupElement {
    let base = if exp < 0 { spec.inv_unchecked(g) } else { g.clone() };
    let mut acc = spec.identity();
    for _ in 0..exp.unsigned_abs() {
        acc = spec.mul_unchecked(&acc, &base);
    }
    acc
}

fn parse_tuple(spec: &GroupSpec, body: &str) -> Result<GroupElement> {
    let nums = body
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("invalid integer '{}' in tuple", t.trim()))))
        .collect::<Result<Vec<i64>>>()?;
    let g = match spec {
        GroupSpec::Lattice { dim } if nums.len() == *dim => GroupElement::Lattice(nums),
        GroupSpec::Heisenberg if nums.len() == 3 => GroupElement::Heisenberg([nums[0], nums[1], nums[2]]),
        GroupSpec::Cyclic { order } if nums.len() == 1 => {
            GroupElement::Cyclic(nums[0].rem_euclid(*order as i64) as u64)
        }
        _ => {
            return Err(Error::Parse(format!("tuple of length {} does not describe an element of {spec}", nums.len())))
        }
    };
    Ok(g)
}

pub(super) fn parse_element(spec: &GroupSpec, text: &str) -> Result<GroupElement> {
    let text = text.trim();
    if let GroupSpec::Product { factors } = spec {
        let parts: Vec<&str> = text.split('|').collect();
        if text == "e" || text == "1" || text.is_empty() {
            return Ok(spec.identity());
        }
        if parts.len() != factors.len() {
            return Err(Error::Parse(format!(
                "product element needs {} '|'-separated components, got {}",
                factors.len(),
                parts.len()
            )));
        }
        let comps = factors.iter().zip(parts).map(|(f, p)| parse_element(f, p)).collect::<Result<Vec<_>>>()?;
        return Ok(GroupElement::Product(comps));
    }
    if let Some(body) = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .or_else(|| text.strip_prefix('[').and_then(|t| t.strip_suffix(']')))
    {
        return parse_tuple(spec, body);
    }
    let mut acc = spec.identity();
    for token in text.split(|c: char| c.is_whitespace() || c == '*' || c == '.').filter(|t| !t.is_empty()) {
        if token == "e" || token == "1" {
            continue;
        }
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => {
                let e = e
                    .trim_start_matches('{')
                    .trim_end_matches('}')
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("invalid exponent in '{token}'")))?;
                (n, e)
            }
            None => (token, 1),
        };
        let g = named(spec, name)?;
        acc = spec.mul_unchecked(&acc, &power(spec, &g, exp));
    }
    Ok(acc)
}

pub(super) fn format_element(spec: &GroupSpec, g: &GroupElement) -> String {
    let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    match (spec, g) {
        (_, GroupElement::Lattice(v)) => format!("({})", join(v)),
        (_, GroupElement::Heisenberg(t)) => format!("({})", join(t)),
        (_, GroupElement::Cyclic(k)) => format!("({k})"),
        (GroupSpec::Free { rank }, GroupElement::Free(w)) => {
            if w.is_empty() {
                return "e".into();
            }
            let name = |i: i32| -> String {
                let i = i.unsigned_abs() as usize;
                if *rank <= LETTERS.len() {
                    LETTERS[i - 1].to_string()
                } else {
                    format!("g{i}")
                }
            };
            let mut parts = Vec::new();
            let mut idx = 0;
            while idx < w.len() {
                let l = w[idx];
                let mut run = 1;
                while idx + run < w.len() && w[idx + run] == l {
                    run += 1;
                }
                let exp = if l > 0 { run as i64 } else { -(run as i64) };
                parts.push(if exp == 1 { name(l) } else { format!("{}^{}", name(l), exp) });
                idx += run;
            }
            parts.join(" ")
        }
        (GroupSpec::Product { factors }, GroupElement::Product(comps)) => {
            factors.iter().zip(comps).map(|(f, c)| format_element(f, c)).collect::<Vec<_>>().join(" | ")
        }
        _ => format!("{g:?}"),
    }
}
