//! Computable group models with canonical normal forms.
//!
//! Every supported group comes with a fixed symmetric generating set, which
//! determines the word length `|g|` and the balls `B(r)` used for supports,
//! weights and growth estimates.

mod ball;
mod growth;
mod heisenberg;
mod parse;

pub use ball::{ball, BallTable, DEFAULT_BALL_CAP};
pub use growth::{log_ball_volume, log_sphere_sizes};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A group together with its standard symmetric generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    /// `Z^dim` with generators `±e_i`.
    Lattice { dim: usize },
    /// Free group on `rank` letters.
    Free { rank: usize },
    /// Integer Heisenberg group, generated by `X` and `Y`.
    Heisenberg,
    /// `Z/order` with generators `{g, g^-1}`.
    Cyclic { order: u64 },
    /// Direct product; the generating set is the union of the factors' sets.
    Product { factors: Vec<GroupSpec> },
}

/// Canonical normal form of a group element.
///
/// Normal forms are unique, so structural equality is group equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    Lattice(Vec<i64>),
    /// Freely reduced word. Letter `+i` is generator `i` (1-based), `-i` its inverse.
    Free(Vec<i32>),
    /// `(a, b, c)` stands for the unipotent matrix `[[1,a,c],[0,1,b],[0,0,1]]`.
    Heisenberg([i64; 3]),
    Cyclic(u64),
    Product(Vec<GroupElement>),
}

impl GroupSpec {
    pub fn lattice(dim: usize) -> Self {
        GroupSpec::Lattice { dim }
    }

    pub fn free(rank: usize) -> Self {
        GroupSpec::Free { rank }
    }

    pub fn cyclic(order: u64) -> Self {
        GroupSpec::Cyclic { order }
    }

    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec::Product { factors }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Lattice { dim } if *dim == 0 => Err(Error::Structural("lattice dimension must be >= 1".into())),
            GroupSpec::Free { rank } if *rank == 0 => Err(Error::Structural("free group rank must be >= 1".into())),
            GroupSpec::Free { rank } if *rank > i32::MAX as usize => {
                Err(Error::Structural("free group rank too large".into()))
            }
            GroupSpec::Cyclic { order } if *order == 0 => {
                Err(Error::Structural("cyclic group order must be >= 1".into()))
            }
            GroupSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Structural("direct product needs at least one factor".into()));
                }
                factors.iter().try_for_each(GroupSpec::validate)
            }
            _ => Ok(()),
        }
    }

    /// True for the groups whose growth function is subexponential.
    pub fn has_subexponential_growth(&self) -> bool {
        match self {
            GroupSpec::Free { rank } => *rank == 1,
            GroupSpec::Product { factors } => factors.iter().all(GroupSpec::has_subexponential_growth),
            _ => true,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Lattice { dim } => GroupElement::Lattice(vec![0; *dim]),
            GroupSpec::Free { .. } => GroupElement::Free(Vec::new()),
            GroupSpec::Heisenberg => GroupElement::Heisenberg([0; 3]),
            GroupSpec::Cyclic { .. } => GroupElement::Cyclic(0),
            GroupSpec::Product { factors } => GroupElement::Product(factors.iter().map(GroupSpec::identity).collect()),
        }
    }

    /// The standard symmetric generating set, without repetitions.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut gens = match self {
            GroupSpec::Lattice { dim } => {
                let mut out = Vec::with_capacity(2 * dim);
                for i in 0..*dim {
                    for s in [1, -1] {
                        let mut v = vec![0; *dim];
                        v[i] = s;
                        out.push(GroupElement::Lattice(v));
                    }
                }
                out
            }
            GroupSpec::Free { rank } => {
                (1..=*rank as i32).flat_map(|i| [GroupElement::Free(vec![i]), GroupElement::Free(vec![-i])]).collect()
            }
            GroupSpec::Heisenberg => vec![
                GroupElement::Heisenberg([1, 0, 0]),
                GroupElement::Heisenberg([-1, 0, 0]),
                GroupElement::Heisenberg([0, 1, 0]),
                GroupElement::Heisenberg([0, -1, 0]),
            ],
            GroupSpec::Cyclic { order } => {
                let g = 1 % order;
                let inv = (order - g) % order;
                vec![GroupElement::Cyclic(g), GroupElement::Cyclic(inv)]
            }
            GroupSpec::Product { factors } => {
                let mut out = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    for g in f.generators() {
                        let mut comps: Vec<GroupElement> = factors.iter().map(GroupSpec::identity).collect();
                        comps[i] = g;
                        out.push(GroupElement::Product(comps));
                    }
                }
                out
            }
        };
        let id = self.identity();
        gens.retain(|g| *g != id);
        gens.sort();
        gens.dedup();
        gens
    }

    /// Checks that `g` is a normal form for this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        match (self, g) {
            (GroupSpec::Lattice { dim }, GroupElement::Lattice(v)) if v.len() == *dim => Ok(()),
            (GroupSpec::Free { rank }, GroupElement::Free(w)) => {
                for (i, &l) in w.iter().enumerate() {
                    if l == 0 || l.unsigned_abs() as usize > *rank {
                        return Err(Error::Structural(format!("letter {l} out of range for rank {rank}")));
                    }
                    if i > 0 && w[i - 1] == -l {
                        return Err(Error::Structural("free word is not reduced".into()));
                    }
                }
                Ok(())
            }
            (GroupSpec::Heisenberg, GroupElement::Heisenberg(_)) => Ok(()),
            (GroupSpec::Cyclic { order }, GroupElement::Cyclic(k)) if k < order => Ok(()),
            (GroupSpec::Product { factors }, GroupElement::Product(comps)) if comps.len() == factors.len() => {
                factors.iter().zip(comps).try_for_each(|(f, c)| f.check(c))
            }
            _ => Err(Error::Structural(format!("element {g:?} does not belong to {self}"))),
        }
    }

    /// Group product `g * h` in normal form.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul_unchecked(g, h))
    }

    /// Product of two elements already known to be valid for `self`.
    pub(crate) fn mul_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (self, g, h) {
            (_, GroupElement::Lattice(a), GroupElement::Lattice(b)) => {
                GroupElement::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (_, GroupElement::Free(a), GroupElement::Free(b)) => GroupElement::Free(free_concat(a, b)),
            (_, GroupElement::Heisenberg(a), GroupElement::Heisenberg(b)) => {
                GroupElement::Heisenberg([a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]])
            }
            (GroupSpec::Cyclic { order }, GroupElement::Cyclic(a), GroupElement::Cyclic(b)) => {
                GroupElement::Cyclic(((*a as u128 + *b as u128) % *order as u128) as u64)
            }
            (GroupSpec::Product { factors }, GroupElement::Product(a), GroupElement::Product(b)) => {
                GroupElement::Product(
                    factors.iter().zip(a.iter().zip(b)).map(|(f, (x, y))| f.mul_unchecked(x, y)).collect(),
                )
            }
            _ => unreachable!("mul_unchecked called with mismatched kinds"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.inv_unchecked(g))
    }

    pub(crate) fn inv_unchecked(&self, g: &GroupElement) -> GroupElement {
        match (self, g) {
            (_, GroupElement::Lattice(v)) => GroupElement::Lattice(v.iter().map(|x| -x).collect()),
            (_, GroupElement::Free(w)) => GroupElement::Free(w.iter().rev().map(|l| -l).collect()),
            (_, GroupElement::Heisenberg([a, b, c])) => GroupElement::Heisenberg([-a, -b, a * b - c]),
            (GroupSpec::Cyclic { order }, GroupElement::Cyclic(k)) => GroupElement::Cyclic((order - k) % order),
            (GroupSpec::Product { factors }, GroupElement::Product(comps)) => {
                GroupElement::Product(factors.iter().zip(comps).map(|(f, c)| f.inv_unchecked(c)).collect())
            }
            _ => unreachable!("inv_unchecked called with mismatched kinds"),
        }
    }

    /// Word length with respect to the standard generating set.
    pub fn word_length(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        self.length_unchecked(g)
    }

    pub(crate) fn length_unchecked(&self, g: &GroupElement) -> Result<u64> {
        match (self, g) {
            (_, GroupElement::Lattice(v)) => Ok(v.iter().map(|x| x.unsigned_abs()).sum()),
            (_, GroupElement::Free(w)) => Ok(w.len() as u64),
            (_, GroupElement::Heisenberg(t)) => heisenberg::word_length(*t, DEFAULT_BALL_CAP),
            (GroupSpec::Cyclic { order }, GroupElement::Cyclic(k)) => Ok((*k).min(order - k)),
            (GroupSpec::Product { factors }, GroupElement::Product(comps)) => {
                let mut total = 0;
                for (f, c) in factors.iter().zip(comps) {
                    total += f.length_unchecked(c)?;
                }
                Ok(total)
            }
            _ => unreachable!("length_unchecked called with mismatched kinds"),
        }
    }

    /// Radius of the smallest identity-centred ball containing `set`.
    pub fn circumscribing_radius<'a, I>(&self, set: I) -> Result<u64>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut radius = None;
        for g in set {
            let len = self.word_length(g)?;
            radius = Some(radius.map_or(len, |r: u64| r.max(len)));
        }
        radius.ok_or_else(|| Error::Domain("circumscribing radius of an empty set".into()))
    }

    /// Parses an element from a word (`"x y^-1 x"`), a tuple (`"(3,-2)"`),
    /// `"e"` for the identity, or `" | "`-separated components for products.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        parse::parse_element(self, text)
    }

    /// Inverse of [`GroupSpec::parse_element`].
    pub fn format_element(&self, g: &GroupElement) -> String {
        parse::format_element(self, g)
    }
}

/// Concatenates two reduced words and cancels at the seam.
fn free_concat(a: &[i32], b: &[i32]) -> Vec<i32> {
    let mut cancel = 0;
    while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == -b[cancel] {
        cancel += 1;
    }
    let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
    out.extend_from_slice(&a[..a.len() - cancel]);
    out.extend_from_slice(&b[cancel..]);
    out
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Lattice { dim } => write!(f, "z:{dim}"),
            GroupSpec::Free { rank } => write!(f, "free:{rank}"),
            GroupSpec::Heisenberg => write!(f, "heisenberg"),
            GroupSpec::Cyclic { order } => write!(f, "cyclic:{order}"),
            GroupSpec::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `z:2`, `lattice:2`, `free:2`, `heisenberg`, `cyclic:5` and
    /// `*`-joined products such as `z:1*free:2`.
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_spec(s)
    }
}
