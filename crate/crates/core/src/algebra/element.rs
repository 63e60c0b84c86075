use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coeff::{Coefficient, GaussianRational, FLOAT_PURGE};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

/// Below this many term pairs a product is folded on the calling thread.
const PARALLEL_PAIRS: usize = 1 << 14;
/// Upper bound on contributions materialised per parallel block.
const BLOCK_PAIRS: usize = 1 << 20;

/// Finitely supported element of the group algebra.
///
/// Terms are kept sorted by normal form and carry no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElement<C = Complex64> {
    spec: GroupSpec,
    terms: Vec<(GroupElement, C)>,
}

/// `l1`, `l2` and weighted `l2` norms of an element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    /// `sqrt(sum |a_g|^2 (1+|g|)^{2s})`.
    pub weighted_l2: f64,
    pub s: f64,
}

impl<C: Coefficient> AlgElement<C> {
    /// Sums duplicate keys and drops zero coefficients.
    pub fn from_terms<I>(spec: GroupSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, C)>,
    {
        spec.validate()?;
        let mut map: HashMap<GroupElement, C> = HashMap::new();
        for (g, c) in terms {
            spec.check(&g)?;
            match map.get_mut(&g) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(g, c);
                }
            }
        }
        Ok(Self::from_map(spec, map))
    }

    fn from_map(spec: GroupSpec, map: HashMap<GroupElement, C>) -> Self {
        let threshold = FLOAT_PURGE;
        let mut terms: Vec<(GroupElement, C)> = map.into_iter().filter(|(_, c)| !c.is_negligible(threshold)).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        AlgElement { spec, terms }
    }

    /// Drops coefficients with modulus at most `threshold` (exact zeros only
    /// for exact coefficient rings).
    pub fn purge(&self, threshold: f64) -> Self {
        AlgElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().filter(|(_, c)| !c.is_negligible(threshold)).cloned().collect(),
        }
    }

    pub fn zero(spec: GroupSpec) -> Self {
        AlgElement { spec, terms: Vec::new() }
    }

    /// `c * delta_g`.
    pub fn delta(spec: GroupSpec, g: GroupElement, c: C) -> Result<Self> {
        Self::from_terms(spec, [(g, c)])
    }

    /// The unit `delta_e`.
    pub fn unit(spec: GroupSpec) -> Self {
        let e = spec.identity();
        AlgElement { spec, terms: vec![(e, C::one())] }
    }

    /// `chi_S`: coefficient one on every element of `set`.
    pub fn indicator<'a, I>(spec: GroupSpec, set: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut elems: Vec<GroupElement> = set.into_iter().cloned().collect();
        if elems.is_empty() {
            return Err(Error::Domain("indicator of an empty set".into()));
        }
        elems.sort();
        elems.dedup();
        for g in &elems {
            spec.check(g)?;
        }
        spec.validate()?;
        Ok(AlgElement { spec, terms: elems.into_iter().map(|g| (g, C::one())).collect() })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn terms(&self) -> &[(GroupElement, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.iter().map(|(g, _)| g)
    }

    pub fn coefficient(&self, g: &GroupElement) -> C {
        match self.terms.binary_search_by(|(h, _)| h.cmp(g)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    /// Canonical trace: the coefficient at the identity.
    pub fn trace(&self) -> C {
        self.coefficient(&self.spec.identity())
    }

    fn same_spec(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::Structural(format!("group mismatch: {} vs {}", self.spec, other.spec)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        let mut map: HashMap<GroupElement, C> = self.terms.iter().cloned().collect();
        for (g, c) in &other.terms {
            map.entry(g.clone()).and_modify(|a| *a = a.add(c)).or_insert_with(|| c.clone());
        }
        Ok(Self::from_map(self.spec.clone(), map))
    }

    pub fn scale(&self, c: &C) -> Self {
        let threshold = FLOAT_PURGE;
        AlgElement {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .map(|(g, a)| (g.clone(), a.mul(c)))
                .filter(|(_, a)| !a.is_negligible(threshold))
                .collect(),
        }
    }

    /// Left translation `delta_g * a`.
    pub fn translate_left(&self, g: &GroupElement) -> Result<Self> {
        self.spec.check(g)?;
        let mut terms: Vec<_> = self.terms.iter().map(|(h, c)| (self.spec.mul_unchecked(g, h), c.clone())).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(AlgElement { spec: self.spec.clone(), terms })
    }

    /// `(a * b)(g) = sum_h a(h) b(h^-1 g)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.convolve_capped(other, usize::MAX)
    }

    /// Convolution that fails once the result support exceeds `cap`.
    ///
    /// Contributions are folded in `(i, j)` term order whether or not the
    /// group products are computed in parallel, so results are bit-identical
    /// to a sequential evaluation.
    pub fn convolve_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        self.same_spec(other)?;
        let spec = &self.spec;
        let mut map: HashMap<GroupElement, C> = HashMap::new();
        let fold = |g: GroupElement, c: C, map: &mut HashMap<GroupElement, C>| -> Result<()> {
            match map.get_mut(&g) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(g, c);
                    if map.len() > cap {
                        return Err(Error::Resource(format!("product support exceeded cap {cap}")));
                    }
                }
            }
            Ok(())
        };
        let pairs = self.terms.len().saturating_mul(other.terms.len());
        if pairs < PARALLEL_PAIRS {
            for (h, a) in &self.terms {
                for (k, b) in &other.terms {
                    fold(spec.mul_unchecked(h, k), a.mul(b), &mut map)?;
                }
            }
        } else {
            let rows_per_block = (BLOCK_PAIRS / other.terms.len().max(1)).max(1);
            for block in self.terms.chunks(rows_per_block) {
                let contributions: Vec<Vec<(GroupElement, C)>> = block
                    .par_iter()
                    .map(|(h, a)| other.terms.iter().map(|(k, b)| (spec.mul_unchecked(h, k), a.mul(b))).collect())
                    .collect();
                for row in contributions {
                    for (g, c) in row {
                        fold(g, c, &mut map)?;
                    }
                }
            }
        }
        Ok(Self::from_map(spec.clone(), map))
    }

    /// `a^n` by repeated multiplication (`a^0` is the unit).
    pub fn power(&self, n: u32) -> Result<Self> {
        let mut acc = Self::unit(self.spec.clone());
        for _ in 0..n {
            acc = acc.convolve(self)?;
        }
        Ok(acc)
    }

    /// `a*(g) = conj(a(g^-1))`.
    pub fn involution(&self) -> Self {
        let mut terms: Vec<(GroupElement, C)> =
            self.terms.iter().map(|(g, c)| (self.spec.inv_unchecked(g), c.conj())).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        AlgElement { spec: self.spec.clone(), terms }
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.involution() == *self
    }

    /// Pointwise `|a|^2`, exact in the coefficient ring.
    pub fn abs_sqr(&self) -> Self {
        AlgElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.abs_sqr())).collect(),
        }
    }

    pub fn l1(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.modulus()).sum()
    }

    pub fn l2(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.modulus().powi(2)).sum::<f64>().sqrt()
    }

    /// All three norms; the weighted one uses exponent `s`.
    pub fn norms(&self, s: f64) -> Result<Norms> {
        let mut weighted = 0.0;
        for (g, c) in &self.terms {
            let len = self.spec.length_unchecked(g)? as f64;
            weighted += c.modulus().powi(2) * (1.0 + len).powf(2.0 * s);
        }
        Ok(Norms { l1: self.l1(), l2: self.l2(), weighted_l2: weighted.sqrt(), s })
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> AlgElement<D> {
        let threshold = FLOAT_PURGE;
        AlgElement {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.clone(), f(c)))
                .filter(|(_, c)| !c.is_negligible(threshold))
                .collect(),
        }
    }

    pub fn to_complex(&self) -> AlgElement<Complex64> {
        self.map_coefficients(|c| c.to_complex())
    }
}

impl AlgElement<Complex64> {
    /// Pointwise absolute value `|a|`.
    pub fn abs(&self) -> Self {
        self.map_coefficients(|c| Complex64::new(c.norm(), 0.0))
    }

    /// Exact image in Gaussian rationals.
    pub fn to_exact(&self) -> Result<AlgElement<GaussianRational>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (g, c) in &self.terms {
            let q = GaussianRational::from_complex(*c)
                .ok_or_else(|| Error::Domain(format!("non-finite coefficient {c}")))?;
            terms.push((g.clone(), q));
        }
        Ok(AlgElement { spec: self.spec.clone(), terms })
    }

    /// Drops coefficients with modulus at most `rel * ||a||_1`; returns the
    /// truncated element and the discarded `l1` mass.
    pub fn truncate(&self, rel: f64) -> (Self, f64) {
        let cutoff = rel * self.l1();
        let mut dropped = 0.0;
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| {
                let keep = c.norm() > cutoff;
                if !keep {
                    dropped += c.norm();
                }
                keep
            })
            .cloned()
            .collect();
        (AlgElement { spec: self.spec.clone(), terms }, dropped)
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.re.is_finite() && c.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z() -> GroupSpec {
        GroupSpec::lattice(1)
    }

    fn zpow(k: i64) -> GroupElement {
        GroupElement::Lattice(vec![k])
    }

    #[test]
    fn square_of_x_plus_xinv_on_z() {
        let a = AlgElement::from_terms(z(), [(zpow(1), c(1.0, 0.0)), (zpow(-1), c(1.0, 0.0))]).unwrap();
        let sq = a.convolve(&a).unwrap();
        let expected =
            AlgElement::from_terms(z(), [(zpow(2), c(1.0, 0.0)), (zpow(0), c(2.0, 0.0)), (zpow(-2), c(1.0, 0.0))])
                .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn free_group_a_astar() {
        let f2 = GroupSpec::free(2);
        let a = AlgElement::from_terms(
            f2.clone(),
            [
                (f2.identity(), c(1.0, 0.0)),
                (GroupElement::Free(vec![1]), c(0.0, 1.0)),
                (GroupElement::Free(vec![-1]), c(0.0, 1.0)),
            ],
        )
        .unwrap();
        let astar = a.involution();
        assert_eq!(
            astar,
            AlgElement::from_terms(
                f2.clone(),
                [
                    (f2.identity(), c(1.0, 0.0)),
                    (GroupElement::Free(vec![1]), c(0.0, -1.0)),
                    (GroupElement::Free(vec![-1]), c(0.0, -1.0)),
                ],
            )
            .unwrap()
        );
        let prod = a.convolve(&astar).unwrap();
        let expected = AlgElement::from_terms(
            f2.clone(),
            [
                (f2.identity(), c(3.0, 0.0)),
                (GroupElement::Free(vec![1, 1]), c(1.0, 0.0)),
                (GroupElement::Free(vec![-1, -1]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(prod, expected);
        assert_eq!(a.l1(), 3.0);
        let unit = AlgElement::unit(f2);
        assert_eq!(a.convolve(&unit).unwrap(), a);
    }

    #[test]
    fn norms_examples() {
        let a = AlgElement::from_terms(z(), [(zpow(1), c(1.0, 0.0)), (zpow(-1), c(1.0, 0.0))]).unwrap();
        let n = a.norms(0.0).unwrap();
        assert_eq!(n.l1, 2.0);
        assert!((n.weighted_l2 - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(n.weighted_l2, n.l2);
        let d = AlgElement::delta(GroupSpec::lattice(2), GroupElement::Lattice(vec![2, -1]), c(1.0, 0.0)).unwrap();
        for s in [0.0, 0.5, 1.0, 2.5] {
            let w = d.norms(s).unwrap().weighted_l2;
            assert!((w - 4f64.powf(s)).abs() < 1e-12 * w);
        }
    }

    #[test]
    fn indicator_examples() {
        let s = [zpow(1), zpow(-1)];
        let chi = AlgElement::<Complex64>::indicator(z(), &s).unwrap();
        assert_eq!(chi.l1(), 2.0);
        assert!(chi.is_self_adjoint());
        let f2 = GroupSpec::free(2);
        let gens = f2.generators();
        let chi = AlgElement::<Complex64>::indicator(f2.clone(), &gens).unwrap();
        assert_eq!(chi.l1(), 4.0);
        assert!(chi.is_self_adjoint());
        let e = [f2.identity()];
        assert_eq!(AlgElement::<Complex64>::indicator(f2.clone(), &e).unwrap(), AlgElement::unit(f2.clone()));
        let empty: [GroupElement; 0] = [];
        assert!(matches!(AlgElement::<Complex64>::indicator(f2, &empty), Err(Error::Domain(_))));
    }

    #[test]
    fn involution_of_scalar() {
        let a = AlgElement::delta(z(), zpow(0), c(2.0, 3.0)).unwrap();
        assert_eq!(a.involution(), AlgElement::delta(z(), zpow(0), c(2.0, -3.0)).unwrap());
    }

    #[test]
    fn spec_mismatch() {
        let a = AlgElement::<Complex64>::unit(z());
        let b = AlgElement::<Complex64>::unit(GroupSpec::free(2));
        assert!(matches!(a.convolve(&b), Err(Error::Structural(_))));
    }

    #[test]
    fn cancellation_purges_zeros() {
        let a = AlgElement::from_terms(z(), [(zpow(1), c(1.0, 0.0)), (zpow(1), c(-1.0, 0.0))]).unwrap();
        assert!(a.is_zero());
    }

    #[test]
    fn parallel_path_matches_sequential_fold() {
        // large enough to cross PARALLEL_PAIRS
        let spec = GroupSpec::lattice(2);
        let mut terms = Vec::new();
        for i in -80..80i64 {
            terms.push((GroupElement::Lattice(vec![i, (i * 7) % 13]), c(1.0 / (1 + i.abs()) as f64, 0.3)));
        }
        let a = AlgElement::from_terms(spec.clone(), terms).unwrap();
        let p = a.convolve(&a).unwrap();
        // sequential reference with the same fold order
        let mut map: HashMap<GroupElement, Complex64> = HashMap::new();
        for (h, x) in a.terms() {
            for (k, y) in a.terms() {
                *map.entry(spec.mul_unchecked(h, k)).or_insert(c(0.0, 0.0)) += x * y;
            }
        }
        for (g, v) in p.terms() {
            assert_eq!(*v, map[g]);
        }
    }

    #[test]
    fn support_cap() {
        let f2 = GroupSpec::free(2);
        let gens = f2.generators();
        let chi = AlgElement::<Complex64>::indicator(f2, &gens).unwrap();
        let sq = chi.convolve(&chi).unwrap();
        assert!(matches!(sq.convolve_capped(&chi, 10), Err(Error::Resource(_))));
    }
}
