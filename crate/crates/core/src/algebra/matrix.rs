use std::collections::BTreeSet;

use num_complex::Complex64;

use super::coeff::Coefficient;
use super::element::AlgElement;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

/// Square matrix over the group algebra, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAlgElement<C = Complex64> {
    spec: GroupSpec,
    size: usize,
    entries: Vec<AlgElement<C>>,
}

impl<C: Coefficient> MatrixAlgElement<C> {
    pub fn from_entries(spec: GroupSpec, size: usize, entries: Vec<AlgElement<C>>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::Structural(format!(
                "expected {} entries for a {size}x{size} matrix, got {}",
                size * size,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| *e.spec() != spec) {
            return Err(Error::Structural(format!("entry over {} in a matrix over {spec}", bad.spec())));
        }
        Ok(MatrixAlgElement { spec, size, entries })
    }

    pub fn zeros(spec: GroupSpec, size: usize) -> Self {
        let entries = (0..size * size).map(|_| AlgElement::zero(spec.clone())).collect();
        MatrixAlgElement { spec, size, entries }
    }

    pub fn identity(spec: GroupSpec, size: usize) -> Self {
        let mut m = Self::zeros(spec.clone(), size);
        for i in 0..size {
            m.entries[i * size + i] = AlgElement::unit(spec.clone());
        }
        m
    }

    /// `diag(a, 0, ..., 0)` of the given size.
    pub fn corner(a: &AlgElement<C>, size: usize) -> Self {
        let mut m = Self::zeros(a.spec().clone(), size);
        m.entries[0] = a.clone();
        m
    }

    pub fn diagonal(diag: &[AlgElement<C>]) -> Result<Self> {
        let first = diag.first().ok_or_else(|| Error::Structural("empty diagonal".into()))?;
        let size = diag.len();
        let mut m = Self::zeros(first.spec().clone(), size);
        for (i, d) in diag.iter().enumerate() {
            if d.spec() != first.spec() {
                return Err(Error::Structural("diagonal entries over different groups".into()));
            }
            m.entries[i * size + i] = d.clone();
        }
        Ok(m)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgElement<C> {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[AlgElement<C>] {
        &self.entries
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec || self.size != other.size {
            return Err(Error::Structural("matrix product of incompatible shapes or groups".into()));
        }
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = AlgElement::zero(self.spec.clone());
                for k in 0..n {
                    let (a, b) = (self.entry(i, k), other.entry(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.convolve(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(MatrixAlgElement { spec: self.spec.clone(), size: n, entries })
    }

    pub fn power(&self, n: u32) -> Result<Self> {
        let mut acc = Self::identity(self.spec.clone(), self.size);
        for _ in 0..n {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Conjugate transpose with entrywise involution.
    pub fn involution(&self) -> Self {
        let n = self.size;
        let entries = (0..n * n).map(|idx| self.entry(idx % n, idx / n).involution()).collect();
        MatrixAlgElement { spec: self.spec.clone(), size: n, entries }
    }

    /// Union of the entry supports.
    pub fn support(&self) -> BTreeSet<GroupElement> {
        self.entries.iter().flat_map(|e| e.support().cloned()).collect()
    }

    /// Entrywise-summed norm `sum_ij ||a_ij||`.
    pub fn summed_norm(&self, norm: impl Fn(&AlgElement<C>) -> Result<f64>) -> Result<f64> {
        self.entries.iter().map(norm).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_support_in_product_of_supports() {
        let z = GroupSpec::lattice(1);
        let e = |k: i64, v: f64| AlgElement::delta(z.clone(), GroupElement::Lattice(vec![k]), c(v)).unwrap();
        let m = MatrixAlgElement::from_entries(
            z.clone(),
            2,
            vec![e(1, 1.0), e(-1, 2.0), e(0, 1.0), AlgElement::zero(z.clone())],
        )
        .unwrap();
        let sq = m.multiply(&m).unwrap();
        let supp = m.support();
        let mut prod = BTreeSet::new();
        for g in &supp {
            for h in &supp {
                prod.insert(z.multiply(g, h).unwrap());
            }
        }
        assert!(sq.support().is_subset(&prod));
    }

    #[test]
    fn shape_errors() {
        let z = GroupSpec::lattice(1);
        assert!(MatrixAlgElement::<Complex64>::from_entries(z.clone(), 2, vec![]).is_err());
        let a = MatrixAlgElement::<Complex64>::identity(z.clone(), 2);
        let b = MatrixAlgElement::<Complex64>::identity(z, 3);
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn involution_reverses_products() {
        let z = GroupSpec::lattice(1);
        let e = |k: i64, re: f64, im: f64| {
            AlgElement::delta(z.clone(), GroupElement::Lattice(vec![k]), Complex64::new(re, im)).unwrap()
        };
        let a = MatrixAlgElement::from_entries(
            z.clone(),
            2,
            vec![e(1, 1.0, 1.0), e(0, 2.0, 0.0), e(-2, 0.0, 1.0), e(3, 1.0, 0.0)],
        )
        .unwrap();
        let b = MatrixAlgElement::from_entries(
            z.clone(),
            2,
            vec![e(0, 1.0, 0.0), e(1, 0.0, -1.0), e(2, 3.0, 0.0), e(-1, 1.0, 2.0)],
        )
        .unwrap();
        let lhs = a.multiply(&b).unwrap().involution();
        let rhs = b.involution().multiply(&a.involution()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
