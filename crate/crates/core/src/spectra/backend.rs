//! Elements that can be squared with renormalization.
//!
//! Two representations share the estimator drivers: plain sparse elements,
//! and radial elements of a free group, which are stored by sphere and stay
//! small no matter how large their supports become.

use num_complex::Complex64;

use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::groups::GroupSpec;

/// Operations the squaring drivers need.
pub(crate) trait PowerElement: Sized {
    fn l1(&self) -> f64;
    /// `ln ||x||_2`.
    fn log_l2(&self) -> f64;
    /// `x^2` together with the `l1` mass discarded by truncation.
    fn square(&self) -> Result<(Self, f64)>;
    fn scaled(&self, s: f64) -> Self;
    /// `x* x`.
    fn adjoint_square(&self) -> Result<Self>;
    /// `ln sum_j (j+1) ||x_j||_2`, the Haagerup bound for the reduced norm on
    /// free groups (`x_j` is the part of `x` on the sphere of radius `j`).
    fn log_haagerup(&self) -> Option<f64>;
    fn is_zero(&self) -> bool;
    /// Rough count of coefficient products one square costs.
    fn work(&self) -> usize;
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Sparse element with optional truncation of tiny coefficients.
#[derive(Clone, Debug)]
pub(crate) struct Sparse {
    pub elem: AlgElement,
    /// Relative truncation threshold, applied after each square when set.
    pub truncation: Option<f64>,
    pub cap: usize,
}

impl Sparse {
    pub fn new(elem: AlgElement, truncation: f64, cap: usize) -> Self {
        let truncation = (!elem.spec().has_subexponential_growth()).then_some(truncation);
        Sparse { elem, truncation, cap }
    }
}

impl PowerElement for Sparse {
    fn l1(&self) -> f64 {
        self.elem.l1()
    }

    fn log_l2(&self) -> f64 {
        self.elem.l2().ln()
    }

    fn square(&self) -> Result<(Self, f64)> {
        let sq = self.elem.convolve_capped(&self.elem, self.cap)?;
        let (sq, dropped) = match self.truncation {
            Some(rel) => sq.truncate(rel),
            None => (sq, 0.0),
        };
        Ok((Sparse { elem: sq, ..self.clone() }, dropped))
    }

    fn scaled(&self, s: f64) -> Self {
        Sparse { elem: self.elem.scale(&Complex64::new(s, 0.0)), ..self.clone() }
    }

    fn adjoint_square(&self) -> Result<Self> {
        let p = self.elem.involution().convolve_capped(&self.elem, self.cap)?;
        Ok(Sparse { elem: p, ..self.clone() })
    }

    fn log_haagerup(&self) -> Option<f64> {
        if !matches!(self.elem.spec(), GroupSpec::Free { .. }) {
            return None;
        }
        let mut spheres: Vec<f64> = Vec::new();
        for (g, c) in self.elem.terms() {
            let crate::groups::GroupElement::Free(w) = g else {
                return None;
            };
            if spheres.len() <= w.len() {
                spheres.resize(w.len() + 1, 0.0);
            }
            spheres[w.len()] += c.norm_sqr();
        }
        Some(log_sum_exp(
            spheres.iter().enumerate().filter(|(_, s)| **s > 0.0).map(|(j, s)| ((j + 1) as f64).ln() + 0.5 * s.ln()),
        ))
    }

    fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    fn work(&self) -> usize {
        self.elem.len().saturating_mul(self.elem.len())
    }
}

/// Radial element of the free group of rank `k`: constant on each sphere.
///
/// `mass[j]` is the total coefficient carried by the sphere of radius `j`,
/// so the element equals `sum_j mass[j] * nu_j` with `nu_j` the uniform
/// probability measure on that sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialFree {
    pub rank: usize,
    pub mass: Vec<Complex64>,
}

impl RadialFree {
    fn q(&self) -> f64 {
        2.0 * self.rank as f64 - 1.0
    }

    /// `ln |S_j|`.
    pub fn log_sphere(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            (2.0 * self.rank as f64).ln() + (j - 1) as f64 * self.q().ln()
        }
    }

    /// Recognises radial elements of a free group; `None` for anything else.
    pub fn from_element(a: &AlgElement) -> Option<Self> {
        let GroupSpec::Free { rank } = a.spec() else {
            return None;
        };
        let rank = *rank;
        if rank < 2 {
            return None;
        }
        let mut per_sphere: Vec<(u64, Option<Complex64>)> = Vec::new();
        for (g, c) in a.terms() {
            let crate::groups::GroupElement::Free(w) = g else {
                return None;
            };
            let j = w.len();
            if per_sphere.len() <= j {
                per_sphere.resize(j + 1, (0, None));
            }
            let slot = &mut per_sphere[j];
            match slot.1 {
                Some(prev) if prev != *c => return None,
                _ => slot.1 = Some(*c),
            }
            slot.0 += 1;
        }
        let q = 2 * rank as u64 - 1;
        let mut mass = Vec::with_capacity(per_sphere.len());
        for (j, (count, coeff)) in per_sphere.into_iter().enumerate() {
            let size = if j == 0 { 1u128 } else { 2 * rank as u128 * (q as u128).checked_pow(j as u32 - 1)? };
            match coeff {
                None => mass.push(Complex64::new(0.0, 0.0)),
                Some(c) if count as u128 == size => mass.push(c * size as f64),
                Some(_) => return None,
            }
        }
        Some(RadialFree { rank, mass })
    }

    /// `P(cancel >= t)` for the product of uniform words long enough not to
    /// run out of letters, truncated where it underflows.
    fn cancellation_tail(&self, max_t: usize) -> Vec<f64> {
        let k2 = 2.0 * self.rank as f64;
        let q = self.q();
        let mut tail = vec![1.0];
        let mut p = 1.0 / k2;
        while tail.len() <= max_t + 1 && p > 0.0 {
            tail.push(p);
            p /= q;
        }
        tail
    }

    pub fn multiply(&self, other: &RadialFree) -> Result<RadialFree> {
        if self.rank != other.rank {
            return Err(Error::Structural("radial product over different free groups".into()));
        }
        let zero = Complex64::new(0.0, 0.0);
        let len = self.mass.len() + other.mass.len() - 1;
        let tail = self.cancellation_tail(self.mass.len().min(other.mass.len()));
        let at_least = |t: usize| tail.get(t).copied().unwrap_or(0.0);
        let mut out = vec![zero; len];
        for (i, a) in self.mass.iter().enumerate() {
            if *a == zero {
                continue;
            }
            for (j, b) in other.mass.iter().enumerate() {
                if *b == zero {
                    continue;
                }
                let ab = a * b;
                // the cancellation length t is exactly t with probability
                // P(>= t) - P(>= t+1), except that it cannot exceed min(i, j)
                let m = i.min(j);
                for t in 0..=m {
                    let p = if t == m { at_least(t) } else { at_least(t) - at_least(t + 1) };
                    if p == 0.0 {
                        break;
                    }
                    out[i + j - 2 * t] += ab * p;
                }
            }
        }
        while out.len() > 1 && out.last() == Some(&zero) {
            out.pop();
        }
        Ok(RadialFree { rank: self.rank, mass: out })
    }

    pub fn adjoint(&self) -> RadialFree {
        RadialFree { rank: self.rank, mass: self.mass.iter().map(|c| c.conj()).collect() }
    }
}

impl PowerElement for RadialFree {
    fn l1(&self) -> f64 {
        self.mass.iter().map(|c| c.norm()).sum()
    }

    fn log_l2(&self) -> f64 {
        // ||x||_2^2 = sum_j |mass_j|^2 / |S_j|
        0.5 * log_sum_exp(
            self.mass
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(j, c)| 2.0 * c.norm().ln() - self.log_sphere(j)),
        )
    }

    fn square(&self) -> Result<(Self, f64)> {
        Ok((self.multiply(self)?, 0.0))
    }

    fn scaled(&self, s: f64) -> Self {
        RadialFree { rank: self.rank, mass: self.mass.iter().map(|c| c * s).collect() }
    }

    fn adjoint_square(&self) -> Result<Self> {
        self.adjoint().multiply(self)
    }

    fn log_haagerup(&self) -> Option<f64> {
        // ||x_j||_2 = |mass_j| / sqrt(|S_j|)
        Some(log_sum_exp(
            self.mass
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(j, c)| ((j + 1) as f64).ln() + c.norm().ln() - 0.5 * self.log_sphere(j)),
        ))
    }

    fn is_zero(&self) -> bool {
        self.mass.iter().all(|c| c.norm() == 0.0)
    }

    fn work(&self) -> usize {
        self.mass.len().saturating_mul(self.mass.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi_s(rank: usize) -> AlgElement {
        let spec = GroupSpec::free(rank);
        AlgElement::indicator(spec.clone(), &spec.generators()).unwrap()
    }

    #[test]
    fn radial_detection() {
        let r = RadialFree::from_element(&chi_s(2)).unwrap();
        assert_eq!(r.mass, vec![Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0)]);
        let spec = GroupSpec::free(2);
        let x = AlgElement::delta(spec.clone(), crate::groups::GroupElement::Free(vec![1]), Complex64::new(1.0, 0.0))
            .unwrap();
        assert!(RadialFree::from_element(&x).is_none());
        assert!(RadialFree::from_element(&AlgElement::unit(spec)).is_some());
    }

    #[test]
    fn radial_powers_match_sparse() {
        for rank in [2usize, 3] {
            let a = chi_s(rank);
            let mut sparse = AlgElement::unit(a.spec().clone());
            let r = RadialFree::from_element(&a).unwrap();
            let mut radial = RadialFree::from_element(&sparse).unwrap();
            for _ in 0..5 {
                sparse = sparse.convolve(&a).unwrap();
                radial = radial.multiply(&r).unwrap();
                let expected = RadialFree::from_element(&sparse).expect("powers of chi_S are radial");
                assert_eq!(expected.mass.len(), radial.mass.len());
                for (x, y) in expected.mass.iter().zip(&radial.mass) {
                    assert!((x - y).norm() <= 1e-9 * x.norm().max(1.0), "{x} vs {y}");
                }
                let sp = Sparse::new(sparse.clone(), 1e-14, usize::MAX);
                assert!((sp.log_l2() - radial.log_l2()).abs() < 1e-12);
                assert!((sp.log_haagerup().unwrap() - radial.log_haagerup().unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn radial_general_product() {
        // (chi_S^2) * (chi_S^3) through the general product
        let a = chi_s(2);
        let r1 = RadialFree::from_element(&a).unwrap();
        let r2 = r1.multiply(&r1).unwrap();
        let r3 = r2.multiply(&r1).unwrap();
        let r5 = r2.multiply(&r3).unwrap();
        let sparse = a.power(5).unwrap();
        let expected = RadialFree::from_element(&sparse).unwrap();
        for (x, y) in expected.mass.iter().zip(&r5.mass) {
            assert!((x - y).norm() <= 1e-9 * x.norm().max(1.0));
        }
    }
}
