//! Lower bounds from one-dimensional unitary characters.
//!
//! Every character `chi` extends to a contractive homomorphism on the
//! `l1` algebra, so `|chi(a)| <= r_l1(a)`. Characters are sampled through
//! the abelianization of each supported group.

use num_complex::Complex64;

use crate::algebra::AlgElement;
use crate::groups::{GroupElement, GroupSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Axis {
    Integer,
    Mod(u64),
}

fn axes(spec: &GroupSpec, out: &mut Vec<Axis>) {
    match spec {
        GroupSpec::Lattice { dim } => out.extend(std::iter::repeat_n(Axis::Integer, *dim)),
        GroupSpec::Free { rank } => out.extend(std::iter::repeat_n(Axis::Integer, *rank)),
        GroupSpec::Heisenberg => out.extend([Axis::Integer, Axis::Integer]),
        GroupSpec::Cyclic { order } => out.push(Axis::Mod(*order)),
        GroupSpec::Product { factors } => factors.iter().for_each(|f| axes(f, out)),
    }
}

fn abelianize(spec: &GroupSpec, g: &GroupElement, out: &mut Vec<i64>) {
    match (spec, g) {
        (_, GroupElement::Lattice(v)) => out.extend(v),
        (GroupSpec::Free { rank }, GroupElement::Free(w)) => {
            let start = out.len();
            out.extend(std::iter::repeat_n(0, *rank));
            for &l in w {
                out[start + l.unsigned_abs() as usize - 1] += l.signum() as i64;
            }
        }
        (_, GroupElement::Heisenberg(t)) => out.extend([t[0], t[1]]),
        (_, GroupElement::Cyclic(k)) => out.push(*k as i64),
        (GroupSpec::Product { factors }, GroupElement::Product(cs)) => {
            factors.iter().zip(cs).for_each(|(f, c)| abelianize(f, c, out))
        }
        _ => unreachable!("element does not belong to the spec"),
    }
}

/// Largest `|chi(a)|` over a sample of at most `budget` characters, minus a
/// rounding allowance.
pub(crate) fn character_lower_bound(a: &AlgElement, budget: usize) -> f64 {
    let spec = a.spec();
    let mut ax = Vec::new();
    axes(spec, &mut ax);
    let coords: Vec<(Vec<i64>, Complex64)> = a
        .terms()
        .iter()
        .map(|(g, c)| {
            let mut v = Vec::with_capacity(ax.len());
            abelianize(spec, g, &mut v);
            (v, *c)
        })
        .collect();
    // points per axis, equal for all Integer axes
    let dims = ax.len().max(1) as u32;
    let per_axis = ((budget as f64).powf(1.0 / dims as f64).floor() as u64).max(1);
    let steps: Vec<u64> = ax
        .iter()
        .map(|x| match x {
            Axis::Integer => per_axis,
            Axis::Mod(n) => (*n).min(per_axis),
        })
        .collect();
    let total: u64 = steps.iter().product();
    let mut best: f64 = 0.0;
    let mut idx = vec![0u64; ax.len()];
    for _ in 0..total.max(1) {
        let angles: Vec<f64> = ax
            .iter()
            .zip(&idx)
            .zip(&steps)
            .map(|((x, &i), &s)| match x {
                Axis::Integer => std::f64::consts::TAU * i as f64 / s as f64,
                Axis::Mod(n) => {
                    let k = i * (*n / s);
                    std::f64::consts::TAU * k as f64 / *n as f64
                }
            })
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (v, c) in &coords {
            let phase: f64 = v.iter().zip(&angles).map(|(k, t)| *k as f64 * t).sum();
            sum += c * Complex64::from_polar(1.0, phase);
        }
        best = best.max(sum.norm());
        for (i, s) in idx.iter_mut().zip(&steps) {
            *i += 1;
            if *i < *s {
                break;
            }
            *i = 0;
        }
    }
    let allowance = 8.0 * f64::EPSILON * (a.len() as f64 + 1.0) * a.l1();
    (best - allowance).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_character_sees_positive_elements() {
        let spec = GroupSpec::free(2);
        let s = AlgElement::indicator(spec.clone(), &spec.generators()).unwrap();
        assert!((character_lower_bound(&s, 1 << 12) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn abelian_shadow_of_a_free_element() {
        // yx + i yx^2 + i y abelianizes to e^{it}(1 + 2i cos t), max modulus sqrt 5
        let spec = GroupSpec::free(2);
        let a = AlgElement::from_terms(
            spec,
            vec![
                (GroupElement::Free(vec![2, 1]), Complex64::new(1.0, 0.0)),
                (GroupElement::Free(vec![2, 1, 1]), Complex64::new(0.0, 1.0)),
                (GroupElement::Free(vec![2]), Complex64::new(0.0, 1.0)),
            ],
        )
        .unwrap();
        let lb = character_lower_bound(&a, 1 << 14);
        assert!(lb <= 5f64.sqrt() + 1e-12 && lb > 2.2, "{lb}");
    }
}
