//! Free-subsemigroup certificates for `||a^n||_1 = ||a||_1^n`.

use std::collections::{BTreeSet, HashSet};

use num_complex::Complex64;

use crate::algebra::{AlgElement, Coefficient, GaussianRational};
use crate::error::{Error, Result};
use crate::groups::GroupElement;

/// True when the support of `a` is a finite set of free-group words that
/// freely generates a free subsemigroup with no cancellation between
/// factors; then distinct products of support words are distinct reduced
/// words and `||a^n||_1 = ||a||_1^n` for every `n`.
pub fn support_generates_free_semigroup(a: &AlgElement) -> bool {
    let mut words: Vec<&[i32]> = Vec::new();
    for (g, _) in a.terms() {
        match g {
            GroupElement::Free(w) if !w.is_empty() => words.push(w),
            _ => return false,
        }
    }
    if words.is_empty() {
        return false;
    }
    for u in &words {
        for v in &words {
            if u[u.len() - 1] == -v[0] {
                return false;
            }
        }
    }
    is_code(&words)
}

/// Sardinas-Patterson test for unique decipherability.
fn is_code(words: &[&[i32]]) -> bool {
    let code: HashSet<&[i32]> = words.iter().copied().collect();
    let mut current: BTreeSet<Vec<i32>> = BTreeSet::new();
    for u in words {
        for v in words {
            if u.len() < v.len() && v.starts_with(u) {
                current.insert(v[u.len()..].to_vec());
            }
        }
    }
    let mut seen: BTreeSet<BTreeSet<Vec<i32>>> = BTreeSet::new();
    while !current.is_empty() {
        if current.iter().any(|s| code.contains(s.as_slice())) {
            return false;
        }
        if !seen.insert(current.clone()) {
            return true;
        }
        let mut next = BTreeSet::new();
        for s in &current {
            for w in words {
                if w.len() < s.len() && s.starts_with(w) {
                    next.insert(s[w.len()..].to_vec());
                } else if s.len() < w.len() && w.starts_with(s) {
                    next.insert(w[s.len()..].to_vec());
                }
            }
        }
        current = next;
    }
    true
}

/// Largest `N` accepted by [`free_semigroup_l1_probe`].
pub const PROBE_MAX_POWER: u32 = 12;

/// Checks `||a^n||_1 = ||a||_1^n` for all `n <= big_n` by exact convolution.
///
/// `||a^n||_1 = ||a||_1^n` holds exactly when `|a^n| = |a|^n` pointwise. When
/// every coefficient modulus is rational this is decided in exact
/// arithmetic; otherwise moduli are compared with relative tolerance 1e-12.
pub fn free_semigroup_l1_probe(a: &AlgElement, big_n: u32, cap: usize) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Domain("probe of the zero element".into()));
    }
    if big_n > PROBE_MAX_POWER {
        return Err(Error::Domain(format!("probe power {big_n} exceeds {PROBE_MAX_POWER}")));
    }
    let exact = a.to_exact()?;
    let moduli: Option<Vec<(GroupElement, GaussianRational)>> = exact
        .terms()
        .iter()
        .map(|(g, c)| {
            c.rational_modulus()
                .map(|m| (g.clone(), GaussianRational::new(m, num_rational::BigRational::from_integer(0.into()))))
        })
        .collect();
    match moduli {
        Some(m) => {
            let abs = AlgElement::from_terms(a.spec().clone(), m)?;
            let (mut p, mut q) = (exact.clone(), abs.clone());
            for n in 1..=big_n {
                if n > 1 {
                    p = p.convolve_capped(&exact, cap)?;
                    q = q.convolve_capped(&abs, cap)?;
                }
                if p.len() != q.len() {
                    return Ok(false);
                }
                for ((g, c), (h, d)) in p.terms().iter().zip(q.terms()) {
                    if g != h || c.abs_sqr() != d.abs_sqr() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        None => {
            let abs = a.abs();
            let (mut p, mut q) = (a.clone(), abs.clone());
            for n in 1..=big_n {
                if n > 1 {
                    p = p.convolve_capped(a, cap)?;
                    q = q.convolve_capped(&abs, cap)?;
                }
                let scale = q.l1();
                for (g, d) in q.terms() {
                    let c: Complex64 = p.coefficient(g);
                    if (c.norm() - d.re).abs() > 1e-12 * scale {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}
