//! Reduced norms on abelian groups through the Fourier transform.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

use super::estimate::SpectralEstimate;

/// Most torus points a single evaluation may visit.
pub const MAX_GRID_POINTS: u64 = 1 << 26;

/// `sup |a^(theta)|` over the torus, sampled on a `grid^d` lattice.
///
/// `lower` is the sampled maximum; `upper` adds `L h` with
/// `L = sum |a_g| |g|_1` and `h = 2 pi / grid`. The trace holds the single pair
/// `(grid, lower)`.
pub fn fourier_opnorm_lattice(a: &AlgElement, grid: usize) -> Result<SpectralEstimate> {
    if grid < 8 {
        return Err(Error::Domain(format!("grid must be at least 8, got {grid}")));
    }
    let lower = reduce_moduli(a, grid, || 0.0, |m, x| m.max(x), f64::max)?;
    let h = std::f64::consts::TAU / grid as f64;
    let lipschitz: f64 = a
        .terms()
        .iter()
        .map(|(g, c)| match g {
            GroupElement::Lattice(v) => c.norm() * v.iter().map(|k| k.unsigned_abs() as f64).sum::<f64>(),
            _ => unreachable!("lattice element expected"),
        })
        .sum();
    let upper = lower + lipschitz * h;
    Ok(SpectralEstimate::new(lower, lower, upper, vec![(grid as u64, lower)], grid as u64))
}

/// Folds `|a^(theta)|` over the `grid^d` torus lattice in parallel.
pub(crate) fn reduce_moduli<T, I, F, R>(a: &AlgElement, grid: usize, init: I, fold: F, reduce: R) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send + Copy,
    F: Fn(T, f64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let GroupSpec::Lattice { dim } = a.spec() else {
        return Err(Error::Structural(format!("Fourier bound needs a lattice, got {}", a.spec())));
    };
    let dim = *dim;
    if grid < 8 {
        return Err(Error::Domain(format!("grid must be at least 8, got {grid}")));
    }
    let points = (grid as u64).checked_pow(dim as u32).filter(|p| *p <= MAX_GRID_POINTS);
    let Some(points) = points else {
        return Err(Error::Resource(format!("grid {grid}^{dim} exceeds {MAX_GRID_POINTS} points")));
    };
    let h = std::f64::consts::TAU / grid as f64;
    let terms: Vec<(&Vec<i64>, Complex64)> = a
        .terms()
        .iter()
        .map(|(g, c)| match g {
            GroupElement::Lattice(v) => (v, *c),
            _ => unreachable!("lattice element expected"),
        })
        .collect();
    // per-term, per-axis phase tables e^{i g_j t h}
    let tables: Vec<Vec<Vec<Complex64>>> = terms
        .iter()
        .map(|(v, _)| {
            v.iter()
                .map(|k| {
                    (0..grid as i64)
                        .map(|t| Complex64::from_polar(1.0, (k * t).rem_euclid(grid as i64) as f64 * h))
                        .collect()
                })
                .collect()
        })
        .collect();
    let modulus = |p: u64| {
        let mut idx = p;
        // grid >= 8 and grid^dim <= 2^26 keep dim below 16
        let mut coords = [0usize; 16];
        for c in coords[..dim].iter_mut() {
            *c = (idx % grid as u64) as usize;
            idx /= grid as u64;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for ((_, c), tab) in terms.iter().zip(&tables) {
            let mut z = *c;
            for (axis, t) in tab.iter().zip(&coords[..dim]) {
                z *= axis[*t];
            }
            sum += z;
        }
        sum.norm()
    };
    Ok((0..points).into_par_iter().fold(init, |acc, p| fold(acc, modulus(p))).reduce(init, reduce))
}

/// Exact reduced norm on a cyclic group: the maximum of the discrete Fourier
/// transform over all characters.
pub fn fourier_opnorm_cyclic(a: &AlgElement) -> Result<SpectralEstimate> {
    let GroupSpec::Cyclic { order } = a.spec() else {
        return Err(Error::Structural(format!("discrete Fourier bound needs a cyclic group, got {}", a.spec())));
    };
    let n = *order;
    if n > MAX_GRID_POINTS {
        return Err(Error::Resource(format!("cyclic order {n} exceeds {MAX_GRID_POINTS}")));
    }
    let terms: Vec<(u64, Complex64)> = a
        .terms()
        .iter()
        .map(|(g, c)| match g {
            GroupElement::Cyclic(k) => (*k, *c),
            _ => unreachable!("cyclic element expected"),
        })
        .collect();
    let max = (0..n)
        .into_par_iter()
        .map(|j| {
            terms
                .iter()
                .map(|(k, c)| {
                    // reduce k j mod n before converting to an angle
                    let r = ((*k as u128 * j as u128) % n as u128) as f64;
                    c * Complex64::from_polar(1.0, std::f64::consts::TAU * r / n as f64)
                })
                .sum::<Complex64>()
                .norm()
        })
        .reduce(|| 0.0, f64::max);
    Ok(SpectralEstimate::new(max, max, max, vec![(n, max)], n))
}
