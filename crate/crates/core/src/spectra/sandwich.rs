use serde::{Deserialize, Serialize};

use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::groups::{log_ball_volume, GroupElement, GroupSpec};

use super::backend::{PowerElement, Sparse};
use super::driver::{State, Step};
use super::estimate::{EstimatorOptions, SpectralEstimate};
use super::fourier::{reduce_moduli, MAX_GRID_POINTS};
use super::radius::l1_spectral_radius_with;

/// Ball enumeration cap for the growth factors.
const BALL_CAP: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// `||a^n||_2^(1/n) vol B(nR)^(1/2n)` for `n = 1, 2, 4, ...`.
    pub sandwich: SpectralEstimate,
    /// Plain `||a^n||_1^(1/n)` trace.
    pub gelfand: SpectralEstimate,
    /// `(n, vol B(nR)^(1/2n))`.
    pub growth_factors: Vec<(u64, f64)>,
    /// `R`, the circumscribing radius of the support.
    pub radius: u64,
}

pub fn subexp_sandwich_radius(a: &AlgElement, n_max: u64) -> Result<SandwichReport> {
    subexp_sandwich_radius_with(a, &EstimatorOptions::with_n_max(n_max))
}

/// Upper bounds for `r_l1(a)` from `||a^n||_1 <= sqrt(vol B(nR)) ||a^n||_2`.
///
/// Stops early, keeping what was computed, once ball volumes or supports
/// exceed their caps.
pub fn subexp_sandwich_radius_with(a: &AlgElement, opts: &EstimatorOptions) -> Result<SandwichReport> {
    if !a.spec().has_subexponential_growth() {
        return Err(Error::Domain(format!("{} has exponential growth", a.spec())));
    }
    let gelfand = l1_spectral_radius_with(a, opts, &[])?;
    let r = a.spec().circumscribing_radius(a.support())?;
    let log_l2 = match a.spec() {
        GroupSpec::Lattice { .. } => lattice_log_l2_powers(a, opts.n_max)?,
        _ => sparse_log_l2_powers(a, opts)?,
    };
    let mut trace = Vec::new();
    let mut factors = Vec::new();
    let mut upper = f64::INFINITY;
    for (n, log_norm) in log_l2 {
        let log_vol = match log_ball_volume(a.spec(), n * r, BALL_CAP) {
            Ok(v) => v,
            Err(e) if e.is_resource() => break,
            Err(e) => return Err(e),
        };
        let nf = n as f64;
        let factor = (log_vol / (2.0 * nf)).exp();
        let value = (log_norm / nf).exp() * factor;
        factors.push((n, factor));
        trace.push((n, value));
        upper = upper.min(value);
    }
    let upper = upper.min(gelfand.upper);
    let value = trace.last().map(|t| t.1).unwrap_or(upper);
    let sandwich = SpectralEstimate::new(value, gelfand.lower, upper, trace, opts.n_max);
    Ok(SandwichReport { sandwich, gelfand, growth_factors: factors, radius: r })
}

/// `(n, ln ||a^n||_2)` for `n = 1, 2, 4, ...` by renormalized squaring.
fn sparse_log_l2_powers(a: &AlgElement, opts: &EstimatorOptions) -> Result<Vec<(u64, f64)>> {
    let mut state = State::start(Sparse::new(a.clone(), opts.truncation, opts.support_cap));
    let mut out = Vec::new();
    loop {
        out.push((state.n, state.log_s + state.b.log_l2()));
        if state.n >= opts.n_max {
            return Ok(out);
        }
        match state.square(opts.pair_budget)? {
            Step::Next(s) => state = s,
            Step::Zero => {
                out.push((2 * state.n, f64::NEG_INFINITY));
                return Ok(out);
            }
            Step::Stopped => return Ok(out),
        }
    }
}

/// `(n, ln ||a^n||_2)` on a lattice by Parseval.
///
/// `|a^(theta)|^(2n)` is a trigonometric polynomial whose frequencies along
/// each axis stay below `n w` in absolute value (`w` the support width), so
/// the grid mean over `M > n w` points per axis is its exact constant term.
fn lattice_log_l2_powers(a: &AlgElement, n_max: u64) -> Result<Vec<(u64, f64)>> {
    let GroupSpec::Lattice { dim } = a.spec() else { unreachable!("lattice expected") };
    let dim = (*dim).max(1) as u32;
    let mut width = 0u64;
    for axis in 0..dim as usize {
        let coords = a.terms().iter().map(|(g, _)| match g {
            GroupElement::Lattice(v) => v.get(axis).copied().unwrap_or(0),
            _ => unreachable!("lattice element expected"),
        });
        let (lo, hi) = coords.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
        width = width.max(hi.abs_diff(lo));
    }
    let grid_for = |n: u64| ((n * width + 1).next_power_of_two()).max(8);
    let mut powers = Vec::new();
    let mut n = 1u64;
    while n <= n_max && grid_for(n).checked_pow(dim).is_some_and(|p| p <= MAX_GRID_POINTS) {
        powers.push(n);
        n *= 2;
    }
    let Some(&top) = powers.last() else {
        return Err(Error::Resource("Parseval grid exceeds the point budget".into()));
    };
    let grid = grid_for(top) as usize;
    let max = reduce_moduli(a, grid, || 0.0, |m, x| m.max(x), f64::max)?;
    let log_max = max.ln();
    let k = powers.len();
    let sums = reduce_moduli(
        a,
        grid,
        || vec![0.0; k],
        |mut acc: Vec<f64>, x| {
            let rel = x.ln() - log_max;
            for (slot, n) in acc.iter_mut().zip(&powers) {
                *slot += (2.0 * *n as f64 * rel).exp();
            }
            acc
        },
        |mut x, y| {
            x.iter_mut().zip(y).for_each(|(p, q)| *p += q);
            x
        },
    )?;
    let log_points = dim as f64 * (grid as f64).ln();
    Ok(powers.iter().zip(sums).map(|(n, s)| (*n, 0.5 * (2.0 * *n as f64 * log_max + s.ln() - log_points))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        let z = GroupSpec::lattice(1);
        let a = AlgElement::indicator(z.clone(), &z.generators()).unwrap();
        let rep = subexp_sandwich_radius(&a, 1024).unwrap();
        assert!((rep.gelfand.value - 2.0).abs() < 1e-12);
        assert!((rep.sandwich.value - 2.0).abs() < 0.01, "{}", rep.sandwich.value);
        let (n, f) = *rep.growth_factors.last().unwrap();
        assert!((f - ((2 * n + 1) as f64).powf(1.0 / (2.0 * n as f64))).abs() < 1e-12);
    }

    #[test]
    fn lattice_generators() {
        let z2 = GroupSpec::lattice(2);
        let a = AlgElement::indicator(z2.clone(), &z2.generators()).unwrap();
        let rep = subexp_sandwich_radius(&a, 1024).unwrap();
        assert!((rep.sandwich.value - 4.0).abs() < 0.05, "{}", rep.sandwich.value);
    }

    #[test]
    fn parseval_matches_convolution() {
        let z2 = GroupSpec::lattice(2);
        let a = AlgElement::from_terms(
            z2.clone(),
            vec![
                (GroupElement::Lattice(vec![1, 0]), num_complex::Complex64::new(1.0, 0.5)),
                (GroupElement::Lattice(vec![0, -2]), num_complex::Complex64::new(-2.0, 0.0)),
                (GroupElement::Lattice(vec![0, 0]), num_complex::Complex64::new(0.0, 1.0)),
            ],
        )
        .unwrap();
        let fast = lattice_log_l2_powers(&a, 16).unwrap();
        let mut p = a.clone();
        for (n, log_norm) in fast {
            if n > 1 {
                p = p.convolve(&p).unwrap();
            }
            assert!((log_norm - p.l2().ln()).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn free_groups_are_rejected() {
        let a = AlgElement::unit(GroupSpec::free(2));
        assert!(matches!(subexp_sandwich_radius(&a, 8), Err(Error::Domain(_))));
        assert!(subexp_sandwich_radius(&AlgElement::unit(GroupSpec::free(1)), 8).is_ok());
    }
}
