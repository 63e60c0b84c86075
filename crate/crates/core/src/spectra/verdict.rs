use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

use super::estimate::{EstimatorOptions, SpectralEstimate};
use super::fourier::{fourier_opnorm_cyclic, fourier_opnorm_lattice, MAX_GRID_POINTS};
use super::radius::{l1_spectral_radius_with, reduced_norm_trace_with};

/// Relative slack for comparing certified endpoints that agree up to rounding.
const ROUNDING: f64 = 1e-9;

/// Best available certified interval for the reduced norm `||a||`.
///
/// Trace moments are always used. Lattices add the Fourier grid bound,
/// cyclic groups the exact discrete transform, and free-group elements
/// supported on the powers of one generator the Fourier bound of their
/// image in `Z`, since `C*_r` of a subgroup sits isometrically inside.
pub fn opnorm_estimate(a: &AlgElement, opts: &EstimatorOptions) -> Result<SpectralEstimate> {
    let trace = reduced_norm_trace_with(a, opts)?;
    let best = match a.spec() {
        GroupSpec::Lattice { dim } => match lattice_grid(a, opts.grid, *dim) {
            Some(g) => trace.intersect(&fourier_opnorm_lattice(a, g)?),
            None => trace,
        },
        GroupSpec::Cyclic { order } if *order <= MAX_GRID_POINTS => trace.intersect(&fourier_opnorm_cyclic(a)?),
        GroupSpec::Free { .. } => match single_letter_image(a)? {
            Some(image) => {
                let g = lattice_grid(&image, opts.grid, 1).expect("one-dimensional grids fit");
                trace.intersect(&fourier_opnorm_lattice(&image, g)?)
            }
            None => trace,
        },
        _ => trace,
    };
    Ok(best)
}

/// Points allowed when the grid is refined automatically.
const AUTO_GRID_POINTS: u64 = 1 << 24;

/// Grid of at least `wanted` points per axis, refined until the Lipschitz
/// slack is below `1e-3 ||a||_1` while the total stays within budget.
fn lattice_grid(a: &AlgElement, wanted: usize, dim: usize) -> Option<usize> {
    if dim == 0 {
        return None;
    }
    let fits = |g: usize, budget: u64| (g as u64).checked_pow(dim as u32).is_some_and(|p| p <= budget);
    let mut g = wanted.max(8);
    while g > 8 && !fits(g, MAX_GRID_POINTS) {
        g /= 2;
    }
    if !fits(g, MAX_GRID_POINTS) {
        return None;
    }
    let lipschitz: f64 = a
        .terms()
        .iter()
        .map(|(h, c)| match h {
            GroupElement::Lattice(v) => c.norm() * v.iter().map(|k| k.unsigned_abs() as f64).sum::<f64>(),
            _ => 0.0,
        })
        .sum();
    while lipschitz * std::f64::consts::TAU / (g as f64) > 1e-3 * a.l1() && fits(2 * g, AUTO_GRID_POINTS) {
        g *= 2;
    }
    Some(g)
}

/// Image in `Z` of an element supported on the powers of one free generator.
fn single_letter_image(a: &AlgElement) -> Result<Option<AlgElement>> {
    let mut letter = None;
    let mut terms = Vec::with_capacity(a.len());
    for (g, c) in a.terms() {
        let GroupElement::Free(w) = g else {
            return Ok(None);
        };
        let k = match w.first() {
            None => 0,
            Some(&l) => {
                if w.iter().any(|x| *x != l) || letter.is_some_and(|i: i32| i != l.abs()) {
                    return Ok(None);
                }
                letter = Some(l.abs());
                l.signum() as i64 * w.len() as i64
            }
        };
        terms.push((GroupElement::Lattice(vec![k]), *c));
    }
    AlgElement::from_terms(GroupSpec::lattice(1), terms).map(Some)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithSigma1,
    ViolationWitness,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sigma1Verdict {
    pub element_id: String,
    pub r_l1: SpectralEstimate,
    pub opnorm: SpectralEstimate,
    pub verdict: Verdict,
    /// `r_l1.lower - opnorm.upper`; positive exactly for violation witnesses.
    pub margin: f64,
}

pub fn sigma1_verdict(a: &AlgElement, n_max: u64) -> Result<Sigma1Verdict> {
    sigma1_verdict_with(a, "a", &EstimatorOptions::with_n_max(n_max))
}

/// Compares `r_l1(a)` with `||a||`.
///
/// A violation witness needs `r_l1.lower > opnorm.upper`. The element is
/// consistent when `r_l1.upper <= (1 + tol) opnorm.lower`, and inconclusive
/// otherwise. For normal elements the reduced norm equals the reduced
/// spectral radius, which bounds `r_l1` from below, so the norm's lower bound
/// is passed on as a hint.
pub fn sigma1_verdict_with(a: &AlgElement, element_id: &str, opts: &EstimatorOptions) -> Result<Sigma1Verdict> {
    let opnorm = opnorm_estimate(a, opts)?;
    let hints: Vec<f64> = if is_normal(a, opts.support_cap)? { vec![opnorm.lower] } else { Vec::new() };
    let r_l1 = l1_spectral_radius_with(a, opts, &hints)?;
    let margin = r_l1.lower - opnorm.upper;
    let verdict = if margin > 0.0 {
        Verdict::ViolationWitness
    } else if r_l1.upper <= (1.0 + opts.tol) * opnorm.lower {
        Verdict::ConsistentWithSigma1
    } else {
        Verdict::Inconclusive
    };
    Ok(Sigma1Verdict { element_id: element_id.to_string(), r_l1, opnorm, verdict, margin })
}

/// `a* a = a a*` up to rounding.
fn is_normal(a: &AlgElement, cap: usize) -> Result<bool> {
    let star = a.involution();
    let (p, q) = match (star.convolve_capped(a, cap), a.convolve_capped(&star, cap)) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(e), _) | (_, Err(e)) if e.is_resource() => return Ok(false),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let diff = p.add(&q.scale(&num_complex::Complex64::new(-1.0, 0.0)))?;
    Ok(diff.l1() <= 1e-12 * p.l1().max(f64::MIN_POSITIVE))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KestenReport {
    pub radius: SpectralEstimate,
    pub card: usize,
    pub amenable_consistent: bool,
}

/// Grid used for Kesten checks on lattices of dimension at most two.
pub const KESTEN_LATTICE_GRID: usize = 4096;

/// Reduced norm of `chi_S` compared with `#S`.
pub fn kesten_check(set: &[GroupElement], spec: &GroupSpec, n_max: u64) -> Result<KestenReport> {
    kesten_check_with(set, spec, &EstimatorOptions::with_n_max(n_max))
}

pub fn kesten_check_with(set: &[GroupElement], spec: &GroupSpec, opts: &EstimatorOptions) -> Result<KestenReport> {
    spec.validate()?;
    let unique: BTreeSet<GroupElement> = set.iter().cloned().collect();
    if unique.is_empty() {
        return Err(Error::Domain("Kesten check of an empty set".into()));
    }
    for g in &unique {
        if !unique.contains(&spec.inverse(g)?) {
            return Err(Error::Domain(format!(
                "set is not symmetric: {} has no inverse in it",
                spec.format_element(g)
            )));
        }
    }
    let chi = AlgElement::indicator(spec.clone(), &unique)?;
    let mut opts = opts.clone();
    if let GroupSpec::Lattice { dim } = spec {
        if *dim <= 2 {
            opts.grid = opts.grid.max(KESTEN_LATTICE_GRID);
        }
    }
    let radius = opnorm_estimate(&chi, &opts)?;
    let card = unique.len();
    let c = card as f64;
    let amenable_consistent = radius.lower <= c * (1.0 + ROUNDING) && radius.upper >= c * (1.0 - ROUNDING);
    Ok(KestenReport { radius, card, amenable_consistent })
}
