use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::{build_contour_scaled, Circle, Contour, Target};
use super::functions::HoloFn;
use super::matrix::SquareMatrix;
use super::region::{default_margin, RegionSet};
use crate::error::{Error, Result};

/// Largest acceptable 1-norm condition number of a resolvent.
pub const MAX_CONDITION: f64 = 1e12;

/// Nodes evaluated together before their terms are summed in index order.
const CHUNK: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    /// Double the node count until successive results agree.
    pub adaptive: bool,
    pub max_nodes: usize,
    /// Frobenius change, relative to `max(1, |f(m)|_F)`, that ends doubling.
    pub tol: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { adaptive: true, max_nodes: 4096, tol: 1e-10 }
    }
}

impl QuadratureOptions {
    pub fn fixed() -> Self {
        QuadratureOptions { adaptive: false, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalcOutput {
    pub value: SquareMatrix,
    /// Nodes per circle in the final pass.
    pub nodes: usize,
    /// Relative change over the last doubling; infinite without one.
    pub change: f64,
    pub converged: bool,
    /// Largest resolvent condition number met.
    pub condition: f64,
}

pub fn holo_calc(f: &HoloFn, m: &SquareMatrix, contour: &Contour) -> Result<SquareMatrix> {
    Ok(holo_calc_with(f, m, contour, &QuadratureOptions::default())?.value)
}

/// `f(m) = (2 pi i)^-1 sum over circles of the integral of f(z) (z - m)^-1 dz`
/// by the trapezoid rule.
pub fn holo_calc_with(f: &HoloFn, m: &SquareMatrix, contour: &Contour, opts: &QuadratureOptions) -> Result<CalcOutput> {
    for c in &contour.circles {
        if c.nodes == 0 || !c.radius.is_finite() || c.radius <= 0.0 {
            return Err(Error::Domain(format!("malformed contour circle {c:?}")));
        }
        f.check_disk(c.center, c.radius)?;
    }
    let n = m.size();
    let mut nodes: Vec<usize> = contour.circles.iter().map(|c| c.nodes).collect();
    let mut sums: Vec<DMatrix<Complex64>> = Vec::with_capacity(nodes.len());
    let mut condition: f64 = 0.0;
    for (c, k) in contour.circles.iter().zip(&nodes) {
        let (s, cond) = node_sum(f, m, c, *k, (0..*k).collect())?;
        sums.push(s);
        condition = condition.max(cond);
    }
    let combine = |sums: &[DMatrix<Complex64>], nodes: &[usize]| {
        sums.iter().zip(nodes).fold(DMatrix::zeros(n, n), |acc, (s, k)| acc + s / Complex64::new(*k as f64, 0.0))
    };
    let mut value = combine(&sums, &nodes);
    let mut change = f64::INFINITY;
    let mut converged = !opts.adaptive;
    while opts.adaptive && nodes.iter().all(|k| 2 * k <= opts.max_nodes) {
        for ((c, k), s) in contour.circles.iter().zip(nodes.iter_mut()).zip(sums.iter_mut()) {
            let (odd, cond) = node_sum(f, m, c, 2 * *k, (0..*k).map(|j| 2 * j + 1).collect())?;
            *s += odd;
            *k *= 2;
            condition = condition.max(cond);
        }
        let next = combine(&sums, &nodes);
        change = (&next - &value).norm() / next.norm().max(1.0);
        value = next;
        if change < opts.tol {
            converged = true;
            break;
        }
    }
    Ok(CalcOutput {
        value: SquareMatrix::new(value)?,
        nodes: nodes.iter().copied().max().unwrap_or(0),
        change,
        converged,
        condition,
    })
}

/// `sum_j f(z_j) r e^(i theta_j) (z_j - m)^-1` over the listed nodes of an
/// `total`-point rule, with the worst condition number met.
fn node_sum(
    f: &HoloFn,
    m: &SquareMatrix,
    c: &Circle,
    total: usize,
    idx: Vec<usize>,
) -> Result<(DMatrix<Complex64>, f64)> {
    let n = m.size();
    let a = m.as_dmatrix();
    let term = |j: usize| -> Result<(DMatrix<Complex64>, f64)> {
        let w = Complex64::from_polar(c.radius, std::f64::consts::TAU * j as f64 / total as f64);
        let z = c.center + w;
        let shifted = DMatrix::from_diagonal_element(n, n, z) - a;
        let norm1 = one_norm(&shifted);
        let inv = shifted
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Conditioning(format!("resolvent is singular at contour node {z}")))?;
        let cond = norm1 * one_norm(&inv);
        if cond.is_nan() || cond > MAX_CONDITION {
            return Err(Error::Conditioning(format!("resolvent condition number {cond:.3e} at {z}")));
        }
        Ok((inv * (f.eval(z) * w), cond))
    };
    let mut sum = DMatrix::zeros(n, n);
    let mut worst: f64 = 0.0;
    for chunk in idx.chunks(CHUNK) {
        let terms: Vec<Result<(DMatrix<Complex64>, f64)>> = chunk.par_iter().map(|j| term(*j)).collect();
        for t in terms {
            let (t, cond) = t?;
            sum += t;
            worst = worst.max(cond);
        }
    }
    Ok((sum, worst))
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter().map(|col| col.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `f(m)` with a contour around the whole spectrum inside the domain of `f`,
/// clustered at the scale of `|m|`.
pub fn apply(f: &HoloFn, m: &SquareMatrix, opts: &QuadratureOptions) -> Result<CalcOutput> {
    apply_in(f, m, &f.domain()?, opts)
}

/// As [`apply`], with the contour kept inside `omega`.
pub fn apply_in(f: &HoloFn, m: &SquareMatrix, omega: &RegionSet, opts: &QuadratureOptions) -> Result<CalcOutput> {
    if m.size() == 0 {
        return Ok(CalcOutput { value: m.clone(), nodes: 0, change: 0.0, converged: true, condition: 0.0 });
    }
    let eigs = m.eigenvalues()?;
    let contour = build_contour_scaled(&eigs, omega, &Target::All, m.spectral_norm())?;
    holo_calc_with(f, m, &contour, opts)
}

/// `h_t(m)` for `h_t = (1 - t) id + t chi`; an idempotent at `t = 1`.
pub fn homotopy_deformation_probe(m: &SquareMatrix, t: f64) -> Result<SquareMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("deformation parameter {t} outside [0, 1]")));
    }
    let omega = RegionSet::omega0();
    if let Some(z) = m.eigenvalues()?.into_iter().find(|z| !omega.contains_with_margin(*z, default_margin(*z))) {
        return Err(Error::Membership(format!("eigenvalue {z} is not inside C \\ {{Re = 1/2}}")));
    }
    Ok(apply_in(&HoloFn::chi_homotopy(t), m, &omega, &QuadratureOptions::default())?.value)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::super::matrix::multiset_distance;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random(n: usize, seed: u64) -> SquareMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SquareMatrix::new(DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .unwrap()
    }

    fn similar(d: &[f64], seed: u64) -> SquareMatrix {
        let n = d.len();
        let s = random(n, seed).add(&SquareMatrix::identity(n).scale(c(3.0, 0.0)).unwrap()).unwrap();
        SquareMatrix::real_diagonal(d).unwrap().conjugate_by(&s).unwrap()
    }

    #[test]
    fn identity_at_256_nodes() {
        let m = random(5, 1);
        let out = apply(&HoloFn::identity(), &m, &QuadratureOptions::fixed()).unwrap();
        assert_eq!(out.nodes, 256);
        assert!(out.value.sub(&m).unwrap().frobenius() <= 1e-8);
    }

    #[test]
    fn chi_fixes_idempotents() {
        let e = similar(&[1.0, 1.0, 0.0], 2);
        let out = apply(&HoloFn::Chi, &e, &QuadratureOptions::default()).unwrap();
        assert!(out.value.sub(&e).unwrap().frobenius() <= 1e-8);
    }

    #[test]
    fn square_matches_multiplication() {
        let m = random(6, 3);
        let out = apply(&HoloFn::monomial(2), &m, &QuadratureOptions::default()).unwrap();
        assert!(out.converged);
        assert!(out.value.sub(&m.mul(&m).unwrap()).unwrap().frobenius() <= 1e-8);
    }

    #[test]
    fn spectral_mapping_for_exp() {
        let m = random(6, 4);
        let fm = apply(&HoloFn::Exp, &m, &QuadratureOptions::default()).unwrap().value;
        let mapped: Vec<Complex64> = m.eigenvalues().unwrap().iter().map(|z| z.exp()).collect();
        assert!(multiset_distance(&fm.eigenvalues().unwrap(), &mapped).unwrap() < 1e-7);
    }

    #[test]
    fn deformation_path() {
        let d = SquareMatrix::real_diagonal(&[0.2, 0.9]).unwrap();
        assert!(homotopy_deformation_probe(&d, 0.0).unwrap().sub(&d).unwrap().frobenius() < 1e-8);
        let p = homotopy_deformation_probe(&d, 1.0).unwrap();
        assert!(p.sub(&SquareMatrix::real_diagonal(&[0.0, 1.0]).unwrap()).unwrap().frobenius() < 1e-8);
        let e = similar(&[1.0, 0.0, 0.0], 5);
        assert!(homotopy_deformation_probe(&e, 0.5).unwrap().sub(&e).unwrap().frobenius() < 1e-8);
        let bad = SquareMatrix::real_diagonal(&[0.5]).unwrap();
        assert!(matches!(homotopy_deformation_probe(&bad, 0.5), Err(Error::Membership(_))));
    }

    #[test]
    fn poles_inside_a_circle() {
        let m = SquareMatrix::real_diagonal(&[0.0, 0.5]).unwrap();
        let f = HoloFn::Rational { num: vec![c(1.0, 0.0)], den: vec![c(-0.25, 0.0), c(1.0, 0.0)] };
        let contour = Contour {
            circles: vec![Circle { center: c(0.0, 0.0), radius: 1.0, nodes: 64, members: vec![0, 1] }],
            winding: vec![1, 1],
        };
        assert!(matches!(holo_calc(&f, &m, &contour), Err(Error::Analyticity(_))));
    }

    #[test]
    fn ill_conditioned_resolvent() {
        let m = SquareMatrix::from_real_rows(&[vec![0.0, 1e7], vec![0.0, 0.0]]).unwrap();
        let contour = Contour {
            circles: vec![Circle { center: c(0.0, 0.0), radius: 1.0, nodes: 8, members: vec![0, 1] }],
            winding: vec![1, 1],
        };
        let r = holo_calc_with(&HoloFn::Exp, &m, &contour, &QuadratureOptions::fixed());
        assert!(matches!(r, Err(Error::Conditioning(_))), "{r:?}");
    }
}
