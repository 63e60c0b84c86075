#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_gamma::algebra::AlgElement;
use spectral_gamma::groups::{GroupElement, GroupSpec};
use spectral_gamma::holocalc::SquareMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::lattice(1),
        GroupSpec::lattice(2),
        GroupSpec::free(2),
        GroupSpec::Heisenberg,
        GroupSpec::cyclic(7),
        GroupSpec::product(vec![GroupSpec::lattice(1), GroupSpec::free(2)]),
    ]
}

/// Product of `len` uniformly chosen generators.
pub fn random_word(rng: &mut ChaCha8Rng, spec: &GroupSpec, len: usize) -> GroupElement {
    let gens = spec.generators();
    let mut g = spec.identity();
    for _ in 0..len {
        g = spec.multiply(&g, &gens[rng.random_range(0..gens.len())]).unwrap();
    }
    g
}

/// Up to `max_terms` terms on words of length at most `max_len`, with
/// Gaussian-integer coefficients so that float convolution stays exact.
pub fn random_integer_element(rng: &mut ChaCha8Rng, spec: &GroupSpec, max_terms: usize, max_len: usize) -> AlgElement {
    loop {
        let n = rng.random_range(1..=max_terms);
        let terms: Vec<(GroupElement, Complex64)> = (0..n)
            .map(|_| {
                let len = rng.random_range(0..=max_len);
                let g = random_word(rng, spec, len);
                (g, c(rng.random_range(-3..=3) as f64, rng.random_range(-3..=3) as f64))
            })
            .collect();
        let a = AlgElement::from_terms(spec.clone(), terms).unwrap();
        if !a.is_zero() {
            return a;
        }
    }
}

/// Like [`random_integer_element`] with coefficients uniform in the unit square.
pub fn random_element(rng: &mut ChaCha8Rng, spec: &GroupSpec, max_terms: usize, max_len: usize) -> AlgElement {
    loop {
        let n = rng.random_range(1..=max_terms);
        let terms: Vec<(GroupElement, Complex64)> = (0..n)
            .map(|_| {
                let len = rng.random_range(0..=max_len);
                (random_word(rng, spec, len), c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            })
            .collect();
        let a = AlgElement::from_terms(spec.clone(), terms).unwrap();
        if !a.is_zero() {
            return a;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix {
    SquareMatrix::new(DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .unwrap()
}

/// Random similarity `3 I + R` with `R` entries in the unit square; well conditioned.
pub fn random_similarity(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix {
    random_matrix(rng, n).add(&SquareMatrix::identity(n).scale(c(3.0, 0.0)).unwrap()).unwrap()
}

/// `S diag(d) S^-1` for a random well-conditioned `S`.
pub fn similar_to_diagonal(rng: &mut ChaCha8Rng, d: &[Complex64]) -> SquareMatrix {
    SquareMatrix::diagonal(d).unwrap().conjugate_by(&random_similarity(rng, d.len())).unwrap()
}

/// Smallest pairwise distance between eigenvalues.
pub fn separation(eigs: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            best = best.min((eigs[i] - eigs[j]).norm());
        }
    }
    best
}

/// Point with `|Re z - 1/2| >= gap`, inside the square of half-width 2.
pub fn point_off_half_line(rng: &mut ChaCha8Rng, gap: f64) -> Complex64 {
    loop {
        let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        if (z.re - 0.5).abs() >= gap {
            return z;
        }
    }
}

/// Closed-walk counts `W_n` on the `(q+1)`-regular tree from `E = z^2 / (1 - q E)`
/// (first returns) and `W = 1 / (1 - (q+1) E)`, as power series in `z`.
pub fn tree_walk_counts(q: i128, n_max: usize) -> Vec<i128> {
    let len = n_max + 1;
    let mul = |a: &[i128], b: &[i128]| -> Vec<i128> {
        let mut out = vec![0; len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    // 1 / (1 - s) for a series s without constant term
    let geometric = |s: &[i128]| -> Vec<i128> {
        let mut out = vec![0; len];
        let mut pow = vec![0; len];
        pow[0] = 1;
        for _ in 0..len {
            out.iter_mut().zip(&pow).for_each(|(o, p)| *o += p);
            pow = mul(&pow, s);
        }
        out
    };
    let mut e = vec![0i128; len];
    for _ in 0..len {
        let qe: Vec<i128> = e.iter().map(|x| q * x).collect();
        let inv = geometric(&qe);
        let mut next = vec![0; len];
        next[2..].copy_from_slice(&inv[..len - 2]);
        e = next;
    }
    let se: Vec<i128> = e.iter().map(|x| (q + 1) * x).collect();
    geometric(&se)
}

pub fn dm(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

/// A tuple over `M_2` and whether it was built to be left-generating.
pub fn labelled_tuple(r: &mut ChaCha8Rng) -> (Vec<DMatrix<Complex64>>, bool) {
    let n = r.random_range(1..=3);
    match r.random_range(0..3) {
        // generic entries; one invertible entry already generates
        0 => ((0..n).map(|_| dm(r, 2, 2)).collect(), true),
        // every entry kills v
        1 => {
            let v = dm(r, 2, 1);
            let p = DMatrix::identity(2, 2) - &v * v.adjoint() / c(v.norm_squared(), 0.0);
            ((0..n).map(|_| dm(r, 2, 2) * &p).collect(), false)
        }
        // rank-one entries with independent kernels
        _ => {
            let (w1, w2) = (dm(r, 1, 2), dm(r, 1, 2));
            let mut t = vec![dm(r, 2, 1) * w1, dm(r, 2, 1) * w2];
            t.extend((2..n.max(2)).map(|_| dm(r, 2, 1) * dm(r, 1, 2)));
            (t, true)
        }
    }
}

/// `b_i` with `sum b_i a_i = 1`, from a random combination `sum c_i a_i`
/// that happens to be invertible.
pub fn search_left_inverse(r: &mut ChaCha8Rng, t: &[DMatrix<Complex64>]) -> Option<Vec<DMatrix<Complex64>>> {
    for _ in 0..8 {
        let cs: Vec<DMatrix<Complex64>> = t.iter().map(|_| dm(r, 2, 2)).collect();
        let s = cs.iter().zip(t).fold(DMatrix::zeros(2, 2), |acc, (ci, ai)| acc + ci * ai);
        if let Some(inv) = s.try_inverse() {
            let b: Vec<DMatrix<Complex64>> = cs.iter().map(|ci| &inv * ci).collect();
            let check = b.iter().zip(t).fold(DMatrix::zeros(2, 2), |acc, (bi, ai)| acc + bi * ai);
            if (check - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-8 {
                return Some(b);
            }
        }
    }
    None
}

pub fn common_kernel(t: &[DMatrix<Complex64>]) -> Option<DVector<Complex64>> {
    let stack = DMatrix::from_fn(2 * t.len(), 2, |i, j| t[i / 2][(i % 2, j)]);
    let svd = stack.clone().svd(false, true);
    let v_t = svd.v_t?;
    let v: DVector<Complex64> = v_t.row(1).adjoint();
    ((&stack * &v).norm() < 1e-8).then_some(v)
}
