mod common;

use common::{c, point_off_half_line, random_matrix, random_similarity, rng, similar_to_diagonal};
use num_complex::Complex64;
use spectral_gamma::holocalc::{apply, apply_in, HoloFn, QuadratureOptions, RegionSet, SquareMatrix, WeightedFn};
use spectral_gamma::ktheory::{
    analyze_components, component_counts, default_basepoints, k_class, normal_form, same_class, v_add,
    DEFAULT_RESOLUTION,
};

fn f_of(f: &HoloFn, m: &SquareMatrix) -> SquareMatrix {
    let out = apply(f, m, &QuadratureOptions::default()).unwrap();
    assert!(out.converged, "{out:?}");
    out.value
}

fn chi(m: &SquareMatrix) -> SquareMatrix {
    let out = apply_in(&HoloFn::Chi, m, &RegionSet::omega0(), &QuadratureOptions::default()).unwrap();
    assert!(out.converged);
    out.value
}

fn dist(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    a.sub(b).unwrap().frobenius()
}

/// Matrix similar to a diagonal with entries off the line `Re = 1/2`.
fn omega0_matrix(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> SquareMatrix {
    let d: Vec<Complex64> = (0..n).map(|_| point_off_half_line(r, 0.1)).collect();
    similar_to_diagonal(r, &d)
}

#[test]
fn calculus_is_linear() {
    let mut r = rng(21);
    let (p, q) = (c(0.5, -2.0), c(1.5, 0.25));
    for _ in 0..10 {
        let m = random_matrix(&mut r, 5);
        let sum = HoloFn::Sum {
            terms: vec![WeightedFn { weight: p, f: HoloFn::Exp }, WeightedFn { weight: q, f: HoloFn::monomial(3) }],
        };
        let expect =
            f_of(&HoloFn::Exp, &m).scale(p).unwrap().add(&f_of(&HoloFn::monomial(3), &m).scale(q).unwrap()).unwrap();
        assert!(dist(&f_of(&sum, &m), &expect) <= 1e-8 * expect.frobenius().max(1.0));
    }
}

#[test]
fn calculus_respects_direct_sums() {
    let mut r = rng(22);
    for _ in 0..10 {
        let (a, b) = (random_matrix(&mut r, 3), random_matrix(&mut r, 4));
        let whole = f_of(&HoloFn::Exp, &a.direct_sum(&b));
        let parts = f_of(&HoloFn::Exp, &a).direct_sum(&f_of(&HoloFn::Exp, &b));
        assert!(dist(&whole, &parts) <= 1e-8 * parts.frobenius());
    }
}

#[test]
fn calculus_commutes_with_conjugation() {
    let mut r = rng(23);
    for _ in 0..10 {
        let m = random_matrix(&mut r, 4);
        let s = random_similarity(&mut r, 4);
        let lhs = f_of(&HoloFn::Exp, &m.conjugate_by(&s).unwrap());
        let rhs = f_of(&HoloFn::Exp, &m).conjugate_by(&s).unwrap();
        assert!(dist(&lhs, &rhs) <= 1e-8 * rhs.frobenius());
    }
}

#[test]
fn chi_is_idempotent_with_rank_equal_to_counts() {
    let mut r = rng(24);
    let o0 = analyze_components(&RegionSet::omega0(), None, DEFAULT_RESOLUTION).unwrap();
    for _ in 0..30 {
        let m = omega0_matrix(&mut r, 5);
        let e = chi(&m);
        assert!(dist(&e.mul(&e).unwrap(), &e) <= 1e-8 * e.frobenius().max(1.0));
        let rank = e.singular_values().iter().filter(|s| **s > 1e-6).count() as u64;
        let trace: Complex64 = (0..e.size()).map(|i| e.entry(i, i)).sum();
        assert!((trace - c(rank as f64, 0.0)).norm() < 1e-8);
        assert_eq!(component_counts(&m, &o0).unwrap().counts, vec![rank]);
    }
}

#[test]
fn counts_are_invariant_under_conjugation_and_padding() {
    let mut r = rng(25);
    let o0 = analyze_components(&RegionSet::omega0(), None, DEFAULT_RESOLUTION).unwrap();
    for _ in 0..50 {
        let m = omega0_matrix(&mut r, 4);
        let base = component_counts(&m, &o0).unwrap();
        let conj = m.conjugate_by(&random_similarity(&mut r, 4)).unwrap();
        assert_eq!(component_counts(&conj, &o0).unwrap(), base);
        assert_eq!(component_counts(&m.pad_zeros(3), &o0).unwrap(), base);
        assert!(same_class(&m, &m.pad_zeros(2), &o0).unwrap());
        assert_eq!(k_class(&m, &conj, &o0).unwrap(), vec![0]);
        let nf = normal_form(&m, &o0, &default_basepoints(&o0)).unwrap();
        assert!(same_class(&m, &nf, &o0).unwrap());
    }
}

#[test]
fn counts_add_over_direct_sums() {
    let mut r = rng(26);
    let o0 = analyze_components(&RegionSet::omega0(), None, DEFAULT_RESOLUTION).unwrap();
    for _ in 0..50 {
        let (a, b) = (omega0_matrix(&mut r, 3), omega0_matrix(&mut r, 2));
        let (ca, cb) = (component_counts(&a, &o0).unwrap(), component_counts(&b, &o0).unwrap());
        assert_eq!(component_counts(&a.direct_sum(&b), &o0).unwrap(), v_add(&ca, &cb).unwrap());
    }
}

#[test]
fn punctured_plane_has_one_class() {
    let mut r = rng(27);
    let o1 = analyze_components(&RegionSet::omega1(), None, DEFAULT_RESOLUTION).unwrap();
    assert_eq!(o1.k, 0);
    for _ in 0..30 {
        let (a, b) = (random_matrix(&mut r, 4), random_matrix(&mut r, 2));
        assert!(component_counts(&a, &o1).unwrap().counts.is_empty());
        assert!(same_class(&a, &b, &o1).unwrap());
    }
}
