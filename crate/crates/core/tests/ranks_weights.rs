mod common;

use common::{c, common_kernel, labelled_tuple, random_element, rng, search_left_inverse};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spectral_gamma::groups::{GroupElement, GroupSpec};
use spectral_gamma::holocalc::SquareMatrix;
use spectral_gamma::ranks::{
    bass_reduce, csr_k_formula, csr_upper_bound, hsr_bounds, lg_membership, lg_membership_scalar, SpaceDescriptor,
};
use spectral_gamma::weights::{control_check, subexponentiality_probe, NormSelector, Weight, WeightKind};

fn spaces() -> Vec<SpaceDescriptor> {
    let mut out = vec![SpaceDescriptor::Point];
    for d in 0..=8 {
        out.push(SpaceDescriptor::Torus { d });
        out.push(SpaceDescriptor::Sphere { d });
        out.push(SpaceDescriptor::Cube { k: d });
        for (top, codim1) in [(false, false), (true, false), (false, true), (true, true)] {
            out.push(SpaceDescriptor::FiniteCw { dim: d, top_cohom_nonzero: top, codim1_cohom_nonzero: codim1 });
        }
    }
    out
}

#[test]
fn csr_hierarchy_is_monotone_and_bounded() {
    for s in spaces() {
        for k in 0..=16 {
            let (here, next) = (csr_k_formula(&s, k), csr_k_formula(&s, k + 1));
            assert!(here.value <= next.value, "{s} k = {k}");
            assert!(here.value <= csr_upper_bound(s.dim(), k), "{s} k = {k}");
            if !here.is_exact() {
                assert_eq!(here.value, csr_upper_bound(s.dim(), k));
            }
            let h = hsr_bounds(&s, k);
            assert!(h.lower <= h.upper, "{s} k = {k}: {h:?}");
        }
    }
}

#[test]
fn space_descriptors_round_trip() {
    for s in spaces() {
        assert_eq!(s.to_string().parse::<SpaceDescriptor>().unwrap(), s);
    }
    assert!("torus".parse::<SpaceDescriptor>().is_err());
    assert!("cw:2:1:maybe".parse::<SpaceDescriptor>().is_err());
}

fn random_scalar(r: &mut ChaCha8Rng) -> Complex64 {
    match r.random_range(0..3) {
        0 => c(0.0, 0.0),
        _ => c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
    }
}

#[test]
fn scalar_membership_is_the_nonzero_test() {
    let mut r = rng(31);
    for _ in 0..10_000 {
        let n = r.random_range(1..=4);
        let t: Vec<Complex64> = (0..n).map(|_| random_scalar(&mut r)).collect();
        assert_eq!(lg_membership_scalar(&t), t.iter().any(|z| z.norm() > 0.0));
        let one: Vec<SquareMatrix> = t.iter().map(|z| SquareMatrix::diagonal(&[*z]).unwrap()).collect();
        assert_eq!(lg_membership(&one, 1).unwrap(), lg_membership_scalar(&t));
    }
}

#[test]
fn matrix_membership_matches_left_inverse_search() {
    let mut r = rng(32);
    for i in 0..1000 {
        let (t, generating) = labelled_tuple(&mut r);
        let found = search_left_inverse(&mut r, &t);
        assert_eq!(found.is_some(), generating, "sample {i}");
        if !generating {
            assert!(common_kernel(&t).is_some());
        }
        let tuple: Vec<SquareMatrix> = t.into_iter().map(|m| SquareMatrix::new(m).unwrap()).collect();
        assert_eq!(lg_membership(&tuple, 2).unwrap(), generating, "sample {i}");
    }
}

#[test]
fn bass_reductions() {
    let z = |x: f64| c(x, 0.0);
    let b = bass_reduce(&[z(0.0), z(1.0)]).unwrap();
    assert_eq!((b.x, b.reduced), (vec![z(1.0)], vec![z(1.0)]));
    let b = bass_reduce(&[z(5.0), z(0.0)]).unwrap();
    assert_eq!((b.x, b.reduced), (vec![z(0.0)], vec![z(5.0)]));
    let b = bass_reduce(&[z(0.0), z(0.0), z(1.0)]).unwrap();
    assert!(lg_membership_scalar(&b.reduced));
    assert_eq!(b.reduced[0], z(0.0) + b.x[0] * z(1.0));
    assert!(bass_reduce(&[z(0.0), z(0.0)]).is_err());

    let mut r = rng(33);
    for _ in 0..1000 {
        let n = r.random_range(2..=5);
        let t: Vec<Complex64> = (0..n).map(|_| random_scalar(&mut r)).collect();
        match bass_reduce(&t) {
            Ok(b) => {
                assert!(lg_membership_scalar(&b.reduced));
                for ((a, x), red) in t.iter().zip(&b.x).zip(&b.reduced) {
                    assert_eq!(*red, a + x * t[n - 1]);
                }
            }
            Err(_) => assert!(!lg_membership_scalar(&t)),
        }
    }
}

#[test]
fn weights_grow_with_the_radius() {
    for spec in [GroupSpec::lattice(1), GroupSpec::lattice(2), GroupSpec::free(2), GroupSpec::Heisenberg] {
        for kind in [WeightKind::GrowthSqrt, WeightKind::Polynomial { s: 1.5 }, WeightKind::Constant { c: 2.0 }] {
            let w = Weight::new(kind, spec.clone()).unwrap();
            let values: Vec<f64> = (0..12).map(|r| w.at_radius(r).unwrap()).collect();
            assert!(values.windows(2).all(|p| p[0] <= p[1]), "{spec} {kind:?}: {values:?}");
            assert!(values[0] >= 1.0);
        }
    }
    assert!(Weight::new(WeightKind::Constant { c: 0.5 }, GroupSpec::lattice(1)).is_err());
    assert!(Weight::new(WeightKind::Polynomial { s: -1.0 }, GroupSpec::lattice(1)).is_err());
}

#[test]
fn growth_weight_is_subexponential_only_on_polynomial_growth() {
    let f2 = GroupSpec::free(2);
    let w = Weight::new(WeightKind::GrowthSqrt, f2.clone()).unwrap();
    assert!(!w.is_subexponential());
    let p = subexponentiality_probe(&w, &f2.generators(), 16, 1 << 16).unwrap();
    // sqrt(vol B(n))^(1/n) tends to sqrt 3 on F_2
    assert!(p.rows.last().unwrap().value > 1.6);
    for spec in [GroupSpec::lattice(2), GroupSpec::Heisenberg] {
        assert!(Weight::new(WeightKind::GrowthSqrt, spec).unwrap().is_subexponential());
    }
}

#[test]
fn control_bounds_reduced_and_l1_norms() {
    let mut r = rng(34);
    let spec = GroupSpec::lattice(2);
    let samples: Vec<_> = (0..200).map(|_| random_element(&mut r, &spec, 6, 3)).collect();
    let w = Weight::new(WeightKind::GrowthSqrt, spec.clone()).unwrap();
    let l1 = control_check(&samples, NormSelector::L2, NormSelector::L1, 1.0, &w).unwrap();
    assert!(l1.passed());
    let red = control_check(&samples, NormSelector::L2, NormSelector::FourierOpnorm { grid: 256 }, 1.0, &w).unwrap();
    assert!(red.passed());
    for (a, b) in l1.rows.iter().zip(&red.rows) {
        assert!(b.lhs <= a.lhs * (1.0 + 1e-12));
    }
    let g = GroupElement::Lattice(vec![0, 0]);
    let delta = spectral_gamma::algebra::AlgElement::delta(spec, g, c(2.0, 0.0)).unwrap();
    let one = control_check(&[delta], NormSelector::L2, NormSelector::L1, 1.0, &w).unwrap();
    assert_eq!(one.rows[0].margin, 0.0);
}
