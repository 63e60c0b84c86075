mod common;

use common::{c, random_integer_element, random_word, rng, specs};
use proptest::prelude::*;
use spectral_gamma::algebra::{AlgElement, MatrixAlgElement};
use spectral_gamma::groups::{ball, GroupSpec, DEFAULT_BALL_CAP};

fn spec_strategy() -> impl Strategy<Value = GroupSpec> {
    (0..specs().len()).prop_map(|i| specs()[i].clone())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inverses_and_triangle_inequality(spec in spec_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_word(&mut r, &spec, 7);
        let h = random_word(&mut r, &spec, 7);
        let inv = spec.inverse(&g).unwrap();
        prop_assert_eq!(spec.multiply(&g, &inv).unwrap(), spec.identity());
        prop_assert_eq!(spec.inverse(&inv).unwrap(), g.clone());
        let gh = spec.multiply(&g, &h).unwrap();
        prop_assert!(spec.word_length(&gh).unwrap() <= spec.word_length(&g).unwrap() + spec.word_length(&h).unwrap());
        prop_assert_eq!(spec.word_length(&inv).unwrap(), spec.word_length(&g).unwrap());
    }

    #[test]
    fn convolution_is_associative(spec in spec_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_integer_element(&mut r, &spec, 5, 3);
        let b = random_integer_element(&mut r, &spec, 5, 3);
        let d = random_integer_element(&mut r, &spec, 5, 3);
        let left = a.convolve(&b).unwrap().convolve(&d).unwrap();
        let right = a.convolve(&b.convolve(&d).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let (ea, eb, ed) = (a.to_exact().unwrap(), b.to_exact().unwrap(), d.to_exact().unwrap());
        prop_assert_eq!(
            ea.convolve(&eb).unwrap().convolve(&ed).unwrap(),
            ea.convolve(&eb.convolve(&ed).unwrap()).unwrap()
        );
    }

    #[test]
    fn involution_laws(spec in spec_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_integer_element(&mut r, &spec, 6, 4);
        let b = random_integer_element(&mut r, &spec, 6, 4);
        prop_assert_eq!(a.involution().involution(), a.clone());
        prop_assert_eq!(
            a.convolve(&b).unwrap().involution(),
            b.involution().convolve(&a.involution()).unwrap()
        );
        let lambda = c(2.0, -1.0);
        prop_assert_eq!(a.scale(&lambda).involution(), a.involution().scale(&lambda.conj()));
        prop_assert!(a.involution().convolve(&a).unwrap().is_self_adjoint());
    }

    #[test]
    fn l1_norm_identities(spec in spec_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = common::random_element(&mut r, &spec, 8, 4);
        let b = common::random_element(&mut r, &spec, 8, 4);
        prop_assert!(close(a.involution().l1(), a.l1()));
        prop_assert!(close(a.abs().l1(), a.l1()));
        prop_assert!(a.convolve(&b).unwrap().l1() <= a.l1() * b.l1() * (1.0 + 1e-12));
    }

    #[test]
    fn powers_stay_in_the_scaled_ball(spec in spec_strategy(), seed in any::<u64>(), n in 1u32..4) {
        let mut r = rng(seed);
        let a = random_integer_element(&mut r, &spec, 4, 3);
        let radius = spec.circumscribing_radius(a.support()).unwrap();
        let p = a.power(n).unwrap();
        for g in p.support() {
            prop_assert!(spec.word_length(g).unwrap() <= n as u64 * radius);
        }
    }

    #[test]
    fn matrix_products_stay_in_product_supports(seed in any::<u64>()) {
        let spec = GroupSpec::free(2);
        let mut r = rng(seed);
        let entries = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<AlgElement> {
            (0..4).map(|_| random_integer_element(r, &spec, 3, 2)).collect()
        };
        let m = MatrixAlgElement::from_entries(spec.clone(), 2, entries(&mut r)).unwrap();
        let k = MatrixAlgElement::from_entries(spec.clone(), 2, entries(&mut r)).unwrap();
        let prod = m.multiply(&k).unwrap();
        let (sm, sk) = (m.support(), k.support());
        for g in prod.support() {
            let found = sm.iter().any(|x| sk.iter().any(|y| spec.multiply(x, y).unwrap() == g));
            prop_assert!(found);
        }
    }
}

#[test]
fn lattice_balls_match_the_closed_form() {
    // |B(r)| in Z^d is sum_i 2^i C(d,i) C(r,i)
    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for d in 1..=3usize {
        for r in 0..=6u64 {
            let closed: u64 = (0..=d as u64).map(|i| (1 << i) * binom(d as u64, i) * binom(r, i)).sum();
            let table = ball(r, &GroupSpec::lattice(d), DEFAULT_BALL_CAP).unwrap();
            assert_eq!(table.volume, closed, "d = {d}, r = {r}");
        }
    }
}

#[test]
fn free_ball_volumes() {
    for k in 2..=3u64 {
        for r in 0..=6u32 {
            let closed = 1 + 2 * k * ((2 * k - 1).pow(r) - 1) / (2 * k - 2);
            let table = ball(r as u64, &GroupSpec::free(k as usize), DEFAULT_BALL_CAP).unwrap();
            assert_eq!(table.volume, closed);
        }
    }
}

#[test]
fn heisenberg_balls_grow_strictly() {
    let t = ball(6, &GroupSpec::Heisenberg, DEFAULT_BALL_CAP).unwrap();
    let mut vol = 0;
    for (r, s) in t.shells.iter().enumerate() {
        assert!(*s > 0, "empty shell at {r}");
        vol += s;
    }
    assert_eq!(vol, t.volume);
    assert_eq!(&t.shells[..3], &[1, 4, 12]);
}
