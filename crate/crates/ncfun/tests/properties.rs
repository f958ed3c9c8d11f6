//! Property suites: exact ring laws on integer-coefficient polynomials,
//! parse/format round trips, the symbolic Leibniz rule, and consistency of
//! the numeric derivative machinery.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncfun::evaluator::{block_derivative, derivative_operator, eval_poly};
use ncfun::freealg::{parse_poly, NcPoly, Word};
use ncfun::linalg;
use ncfun::mattuple::op_norm;
use ncfun::sample;
use ncfun::C64;

fn word_strategy(d: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=d, 0..=max_len).prop_map(Word::from_letters)
}

/// Integer coefficients in [-4, 4] so products and sums stay exact in f64.
fn int_poly(d: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word_strategy(d, 4), -4i32..=4i32), 1..=20).prop_map(move |pairs| {
        NcPoly::from_terms(
            d,
            pairs.into_iter().map(|(w, k)| (w, C64::new(k as f64, 0.0))),
        )
        .expect("letters within range")
    })
}

/// Small complex coefficients on a fixed grid; exercises the complex-literal
/// path of the formatter without floating dust.
fn complex_poly(d: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word_strategy(d, 4), -3i32..=3i32, -3i32..=3i32), 1..=12).prop_map(
        move |triples| {
            NcPoly::from_terms(
                d,
                triples
                    .into_iter()
                    .map(|(w, re, im)| (w, C64::new(re as f64, im as f64 * 0.5))),
            )
            .expect("letters within range")
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplication_is_associative(
        p in int_poly(3),
        q in int_poly(3),
        r in int_poly(3),
    ) {
        let left = p.mul(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&q.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes_over_addition(
        p in int_poly(3),
        q in int_poly(3),
        r in int_poly(3),
    ) {
        let left = p.mul(&q.add(&r).unwrap()).unwrap();
        let right = p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn addition_is_commutative_and_cancels(
        p in int_poly(3),
        q in int_poly(3),
    ) {
        prop_assert_eq!(p.add(&q).unwrap(), q.add(&p).unwrap());
        prop_assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn parse_of_format_is_identity(p in complex_poly(3)) {
        let text = p.to_string();
        let back = parse_poly(&text, 3).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn leibniz_rule_holds_symbolically(
        p in int_poly(2),
        q in int_poly(2),
        var in 1usize..=2,
    ) {
        // D(pq) = D(p)·q + p·D(q) with the placeholder letter x3.
        let product = p.mul(&q).unwrap();
        let left = product.directional_derivative(var, 3).unwrap();
        let p3 = p.extend_vars(3).unwrap();
        let q3 = q.extend_vars(3).unwrap();
        let right = p
            .directional_derivative(var, 3)
            .unwrap()
            .mul(&q3)
            .unwrap()
            .add(&p3.mul(&q.directional_derivative(var, 3).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn derivative_is_homogeneous_of_degree_one_in_placeholder(
        p in int_poly(2),
        var in 1usize..=2,
    ) {
        let derived = p.directional_derivative(var, 3).unwrap();
        for (word, _) in derived.terms() {
            prop_assert_eq!(word.count(3), 1);
        }
    }

    #[test]
    fn degree_of_product_adds_for_nonzero_products(
        p in int_poly(2),
        q in int_poly(2),
    ) {
        let prod = p.mul(&q).unwrap();
        if !p.is_zero() && !q.is_zero() && !prod.is_zero() {
            prop_assert!(prod.degree() <= p.degree() + q.degree());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn direct_sum_is_associative_exactly(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::gaussian_tuple(&mut rng, 2, 2);
        let y = sample::gaussian_tuple(&mut rng, 2, 1);
        let z = sample::gaussian_tuple(&mut rng, 2, 3);
        let left = x.direct_sum(&y).unwrap().direct_sum(&z).unwrap();
        let right = x.direct_sum(&y.direct_sum(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn direct_sum_coordinate_norms_take_the_max(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::gaussian_tuple(&mut rng, 3, 2);
        let y = sample::gaussian_tuple(&mut rng, 3, 3);
        let sum = x.direct_sum(&y).unwrap();
        for i in 0..3 {
            let expected = op_norm(x.matrix(i)).max(op_norm(y.matrix(i)));
            prop_assert!((op_norm(sum.matrix(i)) - expected).abs() <= 1e-12 * (1.0 + expected));
        }
    }

    #[test]
    fn derivative_operator_reproduces_block_derivative(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2;
        let n = 3;
        let p = sample::random_poly(&mut rng, d, 3, 6);
        let x = sample::gaussian_tuple(&mut rng, d, n);
        let h = sample::gaussian_tuple(&mut rng, d, n);
        let op = derivative_operator(&p, &x, &[1, 2]).unwrap();
        let mut stacked = ncfun::CMat::zeros(2 * n * n, 1);
        stacked
            .view_mut((0, 0), (n * n, 1))
            .copy_from(&linalg::vectorize(h.matrix(0)));
        stacked
            .view_mut((n * n, 0), (n * n, 1))
            .copy_from(&linalg::vectorize(h.matrix(1)));
        let via_operator = linalg::unvectorize(&op.apply(&stacked).unwrap(), n, n);
        let direct = block_derivative(&p, &x, &h).unwrap();
        let scale = 1.0 + op_norm(&direct);
        prop_assert!(op_norm(&(via_operator - direct)) <= 1e-10 * scale);
    }

    #[test]
    fn level_one_evaluation_matches_commutative_collapse(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 3;
        let p = sample::random_poly(&mut rng, d, 4, 8);
        let x = sample::gaussian_tuple(&mut rng, d, 1);
        let value = eval_poly(&p, &x).unwrap()[(0, 0)];
        // Collapse each word to a commutative monomial evaluated by powers.
        let mut expected = C64::new(0.0, 0.0);
        for (word, &coeff) in p.terms() {
            let mut prod = C64::new(1.0, 0.0);
            for v in 1..=d {
                let count = word.count(v) as i32;
                prod *= x.matrix(v - 1)[(0, 0)].powi(count);
            }
            expected += coeff * prod;
        }
        let scale = 1.0 + p.coeff_l1() * x.max_coord_norm().max(1.0).powi(p.degree().max(0) as i32);
        prop_assert!((value - expected).norm() <= 1e-10 * scale);
    }

    #[test]
    fn spectrum_is_similarity_invariant_under_controlled_conditioning(
        seed in 0u64..1_000_000
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 4;
        let m = sample::gaussian_matrix(&mut rng, n, n);
        let s = sample::similarity_with_cond(&mut rng, n, 100.0);
        let conjugated = linalg::inverse(&s).unwrap() * &m * &s;
        let a = ncfun::mattuple::spectrum(&m);
        let b = ncfun::mattuple::spectrum(&conjugated);
        // Sorted by (re, im); matched pairing is adequate away from ties.
        let dist = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(dist <= 1e-8 * (1.0 + op_norm(&m)));
    }
}
