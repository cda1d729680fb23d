mod common;

use common::*;
use mgl_core::classifier::{classify, ClassifyConfig, GrowthTag};
use mgl_core::{Mat2, MatrixSet, Rational};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn cfg() -> ClassifyConfig {
    ClassifyConfig::default()
}

#[test]
fn curated_sets_get_expected_tags() {
    for (name, s, tag) in tagged_sets() {
        let class = classify(&s, &cfg());
        assert_eq!(class.tag, tag, "{name}: {}", class.reason);
    }
}

#[test]
fn tags_survive_rational_rotations() {
    for (name, s, tag) in tagged_sets() {
        for q in rational_rotations() {
            let class = classify(&conjugate(&s, &q), &cfg());
            assert_eq!(class.tag, tag, "{name} conjugated: {}", class.reason);
        }
    }
}

#[test]
fn certified_bounds_hold_on_short_products() {
    for (name, s, _) in tagged_sets() {
        for base in std::iter::once(s.clone()).chain(rational_rotations().iter().map(|q| conjugate(&s, q))) {
            let class = classify(&base, &cfg());
            let Some(cert) = class.certificate else { continue };
            for n in 1..=6 {
                for (w, p) in all_products(base.matrices(), n) {
                    assert!(sum_norm(&p) <= cert.original_bound, "{name}: word {w:?}");
                }
            }
        }
    }
}

/// Diagonal entries `±1`, `±1/2`, `±1/3`; small upper-right entries.
fn tri_entry() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(ri(1)), Just(ri(-1)), Just(r(1, 2)), Just(r(-1, 2)), Just(r(1, 3)), Just(r(-1, 3))]
}

fn tri_set() -> impl Strategy<Value = MatrixSet<Rational>> {
    prop::collection::vec((tri_entry(), -3i64..=3, 1i64..=2, tri_entry()), 1..=3)
        .prop_map(|v| set(v.into_iter().map(|(a, p, q, c)| Mat2::upper(a, r(p, q), c)).collect()))
}

fn word_product(mats: &[Mat2<Rational>], word: &[usize]) -> Mat2<Rational> {
    word.iter().fold(Mat2::identity(), |acc, &a| &mats[a - 1] * &acc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounded_certificates_are_sound(s in tri_set()) {
        let class = classify(&s, &cfg());
        if let Some(cert) = class.certificate {
            prop_assert_eq!(class.tag, GrowthTag::Bounded);
            for n in 1..=5 {
                for (_, p) in all_products(s.matrices(), n) {
                    prop_assert!(sum_norm(&p) <= cert.original_bound);
                }
            }
        }
    }

    #[test]
    fn linear_witnesses_are_jordan(s in tri_set()) {
        let class = classify(&s, &cfg());
        if let Some(w) = class.witness {
            prop_assert_eq!(class.tag, GrowthTag::Linear);
            let b = word_product(s.matrices(), &w.word);
            prop_assert_eq!(&b.e11, &b.e22);
            prop_assert!(b.e11.abs().is_one());
            prop_assert!(!b.e12.is_zero());
            let rate = b.e12.abs() / ri(w.word.len() as i64);
            prop_assert!(w.rate_lower <= rate);
            // B^k has upper-right entry ±k·B_12.
            let b4 = (0..4).fold(Mat2::identity(), |acc, _| &b * &acc);
            prop_assert_eq!(b4.e12.abs(), b.e12.abs() * ri(4));
        }
    }

    #[test]
    fn scaled_sets_are_not_marginal(s in tri_set()) {
        // Every diagonal entry has modulus at least 1/3.
        let scaled = set(s.matrices().iter().map(|m| m.scale(&ri(4))).collect());
        prop_assert_eq!(classify(&scaled, &cfg()).tag, GrowthTag::NotMarginal);
    }

    #[test]
    fn tag_is_invariant_under_rotation(s in tri_set(), a in 1i64..6, b in 1i64..6) {
        let c2 = a * a + b * b;
        let q = Mat2::new(r(a * a - b * b, c2), r(-2 * a * b, c2), r(2 * a * b, c2), r(a * a - b * b, c2));
        let before = classify(&s, &cfg()).tag;
        prop_assert_eq!(classify(&conjugate(&s, &q), &cfg()).tag, before);
    }
}

#[test]
fn orthogonal_check_for_rotations() {
    for q in rational_rotations() {
        let qt = Mat2::new(q.e11.clone(), q.e21.clone(), q.e12.clone(), q.e22.clone());
        assert_eq!(&q * &qt, Mat2::identity());
        assert!((q.det() - Rational::one()).is_zero());
    }
}
