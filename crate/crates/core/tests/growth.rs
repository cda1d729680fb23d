mod common;

use common::*;
use mgl_core::growth::{
    enumerate_growth, fekete_bracket, hull_dp_growth_with, hull_dp_matrices_with, periodic_lower_bound,
    EnumerationConfig, HullConfig, HullMode, NormKind,
};
use mgl_core::{Mat2, MatrixSet, Rational};
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exact() -> HullConfig {
    HullConfig { mode: HullMode::Exact, ..HullConfig::default() }
}

fn sum_cfg(n: usize) -> EnumerationConfig {
    let mut cfg = EnumerationConfig::new(n);
    cfg.norm = NormKind::Sum;
    cfg
}

fn signed_upper() -> impl Strategy<Value = MatrixSet<Rational>> {
    let diag = (prop_oneof![-2i64..=-1, 1i64..=2], 1i64..=3);
    let entry = (-2i64..=2, 1i64..=3);
    prop::collection::vec((diag.clone(), entry, diag), 1..=3).prop_map(|v| {
        set(v.into_iter().map(|((a, b), (c, d), (e, f))| Mat2::upper(r(a, b), r(c, d), r(e, f))).collect())
    })
}

fn unit_upper() -> impl Strategy<Value = MatrixSet<Rational>> {
    let unit = prop_oneof![Just(ri(1)), Just(r(1, 2)), Just(r(3, 4)), Just(r(1, 3))];
    prop::collection::vec((unit.clone(), -3i64..=3, unit), 1..=3)
        .prop_map(|v| set(v.into_iter().map(|(f, p, g)| Mat2::upper(f, r(p, 2), g)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_matches_enumeration_with_signs(s in signed_upper()) {
        let n = 7;
        let hull = hull_dp_matrices_with(&s, n, &exact()).unwrap();
        let mut cfg = EnumerationConfig::new(n);
        cfg.dedup = false;
        let en = enumerate_growth(&s, &cfg).unwrap();
        prop_assert_eq!(hull.c_exact, en.c_exact);
    }

    #[test]
    fn c_is_subadditive(s in unit_upper()) {
        let c = hull_dp_matrices_with(&s, 24, &exact()).unwrap().c_exact.unwrap();
        for m in 1..=12 {
            for n in 1..=12 {
                prop_assert!(c[m + n - 1] <= &c[m - 1] + &c[n - 1]);
            }
        }
    }

    #[test]
    fn sum_norm_is_submultiplicative(s in signed_upper()) {
        let a = enumerate_growth(&s, &sum_cfg(8)).unwrap().a_exact.unwrap();
        for m in 1..=4 {
            for n in 1..=4 {
                prop_assert!(a[m + n - 1] <= &a[m - 1] * &a[n - 1]);
            }
        }
    }

    #[test]
    fn enumeration_matches_plain_products(s in signed_upper()) {
        let curve = enumerate_growth(&s, &sum_cfg(5)).unwrap();
        let (a, c) = (curve.a_exact.unwrap(), curve.c_exact.unwrap());
        for n in 1..=5 {
            let prods = all_products(s.matrices(), n);
            let a_n = prods.iter().map(|(_, p)| sum_norm(p)).max().unwrap();
            let c_n = prods.iter().map(|(_, p)| p.e12.abs()).max().unwrap();
            prop_assert_eq!(&a[n - 1], &a_n);
            prop_assert_eq!(&c[n - 1], &c_n);
        }
    }

    #[test]
    fn pruning_keeps_maxima(v in prop::collection::vec((1i64..=3, 0i64..=3, 1i64..=3), 1..=3)) {
        let s = set(v.into_iter().map(|(a, b, c)| Mat2::upper(r(a, 2), r(b, 2), r(c, 3))).collect());
        let mut plain = sum_cfg(7);
        plain.dedup = false;
        let mut pruned = sum_cfg(7);
        pruned.prune_domination = true;
        let (x, y) = (enumerate_growth(&s, &plain).unwrap(), enumerate_growth(&s, &pruned).unwrap());
        prop_assert_eq!(x.a_exact, y.a_exact);
        prop_assert_eq!(x.c_exact, y.c_exact);
    }

    #[test]
    fn periodic_rate_is_below_fekete(s in unit_upper()) {
        if let Some(p) = periodic_lower_bound(&s, 6).unwrap() {
            let curve = hull_dp_matrices_with(&s, 64, &exact()).unwrap();
            let upper = fekete_bracket(&curve).unwrap().upper_exact.unwrap();
            prop_assert!(p.rate <= upper);
        }
    }

    #[test]
    fn float_hull_brackets_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng, 2, 2);
        let ex = hull_dp_growth_with(&spec, 40, &exact()).unwrap().c_exact.unwrap();
        let fl = hull_dp_growth_with(&spec, 40, &HullConfig { mode: HullMode::Float, ..HullConfig::default() }).unwrap();
        let lower = fl.c_lower_exact.unwrap();
        for n in 0..40 {
            prop_assert!(lower[n] <= ex[n]);
            let e = num_traits::ToPrimitive::to_f64(&ex[n]).unwrap();
            prop_assert!((fl.c_vals[n] - e).abs() <= 1e-9 * (1.0 + e));
        }
    }
}

#[test]
fn hull_matches_brute_force_on_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (alphabet, window, n) in [(2, 1, 9), (3, 1, 6), (2, 2, 8), (2, 3, 6)] {
        for _ in 0..8 {
            let spec = random_spec(&mut rng, alphabet, window);
            let c = hull_dp_growth_with(&spec, n, &exact()).unwrap().c_exact.unwrap();
            for len in 1..=n {
                assert_eq!(c[len - 1], brute_c(&spec, len), "N={alphabet} k={window} n={len}");
            }
        }
    }
}
