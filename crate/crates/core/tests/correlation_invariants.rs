use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dilate_lab::coeff::{build_weyl_table, compute_g, CoeffModel};
use dilate_lab::correlation::{exact_correlation, verify_lemma_block};

fn terms() -> impl Strategy<Value = Vec<(u64, Complex64)>> {
    prop::collection::vec((1u64..=32, -1.0f64..1.0, -1.0f64..1.0), 1..8).prop_map(|t| {
        t.into_iter()
            .map(|(k, re, im)| (k, Complex64::new(re, im)))
            .collect()
    })
}

#[test]
fn bound_holds_up_to_128() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..100 {
        let n_terms = rng.random_range(1..=8);
        let model = CoeffModel::from_terms((0..n_terms).map(|_| {
            (
                rng.random_range(1..=32u64),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        }))
        .unwrap();
        let g: Vec<f64> = (0..=128)
            .map(|r| {
                if r == 0 {
                    0.0
                } else {
                    compute_g(&model, r, 1e-12).unwrap().value
                }
            })
            .collect();
        for m in 1..=128u64 {
            for n in 1..=128u64 {
                let rep = exact_correlation(&model, m, n, 1e-12).unwrap();
                let bound = g[rep.m_reduced as usize] + g[rep.n_reduced as usize];
                assert!(rep.lambda <= bound + 1e-10, "({m},{n})");
            }
        }
    }
}

proptest! {
    #[test]
    fn gcd_invariance(t in terms(), m in 1u64..40, n in 1u64..40, s in 1u64..=8) {
        let model = CoeffModel::from_terms(t).unwrap();
        let a = exact_correlation(&model, m, n, 1e-12).unwrap();
        let b = exact_correlation(&model, s * m, s * n, 1e-12).unwrap();
        prop_assert_eq!(a.lambda, b.lambda);
        prop_assert_eq!((a.m_reduced, a.n_reduced), (b.m_reduced, b.n_reduced));
    }

    #[test]
    fn symmetric_in_m_and_n(t in terms(), m in 1u64..40, n in 1u64..40) {
        let model = CoeffModel::from_terms(t).unwrap();
        let a = exact_correlation(&model, m, n, 1e-12).unwrap();
        let b = exact_correlation(&model, n, m, 1e-12).unwrap();
        prop_assert!((a.exact_value - b.exact_value).abs() <= 1e-14);
    }

    #[test]
    fn scaling_by_u(t in terms(), ure in -2.0f64..2.0, uim in -2.0f64..2.0, r in 0u32..5, seed in any::<u64>()) {
        let u = Complex64::new(ure, uim);
        prop_assume!(u.norm() > 0.1);
        let w = u.norm_sqr();
        let base = CoeffModel::from_terms(t.clone()).unwrap();
        let scaled = CoeffModel::from_terms(t.into_iter().map(|(k, a)| (k, a * u))).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()));
        for (m, n) in [(1, 2), (3, 5), (4, 6), (7, 7)] {
            let a = exact_correlation(&base, m, n, 1e-12).unwrap();
            let b = exact_correlation(&scaled, m, n, 1e-12).unwrap();
            prop_assert!(close(a.lambda * w, b.lambda));
            prop_assert!(close(a.bound * w, b.bound));
        }
        let top = 1usize << (r + 1);
        let ta = build_weyl_table(&base, top, 1e-12).unwrap();
        let tb = build_weyl_table(&scaled, top, 1e-12).unwrap();
        for n in 1..=top {
            prop_assert!(close(ta.h(n) * w, tb.h(n)));
            prop_assert!(close(ta.big_g(n) * w, tb.big_g(n)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..1usize << r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let la = verify_lemma_block(&base, &ta, r, &c, 1e-12).unwrap();
        let lb = verify_lemma_block(&scaled, &tb, r, &c, 1e-12).unwrap();
        prop_assert!(close(la.exact_integral * w, lb.exact_integral));
        prop_assert!(close(la.bound_rhs * w, lb.bound_rhs));
        prop_assert_eq!(la.holds, lb.holds);
    }

    #[test]
    fn lemma_holds(t in terms(), r in 0u32..=6, seed in any::<u64>()) {
        let model = CoeffModel::from_terms(t).unwrap();
        let table = build_weyl_table(&model, 1 << (r + 1), 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..1usize << r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let form = verify_lemma_block(&model, &table, r, &c, 1e-12).unwrap();
        prop_assert!(form.holds, "ratio {:?}", form.ratio);
    }

    #[test]
    fn lemma_holds_for_power_laws(s in 0.6f64..2.5, r in 0u32..=5, seed in any::<u64>()) {
        let model = CoeffModel::power_law(s, None).unwrap();
        let table = build_weyl_table(&model, 1 << (r + 1), 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..1usize << r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let form = verify_lemma_block(&model, &table, r, &c, 1e-12).unwrap();
        prop_assert!(form.holds, "ratio {:?}", form.ratio);
    }
}
