mod common;

use common::{nonzero_rc, q, rc};
use goursat_core::battery::heat_problem;
use goursat_core::borel_lab::{
    angle_distance, borel_sum_eval, e_kernel, mittag_leffler, mittag_leffler_asymptotic, mittag_leffler_taylor,
    moment_pseudodiff_numeric, moment_pseudodiff_series, singular_direction_scan, summability_verdict, SampleMethod, Verdict,
};
use goursat_core::numeric::{factorial, MpComplex, RationalComplex};
use goursat_core::series_core::{borel_transform, UniSeries};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use std::f64::consts::PI;

fn index() -> impl Strategy<Value = BigRational> {
    prop::sample::select(vec![q(1, 1), q(3, 2), q(2, 1), q(5, 2), q(3, 1)])
}

/// u_n = w^n (2n)!/n!, so that B_1 u = Σ (wt)^n has one pole at t = 1/w.
fn single_pole_series(w: &RationalComplex, len: u32) -> UniSeries {
    UniSeries::from_vec(
        (0..len).map(|n| w.pow(n).scale(&BigRational::new(factorial(2 * n as u64), factorial(n as u64)))).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn e_kernel_of_level_one_is_mittag_leffler_minus_one(a in index(), r in 0.0f64..5.0, th in -PI..PI) {
        let prec = 128;
        let x = MpComplex::from_c64(Complex64::from_polar(r, th), prec);
        let lhs = e_kernel(&a, 1, &x, prec).unwrap();
        let rhs = &mittag_leffler(&a, &x, prec).unwrap() - &MpComplex::one(prec);
        let scale = rhs.abs().to_f64().max(1.0);
        prop_assert!((&lhs - &rhs).abs().to_f64() <= 1e-10 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mittag_leffler_methods_overlap(
        alpha in prop::sample::select(vec![q(1, 2), q(2, 3), q(3, 4), q(1, 1)]),
        x in 30.0f64..60.0,
        th in -PI..PI,
    ) {
        let prec = 128;
        let alpha_f = alpha.to_f64().unwrap();
        // |z|^(1/α) = x
        let z = MpComplex::from_c64(Complex64::from_polar(x.powf(alpha_f), th), prec);
        let t = mittag_leffler_taylor(&alpha, &z, prec);
        let (a, err) = mittag_leffler_asymptotic(&alpha, &z, prec);
        let scale = t.abs().to_f64().max(1.0);
        prop_assume!(err <= 1e-12 * scale);
        prop_assert!((&t - &a).abs().to_f64() <= 1e-8 * scale, "α = {}, z = {:?}", alpha, z.to_c64());
    }

    #[test]
    fn partial_sum_samples_match_direct_summation(
        w in nonzero_rc(3, 2),
        jitter in prop::collection::vec(rc(4, 3), 24),
        d in -PI..PI,
    ) {
        // B_1 coefficients (w^n)(1 + jitter_n/4): radius about 1/|w|
        let quarter = RationalComplex::from_frac(1, 4);
        let u = UniSeries::from_vec(
            (0..24u32)
                .map(|n| {
                    let b = &w.pow(n) * &(&RationalComplex::one() + &(&jitter[n as usize] * &quarter));
                    b.scale(&BigRational::new(factorial(2 * n as u64), factorial(n as u64)))
                })
                .collect(),
        );
        let radii: Vec<f64> = (1..=8).map(|k| 0.02 * k as f64).collect();
        let prof = borel_sum_eval(&u, &q(1, 1), d, &radii, 128).unwrap();
        let b = borel_transform(&u, &q(1, 1), 512).unwrap();
        for s in prof.samples.iter().filter(|s| s.method == SampleMethod::PartialSum) {
            let t = MpComplex::from_c64(Complex64::from_polar(s.r, d), 512);
            let mut acc = MpComplex::zero(512);
            for n in (0..=b.trunc()).rev() {
                acc = &(&acc * &t) + &MpComplex::from_rc(&b.get(n), 512);
            }
            let direct = acc.to_c64();
            let got = Complex64::new(s.re, s.im);
            prop_assert!((got - direct).norm() <= 1e-13 * direct.norm().max(1.0), "r = {}: {} vs {}", s.r, got, direct);
        }
    }

    #[test]
    fn scan_finds_the_single_pole(w in nonzero_rc(3, 2)) {
        let u = single_pole_series(&w, 22);
        let scan = singular_direction_scan(&u, &q(1, 1), 128).unwrap();
        let want = (-w.to_complex64().arg()).rem_euclid(2.0 * PI);
        prop_assert_eq!(scan.singular_directions.len(), 1, "{:?}", scan);
        prop_assert!(angle_distance(scan.singular_directions[0].direction, want) <= 0.05);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn moment_contour_matches_series(
        p in 1u32..=3,
        n in 0u32..=4,
        phi in prop::collection::vec(rc(4, 3), 1..=7).prop_map(UniSeries::from_vec),
        r in 0.0f64..0.5,
        th in -PI..PI,
    ) {
        let z = Complex64::from_polar(r, th);
        let eps = 4.0 * r.max(0.25);
        let num = moment_pseudodiff_numeric(&phi, p, n, z, eps).unwrap();
        let ser = moment_pseudodiff_series(&phi, p, n, z, 128).unwrap();
        prop_assert!((num.value() - ser).norm() <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn heat_verdict_is_stable_near_pi(dd in -0.3f64..0.3) {
        let p = heat_problem(40, 60);
        let v = summability_verdict(&p, PI + dd, 128).unwrap();
        prop_assert_eq!(v.verdict, Verdict::SummableEvidence);
    }
}
