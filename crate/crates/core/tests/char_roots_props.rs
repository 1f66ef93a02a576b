mod common;

use common::{evolution_operator, nonzero_rc, operator, q};
use goursat_core::char_roots::{
    compose, invert_series, leading_degree, puiseux_expand, rebranch_simple_pole, residual_at, root_groups, slopes_consistency,
    PuiseuxSeries,
};
use goursat_core::expr_parser::Operator;
use goursat_core::numeric::{MpComplex, RationalComplex};
use proptest::prelude::*;

fn mp_series(cs: &[RationalComplex], prec: u32) -> Vec<MpComplex> {
    cs.iter().map(|c| MpComplex::from_rc(c, prec)).collect()
}

fn simple_pole(cs: &[RationalComplex], kappa: u32, prec: u32) -> PuiseuxSeries {
    PuiseuxSeries { kappa, lead_exp: q(1, 1), coeffs: mp_series(cs, prec), prec }
}

fn max_diff(a: &[MpComplex], b: &[MpComplex]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs().to_f64()).fold(0.0, f64::max)
}

fn conv(a: &[MpComplex], b: &[MpComplex], prec: u32) -> Vec<MpComplex> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).fold(MpComplex::zero(prec), |acc, i| &acc + &(&a[i] * &b[k - i]))).collect()
}

fn coeff_list(len: usize) -> impl Strategy<Value = Vec<RationalComplex>> {
    (nonzero_rc(5, 3), prop::collection::vec(common::rc(5, 3), len - 1))
        .prop_map(|(c0, rest)| std::iter::once(c0).chain(rest).collect())
}

/// Top λ-coefficient constant: the Dt^M term has no ∂z factor.
fn monic_in_dt(op: Operator) -> Operator {
    let m = op.t_order();
    let mut terms: Vec<_> = op.terms().iter().filter(|((j, _), _)| *j < m).map(|(k, v)| (*k, v.clone())).collect();
    terms.push(((m, 0), RationalComplex::one()));
    Operator::from_terms(&terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expansion_residual_decays_at_the_promised_rate(op in evolution_operator(6, 3), order in 3usize..=7, theta in -std::f64::consts::PI..std::f64::consts::PI) {
        // generic coefficients: factored operators have exact roots cζ^m and nothing to test
        let prec = 256;
        for g in root_groups(&op, prec).unwrap() {
            for (li, l) in g.leaders.iter().enumerate() {
                if l.multiplicity > 1 {
                    continue;
                }
                let Ok(ps) = puiseux_expand(&op, &g, li, order, prec) else { continue };
                let d = leading_degree(&op, &ps);
                let kappa = g.kappa as f64;
                let at = |r: f64| residual_at(&op, &ps, &MpComplex::from_c64(num_complex::Complex64::from_polar(r, theta), prec)).to_f64();
                let (r10, r100) = (at(10.0), at(100.0));
                let rate = (d - order as i64) as f64 / kappa;
                let floor = 2f64.powi(-200) * 100f64.powf(d as f64 / kappa);
                prop_assert!(
                    r100 <= 10.0 * r10 * 10f64.powf(rate) + floor,
                    "q = {}, leader {li}: r(10) = {r10:e}, r(100) = {r100:e}, rate {rate}", g.q
                );
            }
        }
    }

    #[test]
    fn rebranched_series_to_the_kappa_recovers_input(cs in coeff_list(10), kappa in 1u32..=4) {
        let prec = 128;
        let ps = simple_pole(&cs, kappa, prec);
        let b = rebranch_simple_pole(&ps).unwrap();
        prop_assert_eq!(b.kappa, 1);
        let mut pow = b.coeffs.clone();
        for _ in 1..kappa {
            pow = conv(&pow, &b.coeffs, prec);
        }
        let scale = ps.coeffs.iter().map(|c| c.abs().to_f64()).fold(1.0, f64::max);
        prop_assert!(max_diff(&pow, &ps.coeffs) <= 1e-25 * scale.powi(kappa as i32 + 10));
    }

    #[test]
    fn inversion_is_an_involution(cs in coeff_list(8)) {
        let prec = 192;
        let ps = simple_pole(&cs, 1, prec);
        let inv = invert_series(&ps, 8).unwrap();
        let back = invert_series(&inv, 8).unwrap();
        let scale = ps.coeffs.iter().map(|c| c.abs().to_f64()).fold(1.0, f64::max);
        let tol = 1e-30 * (scale / ps.coeffs[0].abs().to_f64()).powi(16).max(1.0);
        prop_assert!(max_diff(&back.coeffs, &ps.coeffs) <= tol * scale);
        let id = compose(&ps, &inv, 8).unwrap();
        let mut want = vec![MpComplex::zero(prec); 8];
        want[0] = MpComplex::one(prec);
        prop_assert!(max_diff(&id.coeffs, &want) <= tol);
    }

    #[test]
    fn multiplicities_add_up_to_the_dt_order(op in evolution_operator(6, 3).prop_map(monic_in_dt)) {
        // λ^m with m the lowest Dt-order factors out: those roots vanish identically
        let m = op.terms().keys().map(|k| k.0).min().unwrap();
        let total: u32 = root_groups(&op, 128).unwrap().iter().map(|g| g.total_multiplicity()).sum();
        prop_assert_eq!(total, op.t_order() - m);
    }

    #[test]
    fn slopes_consistency_holds_generically(op in operator(7, 4)) {
        let rep = slopes_consistency(&op, 128).unwrap();
        prop_assert!(rep.all_ok, "{:?}", rep);
    }
}
