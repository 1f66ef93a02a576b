mod common;

use common::operator;
use goursat_core::expr_parser::Operator;
use goursat_core::newton_polygon::{build_polygon, principal_part, toeplitz_symbol};
use goursat_core::par::Execution;
use goursat_core::solvability::{
    check_hw, classify, spectral_condition, toeplitz_sections, winding_number, zero_moduli, SolvabilityError, VerdictKind,
    WInterval,
};
use num_rational::BigRational;
use proptest::prelude::*;

const PREC: u32 = 128;

/// (s, j, α) for every side index and every term on that side.
fn contacts(op: &Operator) -> Vec<(BigRational, u32, u32)> {
    let mut out = Vec::new();
    for side in build_polygon(op).sides {
        let Some(s) = side.gevrey_index() else { continue };
        for (j, a) in principal_part(op, &s).unwrap().terms().keys() {
            out.push((s.clone(), *j, *a));
        }
    }
    out
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hw_holds_exactly_where_the_winding_vanishes(op in operator(6, 3), logs in prop::collection::vec(-4.0f64..4.0, 6)) {
        for (s, j, a) in contacts(&op) {
            let ivs = check_hw(&op, &s, j, a, PREC).unwrap();
            let (_, f) = toeplitz_symbol(&op, &s, j).unwrap();
            let (_, mods) = zero_moduli(&f, PREC).unwrap();
            let mut ws: Vec<f64> = ivs.iter().map(WInterval::midpoint).collect();
            ws.extend(logs.iter().map(|l| l.exp()));
            for w in ws {
                if mods.iter().any(|(r, _)| (r - w).abs() <= 1e-6 * w) {
                    continue;
                }
                let n = match winding_number(&f, w, PREC) {
                    Ok(n) => n,
                    Err(SolvabilityError::ZeroOnContour(_)) => continue,
                    Err(e) => return Err(TestCaseError::fail(format!("w = {w}: {e}"))),
                };
                prop_assert_eq!(ivs.iter().any(|iv| iv.contains(w)), n == 0, "s = {}, (j, α) = ({}, {}), w = {}", s, j, a, w);
            }
        }
    }

    #[test]
    fn spectral_witness_satisfies_hw(op in operator(6, 3)) {
        for (s, j, a) in contacts(&op) {
            if let Some(w) = spectral_condition(&op, &s, j, a).unwrap() {
                let ivs = check_hw(&op, &s, j, a, PREC).unwrap();
                prop_assert!(ivs.iter().any(|iv| iv.contains(w)), "witness {} outside {:?}", w, ivs);
            }
        }
    }

    #[test]
    fn classify_interval_matches_hw(op in operator(5, 3)) {
        for (s, j, a) in contacts(&op) {
            let v = classify(&op, &s, j, a, 4, PREC, Execution::Sequential).unwrap();
            if v.kind != VerdictKind::FredholmWithGap {
                continue;
            }
            let iv = v.w_interval.unwrap();
            let ivs = check_hw(&op, &s, j, a, PREC).unwrap();
            prop_assert!(ivs.iter().any(|h| close(h.lo, iv.lo) && close(h.hi, iv.hi)), "{:?} not among {:?}", iv, ivs);
        }
    }

    #[test]
    fn segment_end_points_give_triangular_sections(op in operator(6, 3)) {
        for side in build_polygon(&op).sides {
            let Some(s) = side.gevrey_index() else { continue };
            let pp = principal_part(&op, &s).unwrap();
            let js: Vec<u32> = pp.terms().keys().map(|k| k.0).collect();
            for j in [*js.iter().min().unwrap(), *js.iter().max().unwrap()] {
                let (_, f) = toeplitz_symbol(&op, &s, j).unwrap();
                let rep = toeplitz_sections(&f, 6, Execution::Sequential);
                prop_assert!(rep.all_invertible, "s = {}, j = {}", s, j);
            }
        }
    }
}
