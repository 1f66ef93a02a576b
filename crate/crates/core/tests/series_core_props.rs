mod common;

use common::{bi, operator, q, rc, uni};
use goursat_core::numeric::factorial;
use goursat_core::series_core::{apply_operator, borel_transform, build_goursat_data, gevrey_norm, moment_diff, GoursatData};
use num_rational::BigRational;
use proptest::prelude::*;

/// φ_k for k < j free; ψ_β free except for [t^k]ψ_β = β!/k! [z^β]φ_k.
fn compatible_data(j: u32, alpha: u32, trunc: u32) -> impl Strategy<Value = GoursatData> {
    let phis = prop::collection::vec(uni(trunc as usize + 1..=trunc as usize + 1), j as usize);
    let psis = prop::collection::vec(uni(trunc as usize + 1..=trunc as usize + 1), alpha as usize);
    (phis, psis).prop_map(|(phis, mut psis)| {
        for (b, psi) in psis.iter_mut().enumerate() {
            for (k, phi) in phis.iter().enumerate() {
                let r = BigRational::new(factorial(b as u64), factorial(k as u64));
                psi.set(k as u32, phi.get(b as u32).scale(&r));
            }
        }
        GoursatData::new(phis, psis).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn borel_commutes_with_dt(u in uni(2..=24), s in 0i64..=3) {
        let s = q(s, 1);
        let lhs = borel_transform(&u.derivative(), &s, 128).unwrap();
        let rhs = moment_diff(&borel_transform(&u, &s, 128).unwrap(), &(&s + q(1, 1)), 128).unwrap();
        prop_assert!(lhs.is_exact() && rhs.is_exact());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn borel_of_order_zero_is_identity(u in uni(1..=30)) {
        prop_assert_eq!(borel_transform(&u, &q(0, 1), 128).unwrap(), u);
    }

    #[test]
    fn moment_derivative_of_index_one_is_derivative(u in uni(2..=30)) {
        prop_assert_eq!(moment_diff(&u, &q(1, 1), 128).unwrap(), u.derivative());
    }

    #[test]
    fn apply_operator_is_linear(op in operator(4, 2), u in bi(5, 5), v in bi(5, 5), a in rc(5, 3), b in rc(5, 3)) {
        let lhs = apply_operator(&op, &u.scale(&a).add(&v.scale(&b))).unwrap();
        let rhs = apply_operator(&op, &u).unwrap().scale(&a).add(&apply_operator(&op, &v).unwrap().scale(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gevrey_norm_grows_with_the_window(
        u in bi(6, 6),
        (kt, kz) in (0u32..=6, 0u32..=6),
        (dt, dz) in (0u32..=3, 0u32..=3),
        s in 0i64..=4,
        w in 0.1f64..3.0,
        r in 0.1f64..3.0,
    ) {
        let s = q(s, 2);
        let small = gevrey_norm(&u.window(kt, kz), &s, w, r, 128);
        let big = gevrey_norm(&u.window((kt + dt).min(6), (kz + dz).min(6)), &s, w, r, 128);
        prop_assert!(small <= big * (1.0 + 1e-15), "{small} > {big}");
    }

    #[test]
    fn goursat_data_traces_reproduce_inputs(data in (0u32..=3, 0u32..=3).prop_flat_map(|(j, a)| compatible_data(j, a, 7))) {
        let trunc = 7;
        let (j, alpha) = (data.j(), data.alpha());
        let v = build_goursat_data(&data, trunc, trunc).unwrap();
        for k in 0..j {
            prop_assert_eq!(v.t_derivative_trace(k), data.phis()[k as usize].clone());
        }
        for b in 0..alpha {
            prop_assert_eq!(v.z_derivative_trace(b), data.psis()[b as usize].clone());
        }
        for k in j..=trunc {
            for b in alpha..=trunc {
                prop_assert!(v.get(k, b).is_zero());
            }
        }
    }
}
