#![allow(dead_code)]

use goursat_core::expr_parser::Operator;
use goursat_core::numeric::RationalComplex;
use goursat_core::series_core::{BiSeries, UniSeries};
use num_rational::BigRational;
use proptest::prelude::*;
use std::collections::BTreeMap;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rat(num: i64, den: i64) -> impl Strategy<Value = BigRational> {
    (-num..=num, 1..=den).prop_map(|(n, d)| q(n, d))
}

pub fn rc(num: i64, den: i64) -> impl Strategy<Value = RationalComplex> {
    (rat(num, den), prop::option::of(rat(num, den))).prop_map(|(re, im)| RationalComplex::new(re, im.unwrap_or_else(|| q(0, 1))))
}

pub fn nonzero_rc(num: i64, den: i64) -> impl Strategy<Value = RationalComplex> {
    rc(num, den).prop_filter("nonzero", |c| !c.is_zero())
}

pub fn real_rc(num: i64, den: i64) -> impl Strategy<Value = RationalComplex> {
    rat(num, den).prop_map(RationalComplex::real)
}

/// Operators with up to `n` terms of order ≤ `ord` in each variable.
pub fn operator(n: usize, ord: u32) -> impl Strategy<Value = Operator> {
    prop::collection::btree_map((0..=ord, 0..=ord), nonzero_rc(6, 4), 1..=n)
        .prop_map(|m: BTreeMap<(u32, u32), RationalComplex>| Operator::new(m).unwrap())
}

/// Operators with a nonzero ∂t-order.
pub fn evolution_operator(n: usize, ord: u32) -> impl Strategy<Value = Operator> {
    operator(n, ord).prop_filter("needs a Dt term", |op| op.t_order() > 0)
}

pub fn uni(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = UniSeries> {
    prop::collection::vec(rc(9, 7), len).prop_map(UniSeries::from_vec)
}

pub fn bi(tt: u32, tz: u32) -> impl Strategy<Value = BiSeries> {
    prop::collection::vec(rc(9, 5), ((tt + 1) * (tz + 1)) as usize).prop_map(move |v| {
        let mut s = BiSeries::zero(tt, tz);
        for (i, c) in v.into_iter().enumerate() {
            s.set(i as u32 / (tz + 1), i as u32 % (tz + 1), c);
        }
        s
    })
}
