mod common;

use common::{nonzero_rc, operator, rc};
use goursat_core::expr_parser::{format_operator, format_series, parse_operator, parse_series, Operator};
use goursat_core::numeric::RationalComplex;
use proptest::prelude::*;

fn eval_terms(terms: &[((u32, u32), RationalComplex)], l: &RationalComplex, z: &RationalComplex) -> RationalComplex {
    let mut acc = RationalComplex::zero();
    for ((j, a), c) in terms {
        acc += &(&(c * &l.pow(*j)) * &z.pow(*a));
    }
    acc
}

fn factor() -> impl Strategy<Value = Vec<((u32, u32), RationalComplex)>> {
    prop::collection::vec(((0u32..=2, 0u32..=2), nonzero_rc(5, 3)), 1..=3)
}

const TOKENS: &[&str] =
    &["Dt", "Dz", "^", "2", "3", "(", ")", "+", "-", "*", "/", "i", "1/3", "0.5", " ", "7i", "^0", "x", ".", "//"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn format_then_parse_is_identity(op in operator(6, 4)) {
        let text = format_operator(&op);
        prop_assert_eq!(parse_operator(&text).unwrap(), op, "text {}", text);
    }

    #[test]
    fn parser_never_panics_on_text(s in "\\PC{0,40}") {
        let _ = parse_operator(&s);
        let _ = parse_series(&s);
    }

    #[test]
    fn parser_never_panics_on_token_soup(idx in prop::collection::vec(0..TOKENS.len(), 0..24)) {
        let s: String = idx.iter().map(|&i| TOKENS[i]).collect();
        let _ = parse_operator(&s);
    }

    #[test]
    fn factored_text_expands_to_the_product(
        factors in prop::collection::vec((factor(), 1u32..=2), 1..=3),
        points in prop::collection::vec((rc(7, 5), rc(7, 5)), 20),
    ) {
        let mut text = String::new();
        for (i, (f, e)) in factors.iter().enumerate() {
            if i > 0 {
                text.push('*');
            }
            let op = Operator::from_terms(f);
            let body = match op {
                Ok(op) => format_operator(&op),
                Err(_) => "0".to_string(),
            };
            text.push_str(&format!("({body})^{e}"));
        }
        let parsed = parse_operator(&text);
        for (l, z) in &points {
            let mut want = RationalComplex::one();
            for (f, e) in &factors {
                want = &want * &eval_terms(f, l, z).pow(*e);
            }
            match &parsed {
                Ok(op) => prop_assert_eq!(op.eval(l, z), want, "text {}", &text),
                Err(_) => prop_assert!(want.is_zero(), "text {} rejected but nonzero", &text),
            }
        }
    }

    #[test]
    fn series_text_roundtrip(s in common::bi(3, 4)) {
        let text = format_series(&s);
        prop_assert_eq!(parse_series(&text).unwrap(), s);
    }
}
