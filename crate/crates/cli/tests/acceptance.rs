//! One pass/fail line per acceptance criterion. Run with `--nocapture` to see the table.

use goursat_core::battery::{
    check_classify, check_commutation, check_heat_pipeline, check_heat_summability, check_moment_contour, check_slopes,
    check_special_functions, check_spectral, check_toeplitz, check_two_characteristic, check_winding, CheckResult,
};
use goursat_core::par::Execution;
use std::process::Command;

const SEED: u64 = 42;
const PREC: u32 = 128;

fn determinism() -> CheckResult {
    let run = || Command::new(env!("CARGO_BIN_EXE_goursat")).args(["verify", "--seed", "42"]).output().expect("binary runs");
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = same && a.status.code() == Some(0) && b.status.code() == Some(0);
    let detail = if same {
        format!("{} bytes identical, exit {:?}", a.stdout.len(), a.status.code())
    } else {
        "reports differ".to_string()
    };
    CheckResult {
        id: 12,
        name: "verify --seed 42 is byte-identical".into(),
        instances: 1,
        failures: usize::from(!ok),
        passed: ok,
        detail,
    }
}

#[test]
fn acceptance() {
    let exec = Execution::default();
    let checks: Vec<Box<dyn Fn() -> CheckResult>> = vec![
        Box::new(|| check_commutation(SEED, 200, PREC, exec)),
        Box::new(|| check_slopes(SEED, 200, PREC, exec)),
        Box::new(|| check_winding(SEED, 500, PREC, exec)),
        Box::new(|| check_spectral(SEED, 200, PREC, exec)),
        Box::new(|| check_classify(SEED, 100, PREC, exec)),
        Box::new(check_heat_pipeline),
        Box::new(|| check_two_characteristic(SEED, 50, exec)),
        Box::new(|| check_heat_summability(PREC)),
        Box::new(|| check_moment_contour(SEED, 50, PREC, exec)),
        Box::new(|| check_special_functions(PREC)),
        Box::new(|| check_toeplitz(exec)),
        Box::new(determinism),
    ];
    let mut failed = Vec::new();
    for c in checks {
        let r = c();
        println!("{}", r.line());
        if !r.passed {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
