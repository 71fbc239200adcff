//! Acceptance gate: nine criteria at their stated sizes and tolerances, one
//! PASS/FAIL line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use wbembed::embedding::Constants;
use wbembed::harness::verify::{
    sandwich_pairs, suite_barcode, suite_certificate, suite_coupling, suite_isometry,
    suite_localization, suite_sandwich, suite_whitney, suite_witness, suite_xi, suite_zeta,
    SuiteReport,
};

const SEED: u64 = 20240611;

type Criterion<'a> = Box<dyn Fn() -> SuiteReport + 'a>;

fn merge(name: &'static str, parts: Vec<SuiteReport>) -> SuiteReport {
    let mut out = SuiteReport {
        name,
        checks: 0,
        failed: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for p in parts {
        out.checks += p.checks;
        out.failed += p.failed;
        out.failures.extend(p.failures.into_iter().map(|f| format!("[{}] {f}", p.name)));
        out.notes.extend(p.notes.into_iter().map(|f| format!("[{}] {f}", p.name)));
    }
    out
}

fn constants_check(c: &Constants) -> SuiteReport {
    let mut rep = merge("constants", Vec::new());
    rep.checks = 2;
    if c.c0 != 2.0 * 81.0 * 144.0 * 3.0 {
        rep.failed += 1;
        rep.failures.push(format!("c0 = {}", c.c0));
    }
    let c2 = 100.0 * 2.0 * (48.0 * 2f64.sqrt()).powi(2);
    if (c.c2 - c2).abs() > 1e-9 * c2 {
        rep.failed += 1;
        rep.failures.push(format!("c2 = {} vs {c2}", c.c2));
    }
    rep
}

fn main() -> ExitCode {
    let start = Instant::now();
    let constants = Constants::for_dim(2);
    let rows = sandwich_pairs(SEED, 500, constants).expect("sampling the sandwich pairs");

    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 isometry oracle", Box::new(|| suite_isometry(SEED, 200))),
        ("2 coupling transforms", Box::new(|| suite_coupling(SEED, 1000))),
        ("3 whitney suite", Box::new(|| suite_whitney(SEED, 10_000, 10_000))),
        ("4 localization suite", Box::new(|| suite_localization(SEED, 10_000))),
        (
            "5 sandwich",
            Box::new(|| merge("sandwich", vec![constants_check(&constants), suite_sandwich(&rows)])),
        ),
        ("6 certificate validity", Box::new(|| suite_certificate(&rows))),
        (
            "7 xi and zeta",
            Box::new(|| merge("xi_zeta", vec![suite_xi(SEED, 1000), suite_zeta(&rows)])),
        ),
        ("8 non-doubling witness", Box::new(|| suite_witness(20))),
        ("9 barcode path", Box::new(|| suite_barcode(SEED, 300))),
    ];

    let mut all = true;
    for (label, run) in &criteria {
        let t = Instant::now();
        let rep = run();
        all &= rep.passed();
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {label}: {status} ({} checks, {} failed, {:.1}s)",
            rep.checks,
            rep.failed,
            t.elapsed().as_secs_f64()
        );
        for n in &rep.notes {
            println!("    {n}");
        }
        for f in &rep.failures {
            println!("    failure: {f}");
        }
    }
    println!(
        "acceptance: {} in {:.1}s",
        if all { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
