use std::path::PathBuf;

use hopfkit_core::harness::{golden_table_json, showcase_table, SUITES};
use hopfkit_core::{
    run_suite, run_suite_with, Error, FiniteAbelianGroup, SuiteConfig, SuiteContext, UlmInvariants,
    Verdict,
};
use serde_json::Value;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/showcase.json")
}

#[test]
fn showcase_matches_golden_file() {
    let computed = golden_table_json();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(golden_path(), &computed).unwrap();
    }
    let stored = std::fs::read_to_string(golden_path()).unwrap();
    assert_eq!(
        computed, stored,
        "rerun with UPDATE_GOLDEN=1 after an intended change"
    );
}

#[test]
fn golden_file_agrees_with_expected_verdicts() {
    let stored: Value =
        serde_json::from_str(&std::fs::read_to_string(golden_path()).unwrap()).unwrap();
    let rows = stored["rows"].as_array().unwrap();
    let expected = showcase_table();
    assert_eq!(rows.len(), expected.len());
    for (row, (text, verdicts)) in rows.iter().zip(expected) {
        let d: hopfkit_core::GroupDescriptor = text.parse().unwrap();
        assert_eq!(row["descriptor"], d.to_string());
        for (class, v) in ["H", "RH", "WH", "DF"].into_iter().zip(verdicts) {
            let want = if v == Verdict::Yes { "yes" } else { "no" };
            assert_eq!(row["verdicts"][class], want, "{text} {class}");
        }
    }
}

/// Off by one at `f_0` whenever the group has a cyclic summand of order `p`.
fn wrong_ulm(g: &FiniteAbelianGroup, p: u64) -> UlmInvariants {
    let right = hopfkit_core::ulm_invariants(g, p);
    let mut values: Vec<_> = (0..=right.values.len()).map(|k| right.f(k)).collect();
    if values[0].is_finite() && !values[0].is_zero() {
        values[0] = values[0].checked_sub(1).unwrap();
    }
    UlmInvariants::new(p, values, right.beyond, right.f_inf)
}

#[test]
fn injected_ulm_error_is_caught() {
    let ctx = SuiteContext { ulm: wrong_ulm };
    let config = SuiteConfig {
        max_order: Some(64),
        ..SuiteConfig::default()
    };
    for suite in ["ulm-oracle", "lemma-good"] {
        let report = run_suite_with(suite, &config, &ctx).unwrap();
        assert!(!report.passed, "{suite}");
        assert_eq!(report.exit_code(), 1);
        assert!(report.failure_count > 0);
        let first = &report.failures[0];
        assert!(first.instance.contains("G=["), "{suite}: {first:?}");
        assert_ne!(first.expected, first.actual);
    }
}

#[test]
fn reports_are_reproducible() {
    for suite in ["chain", "dirsum", "lemma-good"] {
        let config = SuiteConfig {
            max_order: Some(32),
            seed: Some(7),
            size: Some(200),
        };
        let a = run_suite(suite, &config).unwrap();
        let b = run_suite(suite, &config).unwrap();
        assert_eq!(
            a.to_json_without_timing(),
            b.to_json_without_timing(),
            "{suite}"
        );
    }
}

#[test]
fn report_json_layout() {
    let config = SuiteConfig {
        size: Some(50),
        seed: Some(3),
        ..SuiteConfig::default()
    };
    let r = run_suite("semirigid", &config).unwrap();
    let v: Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "semirigid");
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["bounds"]["corpus"]["size"], 50);
    assert!(v["failures"].as_array().unwrap().is_empty());
    assert!(v["elapsed_seconds"].as_f64().unwrap() >= 0.0);

    let lemma = run_suite(
        "lemma-good",
        &SuiteConfig {
            max_order: Some(8),
            ..SuiteConfig::default()
        },
    )
    .unwrap();
    let v: Value = serde_json::from_str(&lemma.to_json()).unwrap();
    assert_eq!(v["negative_controls"][0]["detected"], true);
}

#[test]
fn failures_are_capped() {
    // Every instance of the oracle suite fails under a constant formula.
    fn zero(_: &FiniteAbelianGroup, p: u64) -> UlmInvariants {
        UlmInvariants::new(p, Vec::new(), 0u64.into(), 0u64.into())
    }
    let config = SuiteConfig {
        max_order: Some(4096),
        ..SuiteConfig::default()
    };
    let r = run_suite_with("ulm-oracle", &config, &SuiteContext { ulm: zero }).unwrap();
    assert!(r.failure_count > 200, "{}", r.failure_count);
    assert_eq!(
        r.failures.len(),
        hopfkit_core::harness::MAX_RECORDED_FAILURES
    );
}

#[test]
fn every_suite_runs_small() {
    for suite in SUITES {
        let config = SuiteConfig {
            max_order: Some(8),
            seed: Some(1),
            size: Some(30),
        };
        let r = run_suite(suite, &config).unwrap();
        assert!(r.passed, "{suite}: {:?}", r.failures.first());
        assert!(r.instances_checked > 0, "{suite}");
    }
}

#[test]
fn unknown_suite_and_bounds() {
    assert!(matches!(
        run_suite("no-such-suite", &SuiteConfig::default()),
        Err(Error::UnknownSuite(name)) if name == "no-such-suite"
    ));
    let too_big = |n| SuiteConfig {
        max_order: Some(n),
        ..SuiteConfig::default()
    };
    for (suite, bound) in [
        ("finite-hopf", 64),
        ("first-iso", 64),
        ("lemma-good", 4096),
        ("ulm-oracle", 1 << 14),
    ] {
        assert!(matches!(
            run_suite(suite, &too_big(bound + 1)),
            Err(Error::BoundExceeded { order, bound: b }) if order == bound + 1 && b == bound
        ));
    }
    // A corpus of size 0 still holds the showcase descriptors.
    let showcase_only = SuiteConfig {
        size: Some(0),
        ..SuiteConfig::default()
    };
    assert!(
        run_suite("chain", &showcase_only)
            .unwrap()
            .instances_checked
            > 0
    );
}
