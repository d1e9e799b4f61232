//! The acceptance run: eight criteria, one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hopfkit_core::catalog::{all_groups, all_p_groups, p_groups};
use hopfkit_core::harness::showcase_table;
use hopfkit_core::{
    brute_ulm, classify, run_suite, ulm_invariants, GroupDescriptor, SuiteConfig, Verdict,
    VerificationReport,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn suite(name: &str, max_order: Option<u64>) -> VerificationReport {
    let config = SuiteConfig {
        max_order,
        seed: Some(0),
        size: Some(1000),
    };
    run_suite(name, &config).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn summary(r: &VerificationReport) -> String {
    let first = r
        .failures
        .first()
        .map(|f| {
            format!(
                "; first failure {} (expected {}, got {})",
                f.instance, f.expected, f.actual
            )
        })
        .unwrap_or_default();
    format!(
        "{} {} instances, {} failures{first}",
        r.suite, r.instances_checked, r.failure_count
    )
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

fn lemma_good() -> Outcome {
    let start = Instant::now();
    let groups_of_2 = p_groups(2, 64).len();
    let r = suite("lemma-good", Some(64));
    let elapsed = start.elapsed();
    let control = r
        .negative_controls
        .iter()
        .find(|c| c.instance.contains("[4]"))
        .is_some_and(|c| c.detected && c.observation == "f_0(G)=0 vs f_0(G/N)+f_0(N)=2");
    Outcome {
        passed: r.passed && groups_of_2 == 29 && control && within(elapsed, 120),
        detail: format!(
            "{}; {groups_of_2} groups for p=2; non-pure Z(4) control (f_0 0 vs 2) detected: {control}; {:.1}s (limit 120s)",
            summary(&r),
            elapsed.as_secs_f64()
        ),
    }
}

fn prop_size() -> Outcome {
    let start = Instant::now();
    let r = suite("prop-size", Some(256));
    let elapsed = start.elapsed();
    Outcome {
        passed: r.passed && within(elapsed, 60),
        detail: format!("{}; {:.1}s (limit 60s)", summary(&r), elapsed.as_secs_f64()),
    }
}

fn hom_count() -> Outcome {
    let r = suite("hom-count", Some(32));
    Outcome {
        passed: r.passed,
        detail: summary(&r),
    }
}

fn ulm_oracle() -> Outcome {
    let groups = all_p_groups(1 << 10);
    let mut mismatches = Vec::new();
    for g in &groups {
        let p = g.primes()[0];
        let brute = brute_ulm(g, p).expect("within the brute-force bound");
        let fast = ulm_invariants(g, p);
        if brute != fast {
            mismatches.push(format!("{g}: {fast} vs {brute}"));
        }
    }
    Outcome {
        passed: mismatches.is_empty() && !groups.is_empty(),
        detail: format!(
            "{} p-groups of order <= 1024, {} mismatches{}",
            groups.len(),
            mismatches.len(),
            mismatches
                .first()
                .map(|m| format!("; first {m}"))
                .unwrap_or_default()
        ),
    }
}

fn constructive() -> Outcome {
    let split = suite("hzero-split", Some(64));
    let epi = suite("extend-epi", Some(32));
    Outcome {
        passed: split.passed && epi.passed,
        detail: format!("{}; {}", summary(&split), summary(&epi)),
    }
}

fn golden() -> Outcome {
    let mut wrong = Vec::new();
    let mut rows = 0;
    for (text, expected) in showcase_table() {
        rows += 1;
        let d = GroupDescriptor::parse(text).expect("showcase descriptors parse");
        let got = classify(&d).verdicts.as_array();
        if got != expected {
            wrong.push(format!("{text}: expected {expected:?}, got {got:?}"));
        }
    }
    let finite = all_groups(256);
    for g in &finite {
        let d = GroupDescriptor::from_finite(g);
        let got = classify(&d).verdicts.as_array();
        if got != [Verdict::Yes; 4] {
            wrong.push(format!("{d}: expected all yes, got {got:?}"));
        }
    }
    Outcome {
        passed: wrong.is_empty(),
        detail: format!(
            "{rows} showcase rows and {} finite groups of order <= 256, {} mismatches{}",
            finite.len(),
            wrong.len(),
            wrong
                .first()
                .map(|m| format!("; first {m}"))
                .unwrap_or_default()
        ),
    }
}

fn classifier_properties() -> Outcome {
    let start = Instant::now();
    let reports: Vec<VerificationReport> = [
        "chain",
        "summand-closure",
        "semirigid",
        "dirsum",
        "count-finite",
    ]
    .into_iter()
    .map(|name| suite(name, None))
    .collect();
    let elapsed = start.elapsed();
    let all = reports.iter().all(|r| r.passed);
    let parts: Vec<String> = reports.iter().map(summary).collect();
    Outcome {
        passed: all && within(elapsed, 30),
        detail: format!(
            "1000-descriptor corpus, seed 0: {}; {:.1}s (limit 30s)",
            parts.join("; "),
            elapsed.as_secs_f64()
        ),
    }
}

fn finite_hopf() -> Outcome {
    let r = suite("finite-hopf", Some(32));
    Outcome {
        passed: r.passed,
        detail: summary(&r),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "additivity of Ulm invariants over pure subgroups",
            lemma_good,
        ),
        ("rank of quotients of p-groups", prop_size),
        ("homomorphism counts against the closed form", hom_count),
        ("Ulm invariants against brute force", ulm_oracle),
        (
            "constructive splitting and epimorphism extension",
            constructive,
        ),
        ("classifier golden table", golden),
        ("classifier property suites", classifier_properties),
        ("finite groups are Hopfian", finite_hopf),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.passed);
        println!(
            "criterion {}: {verdict} {title} [{:.1}s] {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
