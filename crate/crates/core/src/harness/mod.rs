//! Seeded corpora, exhaustive verification suites with JSON reports, and
//! the fixed showcase classification table.

mod corpus;
mod report;
mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

pub use corpus::{generate_corpus, showcase, CorpusSpec};
pub use report::{
    Failure, NegativeControl, VerificationReport, MAX_RECORDED_FAILURES, SCHEMA_VERSION,
};
pub use suites::hom_count_formula;

use crate::classify::{classify, Verdict, Verdicts};
use crate::descriptor::GroupDescriptor;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::structure::{ulm_invariants, UlmInvariants};
use crate::subgroup::DEFAULT_SUBGROUP_BOUND;

/// Every suite name accepted by [`run_suite`].
pub const SUITES: [&str; 13] = [
    "lemma-good",
    "prop-size",
    "hom-count",
    "first-iso",
    "hzero-split",
    "extend-epi",
    "chain",
    "summand-closure",
    "semirigid",
    "dirsum",
    "count-finite",
    "finite-hopf",
    "ulm-oracle",
];

/// Largest `max_order` accepted by the suites that enumerate homomorphisms.
pub const HOM_SUITE_BOUND: u64 = 64;

/// Pluggable pieces of the suites, so that tests can inject a wrong formula
/// and watch the suite fail.
#[derive(Clone, Copy)]
pub struct SuiteContext {
    pub ulm: fn(&FiniteAbelianGroup, u64) -> UlmInvariants,
}

impl Default for SuiteContext {
    fn default() -> Self {
        SuiteContext {
            ulm: ulm_invariants,
        }
    }
}

/// Bounds for a run; `None` picks the suite's default.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub max_order: Option<u64>,
    pub seed: Option<u64>,
    pub size: Option<usize>,
}

/// Default `max_order` of a finite-group suite.
pub fn default_max_order(suite: &str) -> Option<u64> {
    Some(match suite {
        "lemma-good" | "hzero-split" => 64,
        "prop-size" => 256,
        "hom-count" | "first-iso" | "finite-hopf" | "extend-epi" => 32,
        "ulm-oracle" => 1024,
        _ => return None,
    })
}

pub const DEFAULT_CORPUS_SIZE: usize = 1000;

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<VerificationReport> {
    run_suite_with(name, config, &SuiteContext::default())
}

pub fn run_suite_with(
    name: &str,
    config: &SuiteConfig,
    ctx: &SuiteContext,
) -> Result<VerificationReport> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    let start = Instant::now();
    let seed = config.seed.unwrap_or(0);
    let mut bounds: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    let tally = match default_max_order(name) {
        Some(default) => {
            let max_order = config.max_order.unwrap_or(default);
            let hard = match name {
                "hom-count" | "first-iso" | "finite-hopf" | "extend-epi" => HOM_SUITE_BOUND,
                "ulm-oracle" => crate::structure::BRUTE_ULM_BOUND,
                _ => DEFAULT_SUBGROUP_BOUND,
            };
            if max_order > hard {
                return Err(Error::BoundExceeded {
                    order: max_order,
                    bound: hard,
                });
            }
            bounds.insert("max_order".into(), json!(max_order));
            match name {
                "lemma-good" => {
                    bounds.insert("primes".into(), json!([2, 3]));
                    suites::lemma_good(ctx, max_order)?
                }
                "prop-size" => {
                    bounds.insert("primes".into(), json!([2, 3]));
                    bounds.insert("max_rank".into(), json!(suites::PROP_SIZE_MAX_RANK));
                    suites::prop_size(max_order)?
                }
                "hom-count" => suites::hom_count(max_order)?,
                "first-iso" => suites::first_iso(max_order)?,
                "hzero-split" => suites::hzero_split(max_order)?,
                "extend-epi" => {
                    bounds.insert("levels".into(), json!([1, 2]));
                    suites::extend_epi_suite(max_order)?
                }
                "finite-hopf" => suites::finite_hopf(max_order)?,
                "ulm-oracle" => suites::ulm_oracle(ctx, max_order)?,
                _ => unreachable!("every finite suite has a default order"),
            }
        }
        None => {
            let spec = CorpusSpec {
                seed,
                size: config.size.unwrap_or(DEFAULT_CORPUS_SIZE),
                ..CorpusSpec::default()
            };
            bounds.insert(
                "corpus".into(),
                serde_json::to_value(&spec).expect("spec serializes"),
            );
            let corpus = generate_corpus(&spec)?;
            match name {
                "chain" => suites::chain(&corpus),
                "summand-closure" => suites::summand_closure(&corpus),
                "semirigid" => suites::semirigid(&corpus)?,
                "dirsum" => {
                    bounds.insert("finite_order".into(), json!(suites::DIRSUM_FINITE_ORDER));
                    suites::dirsum(&corpus)?
                }
                "count-finite" => suites::count_finite(&corpus),
                _ => unreachable!("suite names are checked above"),
            }
        }
    };
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        suite: name.to_string(),
        passed: tally.failure_count == 0,
        instances_checked: tally.instances,
        failure_count: tally.failure_count,
        failures: tally.failures,
        negative_controls: tally.negative_controls,
        seed,
        bounds,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// The twelve showcase descriptors with their expected verdicts `[H, RH, WH, DF]`.
pub fn showcase_table() -> Vec<(&'static str, [Verdict; 4])> {
    use Verdict::{No, Yes};
    vec![
        ("Z(2^inf)", [No, Yes, Yes, Yes]),
        ("B(2)", [No, No, Yes, Yes]),
        ("Z^w", [No, No, No, No]),
        ("Z(3)^w", [No, No, No, No]),
        ("Q^3", [Yes, Yes, Yes, Yes]),
        ("Z^2 + Z(2^2)^5", [Yes, Yes, Yes, Yes]),
        ("Z(3^inf)", [No, Yes, Yes, Yes]),
        ("B(3)", [No, No, Yes, Yes]),
        ("Z(2)^w", [No, No, No, No]),
        ("Q", [Yes, Yes, Yes, Yes]),
        ("Z(2) + Z(2^2)^2 + Z(3)", [Yes, Yes, Yes, Yes]),
        ("Z(2^inf) + Q", [No, Yes, Yes, Yes]),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub descriptor: GroupDescriptor,
    pub verdicts: Verdicts,
}

/// The showcase table as computed by the classifier, in JSON.
pub fn golden_table_json() -> String {
    let rows: Vec<GoldenRow> = showcase_table()
        .into_iter()
        .map(|(text, _)| {
            let descriptor = GroupDescriptor::parse(text).expect("showcase parses");
            let verdicts = classify(&descriptor).verdicts;
            GoldenRow {
                descriptor,
                verdicts,
            }
        })
        .collect();
    let doc = json!({ "schema": SCHEMA_VERSION, "rows": rows });
    serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
}
