use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Version of the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Failures kept in a report; the rest are only counted.
pub const MAX_RECORDED_FAILURES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: String,
    pub expected: String,
    pub actual: String,
}

/// A check that is supposed to find a discrepancy, showing the suite can detect one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeControl {
    pub instance: String,
    pub observation: String,
    pub detected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub passed: bool,
    pub instances_checked: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative_controls: Vec<NegativeControl>,
    pub seed: u64,
    pub bounds: BTreeMap<String, serde_json::Value>,
    pub elapsed_seconds: f64,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON text with the timing zeroed, for comparing runs.
    pub fn to_json_without_timing(&self) -> String {
        let mut r = self.clone();
        r.elapsed_seconds = 0.0;
        r.to_json()
    }
}

/// Accumulates the outcome of one suite run.
#[derive(Clone, Debug, Default)]
pub(crate) struct Tally {
    pub instances: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub negative_controls: Vec<NegativeControl>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, instance: impl FnOnce() -> (String, String, String)) {
        self.instances += 1;
        if !ok {
            self.fail(instance);
        }
    }

    pub fn fail(&mut self, instance: impl FnOnce() -> (String, String, String)) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            let (instance, expected, actual) = instance();
            self.failures.push(Failure {
                instance,
                expected,
                actual,
            });
        }
    }

    /// Appends another tally, keeping order.
    pub fn merge(&mut self, other: Tally) {
        self.instances += other.instances;
        self.failure_count += other.failure_count;
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.negative_controls.extend(other.negative_controls);
    }
}
