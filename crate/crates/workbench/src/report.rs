use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::RunConfig;

/// Bumped whenever the JSON layout changes; consumers should reject schemas
/// they do not know. The layout itself is documented in docs/report-schema.md.
pub const SCHEMA_VERSION: u32 = 1;

/// One measured fact: a group, an instance, a lemma — whatever the suite
/// iterates over. `detail` holds the suite-specific payload serialized as
/// JSON (object keys end up sorted, which keeps reports byte-stable).
#[derive(Clone, Serialize)]
pub struct ItemReport {
    pub name: String,
    /// exhaustive computation (true) vs randomized/sampled (false)
    pub exact: bool,
    pub pass: bool,
    /// a proven statement failed to hold — signals an implementation bug
    pub critical: bool,
    /// the item was not run (cap exceeded, hypothesis unavailable, …)
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub detail: serde_json::Value,
}

impl ItemReport {
    pub fn new(name: impl Into<String>, exact: bool, pass: bool, detail: serde_json::Value) -> Self {
        ItemReport {
            name: name.into(),
            exact,
            pass,
            critical: false,
            skipped: false,
            error: None,
            detail,
        }
    }

    pub fn critical_if(mut self, yes: bool) -> Self {
        self.critical = yes;
        self
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        ItemReport {
            name: name.into(),
            exact: false,
            pass: true,
            critical: false,
            skipped: true,
            error: Some(why.into()),
            detail: serde_json::Value::Null,
        }
    }

    pub fn failed(name: impl Into<String>, err: impl ToString) -> Self {
        ItemReport {
            name: name.into(),
            exact: false,
            pass: false,
            critical: false,
            skipped: false,
            error: Some(err.to_string()),
            detail: serde_json::Value::Null,
        }
    }
}

#[derive(Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub items: Vec<ItemReport>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub critical: usize,
}

impl SuiteReport {
    pub fn new(suite: &str, items: Vec<ItemReport>) -> Self {
        let passed = items.iter().filter(|i| i.pass && !i.skipped).count();
        let failed = items.iter().filter(|i| !i.pass).count();
        let skipped = items.iter().filter(|i| i.skipped).count();
        let critical = items.iter().filter(|i| i.critical).count();
        SuiteReport {
            suite: suite.to_string(),
            items,
            passed,
            failed,
            skipped,
            critical,
        }
    }
}

/// Whole-run result. All timing lives in the single `timing_ms` map so that
/// determinism comparisons can drop exactly one field.
#[derive(Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub critical_total: usize,
    pub timing_ms: BTreeMap<String, u128>,
}

impl RunReport {
    pub fn new(config: &RunConfig) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
            suites: Vec::new(),
            critical_total: 0,
            timing_ms: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, suite: SuiteReport, elapsed_ms: u128) {
        self.critical_total += suite.critical;
        self.timing_ms.insert(suite.suite.clone(), elapsed_ms);
        self.suites.push(suite);
    }

    pub fn to_json(&self) -> String {
        // struct fields serialize in declaration order and Value maps sort
        // their keys, so the bytes are reproducible
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn has_critical(&self) -> bool {
        self.critical_total > 0
    }
}

/// Serialize any suite payload into the sorted-key JSON value stored in an
/// item. Panics only on non-string map keys, which no payload type here has.
pub fn detail<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("detail serialization")
}
