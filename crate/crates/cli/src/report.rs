use std::collections::BTreeMap;
use std::io::Write;

use cayley_core::FieldSpec;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecRecord {
    pub p: u32,
    pub degree: u32,
    pub modulus: Vec<u32>,
    pub primitive: u8,
}

impl From<&FieldSpec> for FieldSpecRecord {
    fn from(s: &FieldSpec) -> FieldSpecRecord {
        FieldSpecRecord { p: s.p, degree: s.degree, modulus: s.modulus.clone(), primitive: s.primitive.0 }
    }
}

/// One measured quantity against its expected value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub item: String,
    pub value: Value,
    pub expected: Value,
    pub pass: bool,
}

impl Check {
    pub fn eq(item: impl Into<String>, value: impl Into<Value>, expected: impl Into<Value>) -> Check {
        let (value, expected) = (value.into(), expected.into());
        let pass = value == expected;
        Check { item: item.into(), value, expected, pass }
    }

    /// A check whose expectation is not an equality, such as a bound.
    pub fn rule(item: impl Into<String>, value: impl Into<Value>, expected: impl Into<Value>, pass: bool) -> Check {
        Check { item: item.into(), value: value.into(), expected: expected.into(), pass }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Witnesses and detail for failures and controls.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
}

impl SuiteResult {
    pub fn new(suite: impl Into<String>) -> SuiteResult {
        SuiteResult { suite: suite.into(), pass: true, checks: Vec::new(), witnesses: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn witness(&mut self, w: Value) {
        self.witnesses.push(w);
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub q: usize,
    pub field: FieldSpecRecord,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrupt_seed: Option<u64>,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
    /// Wall-clock milliseconds per suite; the only part that varies between
    /// runs.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: &str, q: usize, field: &FieldSpec, seed: u64) -> Report {
        Report {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            q,
            field: field.into(),
            seed,
            corrupt_seed: None,
            suites: Vec::new(),
            pass: true,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, suite: SuiteResult, millis: u64) {
        self.pass &= suite.pass;
        self.timings_ms.insert(suite.suite.clone(), millis);
        self.suites.push(suite);
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.suite == name)
    }

    /// The report with timings removed.
    pub fn payload(&self) -> Report {
        Report { timings_ms: BTreeMap::new(), ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// One row per check: `suite,item,value,expected,pass`.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["suite", "item", "value", "expected", "pass"])?;
        for s in &self.suites {
            for c in &s.checks {
                wr.write_record([s.suite.as_str(), &c.item, &csv_cell(&c.value), &csv_cell(&c.expected), if c.pass { "true" } else { "false" }])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("csv is utf-8")
    }
}

/// Strings are written bare, everything else as compact JSON.
pub fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
