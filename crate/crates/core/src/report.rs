//! Machine-readable results of a batch command.
//!
//! JSON output goes through [`serde_json::Value`], whose maps keep keys
//! sorted, so identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::rigidity::{AuditOutcome, AuditResult};
use crate::verdict::{Verdict, VerdictStatus};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    Evidence,
    Refuted,
    Deviation,
    Collision,
    BudgetExhausted,
    Error,
}

impl EntryStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Evidence => "evidence",
            Self::Refuted => "refuted",
            Self::Deviation => "deviation",
            Self::Collision => "collision",
            Self::BudgetExhausted => "budget-exhausted",
            Self::Error => "error",
        }
    }
}

impl From<VerdictStatus> for EntryStatus {
    fn from(status: VerdictStatus) -> Self {
        match status {
            VerdictStatus::Refuted => Self::Refuted,
            VerdictStatus::EvidenceUpTo => Self::Evidence,
        }
    }
}

impl From<&AuditResult> for EntryStatus {
    fn from(result: &AuditResult) -> Self {
        match result {
            AuditResult::Deviation { .. } => Self::Deviation,
            AuditResult::Collision { .. } => Self::Collision,
            AuditResult::BudgetExhausted(_) => Self::BudgetExhausted,
        }
    }
}

/// One named check inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub status: EntryStatus,
    pub window: u64,
    /// Whether the command asserts this check should succeed. Only claimed
    /// refutations raise the exit code.
    pub claimed: bool,
    pub witness: Value,
}

impl Entry {
    pub fn new(name: impl Into<String>, status: EntryStatus, window: u64) -> Self {
        Self {
            name: name.into(),
            status,
            window,
            claimed: false,
            witness: Value::Null,
        }
    }

    pub fn claimed(mut self) -> Self {
        self.claimed = true;
        self
    }

    pub fn with_witness(mut self, witness: impl Serialize) -> Self {
        self.witness = to_value(witness);
        self
    }

    /// A claimed window check.
    pub fn from_verdict(name: impl Into<String>, verdict: &Verdict) -> Self {
        Self::new(name, verdict.status.into(), verdict.window)
            .claimed()
            .with_witness(verdict)
    }

    pub fn from_outcome(name: impl Into<String>, window: u64, outcome: &AuditOutcome) -> Self {
        Self::new(name, (&outcome.result).into(), window).with_witness(outcome)
    }

    fn is_claimed_refutation(&self) -> bool {
        self.claimed && self.status == EntryStatus::Refuted
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize to JSON")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub verdicts: Vec<Entry>,
    /// Command-level tallies.
    pub summary: BTreeMap<String, Value>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            params: BTreeMap::new(),
            verdicts: Vec::new(),
            summary: BTreeMap::new(),
            exit_code: EXIT_OK,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.into(), to_value(value));
        self
    }

    pub fn push(&mut self, entry: Entry) {
        self.verdicts.push(entry);
    }

    pub fn tally(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), to_value(value));
    }

    /// Sets `exit_code` from the entries.
    pub fn finish(mut self) -> Self {
        self.exit_code = if self.verdicts.iter().any(Entry::is_claimed_refutation) {
            EXIT_REFUTED
        } else {
            EXIT_OK
        };
        self
    }

    /// A report carrying only the error that stopped the command.
    pub fn failed(mut self, error: &Error) -> Self {
        self.verdicts = vec![Entry::new("error", EntryStatus::Error, 0)
            .with_witness(serde_json::json!({ "message": error.to_string() }))];
        self.summary.clear();
        self.exit_code = EXIT_ERROR;
        self
    }

    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(&to_value(self)).expect("report serializes to JSON");
        text.push('\n');
        text
    }

    /// One row per entry; nested witnesses are inlined as compact JSON.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,status,window,claimed,witness\n");
        for e in &self.verdicts {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&e.name),
                e.status.as_str(),
                e.window,
                e.claimed,
                csv_field(&e.witness.to_string())
            );
        }
        out
    }
}

pub(crate) fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Witness;

    #[test]
    fn exit_codes_follow_claimed_refutations() {
        let mut r = Report::new("demo");
        r.push(Entry::new("audit", EntryStatus::Refuted, 5));
        r.push(Entry::new("audit", EntryStatus::Collision, 5));
        assert_eq!(r.clone().finish().exit_code, EXIT_OK);
        r.push(Entry::from_verdict(
            "check",
            &Verdict::refuted(3, Witness::Table { table: vec![0] }),
        ));
        assert_eq!(r.clone().finish().exit_code, EXIT_REFUTED);
        let failed = r.failed(&Error::Usage("bad".into()));
        assert_eq!(failed.exit_code, EXIT_ERROR);
        assert_eq!(failed.verdicts[0].status, EntryStatus::Error);
    }

    #[test]
    fn json_keys_are_sorted_and_stable() {
        let r = Report::new("demo")
            .param("zeta", 1)
            .param("alpha", "x")
            .finish();
        let json = r.to_json();
        assert!(json.find("\"alpha\"").unwrap() < json.find("\"zeta\"").unwrap());
        assert!(json.find("\"command\"").unwrap() < json.find("\"verdicts\"").unwrap());
        assert!(json.contains("\"schema\": 1"));
        assert_eq!(json, r.clone().to_json());
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_quotes_fields() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
