//! Outcomes of window checks.
//!
//! A window check either finds a concrete violation or reports that none
//! exists below the window. It never certifies the infinitary claim.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Refuted,
    EvidenceUpTo,
}

/// Concrete evidence attached to a refutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `x in A <=> f(x) in B` fails at `x`.
    Membership {
        x: u64,
        image: u64,
        in_source: bool,
        in_target: bool,
    },
    /// Two distinct inputs share an image.
    Collision { first: u64, second: u64, value: u64 },
    /// `value` has more preimages than the bound allows; `preimages` lists
    /// the first `bound + 1` of them.
    Preimage {
        value: u64,
        bound: u64,
        preimages: Vec<u64>,
    },
    /// A pair of finite function tables violating a composition rule.
    TablePair {
        first: Vec<u8>,
        second: Vec<u8>,
        composite: Vec<u8>,
        reason: String,
    },
    /// An injective map where none should exist.
    Table { table: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    /// Inputs (or finite cases) examined.
    pub window: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn evidence(window: u64) -> Self {
        Self {
            status: VerdictStatus::EvidenceUpTo,
            window,
            counterexample: None,
            note: None,
        }
    }

    pub fn refuted(window: u64, witness: Witness) -> Self {
        Self {
            status: VerdictStatus::Refuted,
            window,
            counterexample: Some(witness),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_refuted(&self) -> bool {
        self.status == VerdictStatus::Refuted
    }

    pub fn is_evidence(&self) -> bool {
        self.status == VerdictStatus::EvidenceUpTo
    }
}
