//! Reducibility witnesses, calibrated domains and rigidity audits over
//! decidable subsets of the naturals.
//!
//! Sets are total membership oracles ([`OmegaSet`]). Constructions such as
//! thickenings and pullbacks along the canonical bijection of a
//! [`ComputableDomain`] come with explicit [`Reduction`] witnesses, and every
//! claim about a witness is checked on a finite window, yielding either a
//! concrete refutation or bounded evidence ([`Verdict`]).
//!
//! The [`rigidity`] module turns non-reducibility arguments into per-point
//! dichotomies (pigeonhole, collision, bound refutation) that can be swept
//! over candidate maps, and [`oracle`] brute-forces the finite analogues.

pub mod cli;
pub mod constructions;
pub mod domain;
pub mod error;
pub mod oracle;
pub mod pairing;
pub mod reductions;
pub mod report;
pub mod rigidity;
pub mod sets;
pub mod spec;
pub mod verdict;

pub use domain::{CanonicalBijection, ComputableDomain, DomainKind, Multiplicity};
pub use error::{Error, Result};
pub use pairing::{pair, unpair, Pairing};
pub use reductions::{Reduction, ReductionClass};
pub use report::{Entry, EntryStatus, Report};
pub use sets::{OmegaSet, SetKind};
pub use spec::{parse_domain_spec, parse_set_spec};
pub use verdict::{Verdict, VerdictStatus, Witness};
