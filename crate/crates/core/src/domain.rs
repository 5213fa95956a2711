//! Decidable infinite domains of pairing codes and their canonical
//! rank/select bijections.
//!
//! The canonical bijection `sigma` enumerates a domain in increasing code
//! order. Because Cantor codes on a diagonal `d = x + i` are contiguous and
//! ordered by `i`, rank and select reduce to a cumulative count of members
//! per diagonal plus a walk along one diagonal. The cumulative table is
//! extended lazily in blocks of diagonals by a single writer; readers only
//! ever observe fully written prefixes.

use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Result};
use crate::pairing;
use crate::sets::OmegaSet;

/// Diagonals appended per table extension.
const BLOCK_DIAGONALS: usize = 256;

/// Hard cap on table length (8 bytes per diagonal).
const MAX_DIAGONALS: u64 = 1 << 25;

/// How many `i` satisfy `<x, i> in domain` for a fixed column `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

#[derive(Clone)]
pub enum DomainKind {
    /// `{ <x, y> : y <= x }`.
    Pyramid,
    /// `{ <x, i> : x in S or i = 0 }`.
    Calibrated(OmegaSet),
    /// `{ <x, 0> } u { <x, 1> : x in S }`.
    BoundedCalibrated(OmegaSet),
    /// Every code.
    Full,
}

struct Inner {
    kind: DomainKind,
    table: RwLock<RankTable>,
}

struct RankTable {
    /// `cumulative[d]` = number of members with code `< T(d)`.
    cumulative: Vec<u64>,
    /// `s_below[d] = |S ∩ [0, d)|`, kept in step with `cumulative` for
    /// calibrated domains, where diagonal `d` holds `1 + s_below[d]` members.
    s_below: Vec<u64>,
}

/// A decidable infinite set of pairing codes containing every `<x, 0>`.
#[derive(Clone)]
pub struct ComputableDomain {
    inner: Arc<Inner>,
}

impl fmt::Debug for ComputableDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ComputableDomain")
            .field(&self.descriptor())
            .finish()
    }
}

impl fmt::Display for ComputableDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl ComputableDomain {
    fn new(kind: DomainKind) -> Self {
        Self {
            inner: Arc::new(Inner {
                kind,
                table: RwLock::new(RankTable {
                    cumulative: vec![0],
                    s_below: vec![0],
                }),
            }),
        }
    }

    pub fn pyramid() -> Self {
        Self::new(DomainKind::Pyramid)
    }

    pub fn full() -> Self {
        Self::new(DomainKind::Full)
    }

    /// Calibrated domain over `s`. Rejects sets that are not rule-backed.
    pub fn calibrated(s: &OmegaSet) -> Result<Self> {
        require_rule_backed(s)?;
        Ok(Self::new(DomainKind::Calibrated(s.clone())))
    }

    /// Bounded calibrated domain over `s`. Rejects sets that are not rule-backed.
    pub fn bounded_calibrated(s: &OmegaSet) -> Result<Self> {
        require_rule_backed(s)?;
        Ok(Self::new(DomainKind::BoundedCalibrated(s.clone())))
    }

    pub fn kind(&self) -> &DomainKind {
        &self.inner.kind
    }

    pub fn descriptor(&self) -> String {
        match &self.inner.kind {
            DomainKind::Pyramid => "pyramid".into(),
            DomainKind::Full => "full".into(),
            DomainKind::Calibrated(s) => format!("calibrated({})", s.descriptor()),
            DomainKind::BoundedCalibrated(s) => format!("bounded({})", s.descriptor()),
        }
    }

    /// Membership of the pair `<x, i>` without forming its code.
    pub fn contains_pair(&self, x: u64, i: u64) -> Result<bool> {
        Ok(match &self.inner.kind {
            DomainKind::Pyramid => i <= x,
            DomainKind::Full => true,
            DomainKind::Calibrated(s) => i == 0 || s.member(x)?,
            DomainKind::BoundedCalibrated(s) => i == 0 || (i == 1 && s.member(x)?),
        })
    }

    pub fn contains(&self, code: u64) -> Result<bool> {
        let (x, i) = pairing::unpair(code);
        self.contains_pair(x, i)
    }

    /// Column multiplicity of `x`.
    pub fn profile(&self, x: u64) -> Result<Multiplicity> {
        Ok(match &self.inner.kind {
            DomainKind::Pyramid => Multiplicity::Finite(x + 1),
            DomainKind::Full => Multiplicity::Infinite,
            DomainKind::Calibrated(s) => {
                if s.member(x)? {
                    Multiplicity::Infinite
                } else {
                    Multiplicity::Finite(1)
                }
            }
            DomainKind::BoundedCalibrated(s) => {
                Multiplicity::Finite(if s.member(x)? { 2 } else { 1 })
            }
        })
    }

    /// Largest second coordinate worth testing on diagonal `d`.
    fn diagonal_limit(&self, d: u64) -> u64 {
        match &self.inner.kind {
            DomainKind::Pyramid => d / 2,
            DomainKind::BoundedCalibrated(_) => d.min(1),
            DomainKind::Calibrated(_) | DomainKind::Full => d,
        }
    }

    fn count_on_diagonal(&self, d: u64) -> Result<u64> {
        match &self.inner.kind {
            DomainKind::Full => Ok(d + 1),
            DomainKind::Pyramid => Ok(d / 2 + 1),
            _ => {
                let mut count = 0;
                for i in 0..=self.diagonal_limit(d) {
                    if self.contains_pair(d - i, i)? {
                        count += 1;
                    }
                }
                Ok(count)
            }
        }
    }

    /// Number of members on diagonal `d` with second coordinate `< below`.
    fn count_on_diagonal_below(&self, d: u64, below: u64) -> Result<u64> {
        let limit = self.diagonal_limit(d);
        let mut count = 0;
        for i in 0..below.min(limit + 1) {
            if self.contains_pair(d - i, i)? {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Ensures `cumulative` has an entry for diagonal `d`, then returns it.
    fn cumulative_at(&self, d: u64) -> Result<u64> {
        {
            let table = self.inner.table.read().expect("rank table poisoned");
            if let Some(&c) = table.cumulative.get(d as usize) {
                return Ok(c);
            }
        }
        if d >= MAX_DIAGONALS {
            return Err(capacity(format!(
                "rank table for {} would exceed {MAX_DIAGONALS} diagonals",
                self.descriptor()
            )));
        }
        let mut guard = self.inner.table.write().expect("rank table poisoned");
        let table = &mut *guard;
        while table.cumulative.len() as u64 <= d {
            let start = table.cumulative.len();
            let target = (start + BLOCK_DIAGONALS).min(MAX_DIAGONALS as usize);
            let mut block = Vec::with_capacity(target - start);
            let mut s_block = Vec::new();
            let mut acc = *table.cumulative.last().expect("table starts with 0");
            let mut s_acc = *table.s_below.last().expect("table starts with 0");
            for diag in start..target {
                let prev = diag as u64 - 1;
                acc += match &self.inner.kind {
                    DomainKind::Calibrated(s) => {
                        let count = 1 + s_acc;
                        s_acc += u64::from(s.member(prev)?);
                        s_block.push(s_acc);
                        count
                    }
                    _ => self.count_on_diagonal(prev)?,
                };
                block.push(acc);
            }
            table.cumulative.extend(block);
            table.s_below.extend(s_block);
        }
        Ok(table.cumulative[d as usize])
    }

    /// Select: the `(n+1)`-th smallest member code.
    pub fn sigma(&self, n: u64) -> Result<u64> {
        // Every diagonal holds <d, 0>, so cumulative[d] >= d and diagonal n+1
        // already bounds the answer; grow the table geometrically until it does.
        let mut hi = 64u64.min(n + 1);
        while self.cumulative_at(hi)? <= n {
            hi = hi.saturating_mul(2).min(n + 1);
        }
        let d = {
            let table = self.inner.table.read().expect("rank table poisoned");
            let prefix = &table.cumulative[..=hi as usize];
            prefix.partition_point(|&c| c <= n) as u64 - 1
        };
        let mut remaining = n - self.cumulative_at(d)?;
        let base = pairing::triangular(d)?;
        for i in 0..=self.diagonal_limit(d) {
            if self.contains_pair(d - i, i)? {
                if remaining == 0 {
                    return Ok(base + i);
                }
                remaining -= 1;
            }
        }
        unreachable!("cumulative table disagrees with diagonal {d}")
    }

    /// Rank: number of member codes strictly below `code`. Errors with
    /// [`Error::NotInDomain`] when `code` is not a member.
    pub fn sigma_inv(&self, code: u64) -> Result<u64> {
        if !self.contains(code)? {
            return Err(Error::NotInDomain(code));
        }
        let d = pairing::diagonal(code);
        let i = code - pairing::triangular(d)?;
        let before = self.cumulative_at(d)?;
        let on_diagonal = match &self.inner.kind {
            DomainKind::Calibrated(_) if i > 0 => {
                // <d, 0> plus the columns x in S with d - i < x < d.
                let table = self.inner.table.read().expect("rank table poisoned");
                1 + table.s_below[d as usize] - table.s_below[(d - i + 1) as usize]
            }
            _ => self.count_on_diagonal_below(d, i)?,
        };
        Ok(before + on_diagonal)
    }

    pub fn bijection(&self) -> CanonicalBijection<'_> {
        CanonicalBijection { domain: self }
    }
}

fn require_rule_backed(s: &OmegaSet) -> Result<()> {
    if s.is_rule_backed() {
        Ok(())
    } else {
        Err(Error::NotRuleBacked(s.descriptor()))
    }
}

/// The rank-order bijection `omega -> domain` and its inverse.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalBijection<'a> {
    domain: &'a ComputableDomain,
}

impl CanonicalBijection<'_> {
    pub fn forward(&self, n: u64) -> Result<u64> {
        self.domain.sigma(n)
    }

    pub fn inverse(&self, code: u64) -> Result<u64> {
        self.domain.sigma_inv(code)
    }
}
