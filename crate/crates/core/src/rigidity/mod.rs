//! Executable cores of the non-reducibility arguments.
//!
//! Each audit evaluates a candidate map at one point and returns one branch
//! of a dichotomy that holds for *every* total map: either an extracted
//! autoreduction moves the point (a deviation) or the candidate collides.
//! A genuine reduction would have to avoid both branches at all but finitely
//! many points, which is what makes these outcomes meaningful.

mod candidates;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use candidates::{
    generate_candidates, load_table, table_from_json, CandidateMap, CandidateMode,
};

use crate::error::{Error, Result};
use crate::pairing;
use crate::sets::OmegaSet;

/// Which argument an audit outcome belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "dichotomy", rename_all = "kebab-case")]
pub enum Dichotomy {
    /// Block pigeonhole behind `A_(k+1) not <=_1 A_(k)`.
    ChainPigeonhole { k: u64, y: u64 },
    /// Search for a first coordinate in `S` along an infinite column.
    CalibratedSearch { x: u64 },
    /// Two copies of `x` forced onto the single copy `<x, 0>`.
    BoundedCollision { x: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub evaluated: u64,
    /// Distinct first coordinates seen; a lower bound on the projected image.
    pub distinct_projections: u64,
    /// Largest number of evaluated inputs sharing one image code.
    pub max_multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum AuditResult {
    /// The extracted autoreduction sends `point` to `value != point`.
    /// `via` names the branch (`j`, `i`, or copy index) that produced it.
    Deviation {
        point: u64,
        value: u64,
        via: u64,
    },
    /// `first != second` share the image `value`.
    Collision {
        first: u64,
        second: u64,
        value: u64,
    },
    BudgetExhausted(SearchStats),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditOutcome {
    pub context: Dichotomy,
    pub result: AuditResult,
}

impl AuditOutcome {
    pub fn is_deviation(&self) -> bool {
        matches!(self.result, AuditResult::Deviation { .. })
    }

    pub fn is_collision(&self) -> bool {
        matches!(self.result, AuditResult::Collision { .. })
    }

    /// Replays the witness against the candidate that produced it.
    /// Budget exhaustion carries no witness and rechecks trivially.
    pub fn recheck(&self, candidate: &CandidateMap) -> Result<bool> {
        match (&self.context, &self.result) {
            (_, AuditResult::BudgetExhausted(_)) => Ok(true),
            (
                _,
                AuditResult::Collision {
                    first,
                    second,
                    value,
                },
            ) => Ok(first != second
                && candidate.apply(*first)? == *value
                && candidate.apply(*second)? == *value),
            (Dichotomy::ChainPigeonhole { k, y }, AuditResult::Deviation { point, value, via }) => {
                let fj = extracted_value(candidate, *k, *via, *y)?;
                Ok(point == y && fj == *value && fj != *y)
            }
            (Dichotomy::CalibratedSearch { x }, AuditResult::Deviation { point, value, via })
            | (Dichotomy::BoundedCollision { x }, AuditResult::Deviation { point, value, via }) => {
                let image = candidate.apply(pairing::pair(*x, *via)?)?;
                Ok(point == x && pairing::left(image) == *value && value != x)
            }
        }
    }
}

fn require_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::Precondition("k must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// `(k+1) y + j`, the `j`-th input of block `y`.
fn block_input(k: u64, y: u64, j: u64) -> Result<u64> {
    (k + 1)
        .checked_mul(y)
        .and_then(|v| v.checked_add(j))
        .ok_or_else(|| Error::Capacity(format!("block input (k={k}, y={y}, j={j})")))
}

/// `f_j(y) = floor(h((k+1) y + j) / k)`.
fn extracted_value(h: &CandidateMap, k: u64, j: u64, y: u64) -> Result<u64> {
    Ok(h.apply(block_input(k, y, j)?)? / k)
}

/// The `k+1` candidate autoreductions `f_0..f_k` extracted from a candidate
/// reduction `h` of `A_(k+1)` to `A_(k)`.
pub fn chain_autoreductions(h: &CandidateMap, k: u64) -> Result<Vec<CandidateMap>> {
    require_k(k)?;
    Ok((0..=k)
        .map(|j| {
            let h = h.clone();
            CandidateMap::from_fn(format!("f_{j}[{}; k={k}]", h.name()), move |y| {
                extracted_value(&h, k, j, y)
            })
        })
        .collect())
}

/// Block pigeonhole at `y`: the least `j` with `f_j(y) != y` is a deviation;
/// otherwise all `k+1` values of `h` on block `y` lie in `{ky, .., ky+k-1}`
/// and two of them must collide.
pub fn pigeonhole_audit(h: &CandidateMap, k: u64, y: u64) -> Result<AuditOutcome> {
    require_k(k)?;
    let context = Dichotomy::ChainPigeonhole { k, y };
    let mut values = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        let value = h.apply(block_input(k, y, j)?)?;
        if value / k != y {
            return Ok(AuditOutcome {
                context,
                result: AuditResult::Deviation {
                    point: y,
                    value: value / k,
                    via: j,
                },
            });
        }
        values.push(value);
    }
    // Lexicographically least colliding pair (j1, j2).
    for j1 in 0..values.len() {
        for j2 in j1 + 1..values.len() {
            if values[j1] == values[j2] {
                return Ok(AuditOutcome {
                    context,
                    result: AuditResult::Collision {
                        first: block_input(k, y, j1 as u64)?,
                        second: block_input(k, y, j2 as u64)?,
                        value: values[j1],
                    },
                });
            }
        }
    }
    unreachable!(
        "{} values inside a block of size {k} without a collision",
        k + 1
    )
}

/// One step of the pyramid autoreduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum PyramidStep {
    /// `x < c`: `g(x) = x` by definition.
    Fixed { x: u64 },
    /// `g(x) = f(<x, y>) != x` for the least such `y <= x`.
    Moved { x: u64, via: u64, value: u64 },
    /// All `x + 1 > c` column codes map to `x`; the bound `c` is refuted.
    BoundRefuted { x: u64, column: Vec<u64> },
}

/// `g` extracted from a map `f` on pyramid codes claimed to be bounded by `c`.
#[derive(Debug, Clone)]
pub struct PyramidAutoreduction {
    f: CandidateMap,
    bound: u64,
}

impl PyramidAutoreduction {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn apply(&self, x: u64) -> Result<PyramidStep> {
        if x < self.bound {
            return Ok(PyramidStep::Fixed { x });
        }
        let mut column = Vec::with_capacity(x as usize + 1);
        for y in 0..=x {
            let code = pairing::pair(x, y)?;
            let value = self.f.apply(code)?;
            if value != x {
                return Ok(PyramidStep::Moved { x, via: y, value });
            }
            column.push(code);
        }
        Ok(PyramidStep::BoundRefuted { x, column })
    }
}

pub fn pyramid_autoreduction(f: &CandidateMap, c: u64) -> Result<PyramidAutoreduction> {
    if c == 0 {
        return Err(Error::Precondition("pyramid bound c must be >= 1".into()));
    }
    Ok(PyramidAutoreduction {
        f: f.clone(),
        bound: c,
    })
}

fn require_in_difference(s: &OmegaSet, t: &OmegaSet, x: u64) -> Result<()> {
    if !t.member(x)? || s.member(x)? {
        return Err(Error::Precondition(format!(
            "x = {x} must lie in {} minus {}",
            t.descriptor(),
            s.descriptor()
        )));
    }
    Ok(())
}

/// Walks column `x` of the calibrated domain over `T` through `f` until a
/// first coordinate lands in `S`, giving up after `budget` evaluations.
pub fn calibrated_autoreduction(
    f: &CandidateMap,
    s: &OmegaSet,
    t: &OmegaSet,
    x: u64,
    budget: u64,
) -> Result<AuditOutcome> {
    require_in_difference(s, t, x)?;
    let context = Dichotomy::CalibratedSearch { x };
    let mut projections = BTreeSet::new();
    let mut images: BTreeMap<u64, u64> = BTreeMap::new();
    for i in 0..budget {
        let image = f.apply(pairing::pair(x, i)?)?;
        let y = pairing::left(image);
        if s.member(y)? {
            return Ok(AuditOutcome {
                context,
                result: AuditResult::Deviation {
                    point: x,
                    value: y,
                    via: i,
                },
            });
        }
        projections.insert(y);
        *images.entry(image).or_default() += 1;
    }
    Ok(AuditOutcome {
        context,
        result: AuditResult::BudgetExhausted(SearchStats {
            evaluated: budget,
            distinct_projections: projections.len() as u64,
            max_multiplicity: images.values().copied().max().unwrap_or(0),
        }),
    })
}

/// `g0(x) = pi_1(f(<x,0>))` and `g1(x) = pi_1(f(<x,1>))` on `T`, `x` elsewhere.
pub fn bounded_calibrated_autoreductions(
    f: &CandidateMap,
    t: &OmegaSet,
) -> (CandidateMap, CandidateMap) {
    let (f0, f1, t1) = (f.clone(), f.clone(), t.clone());
    let g0 = CandidateMap::from_fn(format!("g0[{}]", f.name()), move |x| {
        Ok(pairing::left(f0.apply(pairing::pair(x, 0)?)?))
    });
    let g1 = CandidateMap::from_fn(format!("g1[{}]", f.name()), move |x| {
        if t1.member(x)? {
            Ok(pairing::left(f1.apply(pairing::pair(x, 1)?)?))
        } else {
            Ok(x)
        }
    });
    (g0, g1)
}

fn in_bounded_domain(s: &OmegaSet, code: u64) -> Result<bool> {
    let (x, i) = pairing::unpair(code);
    Ok(i == 0 || (i == 1 && s.member(x)?))
}

/// For `x in T \ S` and `f` mapping bounded-calibrated codes over `T` into
/// those over `S`: a deviation of `g0` or `g1` at `x`, or else the forced
/// collision `f(<x,0>) = f(<x,1>) = <x,0>`.
pub fn bounded_collision_audit(
    f: &CandidateMap,
    s: &OmegaSet,
    t: &OmegaSet,
    x: u64,
) -> Result<AuditOutcome> {
    require_in_difference(s, t, x)?;
    let context = Dichotomy::BoundedCollision { x };
    let copies = [pairing::pair(x, 0)?, pairing::pair(x, 1)?];
    let mut images = [0u64; 2];
    for (slot, &code) in copies.iter().enumerate() {
        let image = f.apply(code)?;
        if !in_bounded_domain(s, image)? {
            return Err(Error::RangeViolation {
                input: code,
                image,
                domain: format!("bounded({})", s.descriptor()),
            });
        }
        images[slot] = image;
    }
    for (via, &image) in images.iter().enumerate() {
        let value = pairing::left(image);
        if value != x {
            return Ok(AuditOutcome {
                context,
                result: AuditResult::Deviation {
                    point: x,
                    value,
                    via: via as u64,
                },
            });
        }
    }
    // Both images have first coordinate x and x is not in S, so both are <x, 0>.
    debug_assert!(images[0] == copies[0] && images[1] == copies[0]);
    Ok(AuditOutcome {
        context,
        result: AuditResult::Collision {
            first: copies[0],
            second: copies[1],
            value: images[0],
        },
    })
}

/// Image statistics of the first `width` codes of column `x` under `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnImageStats {
    pub x: u64,
    pub width: u64,
    pub distinct: u64,
    pub max_multiplicity: u64,
    /// `member(A, x)`.
    pub side: bool,
    /// Images whose first coordinate lies on the same side of `A` as `x`.
    pub projected_same_side: u64,
    /// Images that themselves lie on the same side of `A` as `x`.
    pub raw_same_side: u64,
}

impl ColumnImageStats {
    pub fn projected_agreement(&self) -> f64 {
        if self.width == 0 {
            1.0
        } else {
            self.projected_same_side as f64 / self.width as f64
        }
    }
}

pub fn column_image_audit(
    h: &CandidateMap,
    a: &OmegaSet,
    x: u64,
    width: u64,
) -> Result<ColumnImageStats> {
    let side = a.member(x)?;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let (mut projected_same_side, mut raw_same_side) = (0, 0);
    for i in 0..width {
        let image = h.apply(pairing::pair(x, i)?)?;
        *counts.entry(image).or_default() += 1;
        if a.member(pairing::left(image))? == side {
            projected_same_side += 1;
        }
        if a.member(image)? == side {
            raw_same_side += 1;
        }
    }
    Ok(ColumnImageStats {
        x,
        width,
        distinct: counts.len() as u64,
        max_multiplicity: counts.values().copied().max().unwrap_or(0),
        side,
        projected_same_side,
        raw_same_side,
    })
}

/// Where a candidate autoreduction moves points below a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub window: u64,
    pub deviations: Vec<u64>,
    /// Least `n0` with no deviation in `[n0, window)`; `None` when the last
    /// point of the window itself deviates.
    pub identity_tail_start: Option<u64>,
}

pub fn eventual_identity_report(g: &CandidateMap, window: u64) -> Result<DeviationReport> {
    let mut deviations = Vec::new();
    for x in 0..window {
        if g.apply(x)? != x {
            deviations.push(x);
        }
    }
    let identity_tail_start = match deviations.last() {
        None => Some(0),
        Some(&last) if last + 1 < window => Some(last + 1),
        Some(_) => None,
    };
    Ok(DeviationReport {
        window,
        deviations,
        identity_tail_start,
    })
}

/// Fraction of `x < n` with `member(A, x) == member(A, g(x))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub agree: u64,
    pub total: u64,
}

impl Rate {
    /// Empty windows count as full agreement.
    pub fn as_f64(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.agree as f64 / self.total as f64
        }
    }
}

pub fn preservation_rate(g: &CandidateMap, a: &OmegaSet, n: u64) -> Result<Rate> {
    let mut agree = 0;
    for x in 0..n {
        if a.member(x)? == a.member(g.apply(x)?)? {
            agree += 1;
        }
    }
    Ok(Rate { agree, total: n })
}

#[cfg(test)]
mod tests;
