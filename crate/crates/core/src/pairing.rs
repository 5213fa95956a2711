//! Cantor pairing on 64-bit naturals.
//!
//! ```text
//! <x, y> = (x + y)(x + y + 1) / 2 + y
//! ```
//!
//! Codes on diagonal `d = x + y` occupy the contiguous range
//! `[T(d), T(d) + d]` where `T(d) = d(d+1)/2`, ordered by increasing `y`.
//! Domain enumeration in [`crate::domain`] relies on that layout.

use serde::{Deserialize, Serialize};

use crate::error::{capacity, Result};

/// A pairing code together with its two projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pairing {
    pub code: u64,
    pub left: u64,
    pub right: u64,
}

impl Pairing {
    pub fn new(left: u64, right: u64) -> Result<Self> {
        Ok(Self {
            code: pair(left, right)?,
            left,
            right,
        })
    }

    pub fn from_code(code: u64) -> Self {
        let (left, right) = unpair(code);
        Self { code, left, right }
    }
}

/// `T(d) = d(d+1)/2`, the first code on diagonal `d`.
pub fn triangular(d: u64) -> Result<u64> {
    let t = (d as u128) * (d as u128 + 1) / 2;
    u64::try_from(t).map_err(|_| capacity(format!("triangular number T({d})")))
}

/// Cantor pairing `<x, y>`.
pub fn pair(x: u64, y: u64) -> Result<u64> {
    let d = x
        .checked_add(y)
        .ok_or_else(|| capacity(format!("pair({x}, {y}): diagonal overflow")))?;
    triangular(d)?
        .checked_add(y)
        .ok_or_else(|| capacity(format!("pair({x}, {y})")))
}

/// Diagonal index `d` with `T(d) <= code < T(d+1)`.
pub fn diagonal(code: u64) -> u64 {
    // Float estimate, then exact correction in u128.
    let c = code as u128;
    let mut d = ((((8.0 * code as f64) + 1.0).sqrt() - 1.0) / 2.0) as u128;
    while d * (d + 1) / 2 > c {
        d -= 1;
    }
    while (d + 1) * (d + 2) / 2 <= c {
        d += 1;
    }
    d as u64
}

/// Inverse of [`pair`]; total on every 64-bit code.
pub fn unpair(code: u64) -> (u64, u64) {
    let d = diagonal(code);
    // T(d) <= code, so this cannot overflow.
    let y = code - ((d as u128 * (d as u128 + 1) / 2) as u64);
    (d - y, y)
}

/// First projection.
pub fn left(code: u64) -> u64 {
    unpair(code).0
}

/// Second projection.
pub fn right(code: u64) -> u64 {
    unpair(code).1
}
