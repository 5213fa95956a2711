//! Brute-force ground truth on finite universes `{0, .., n-1}`.
//!
//! Tables are listed in lexicographic order (entry 0 most significant), so
//! "first found" always means lexicographically least.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reductions::ReductionClass;
use crate::verdict::{Verdict, Witness};

/// Largest universe for all-pairs sweeps: `4^4 = 256` tables, `65536` pairs.
pub const MAX_UNIVERSE: usize = 4;

/// Largest `k` for the pigeonhole fact check (`k^(k+1)` maps).
pub const MAX_PIGEONHOLE_K: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteUniverse {
    n: usize,
}

impl FiniteUniverse {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(Error::Usage(format!(
                "universe size must be in 1..={MAX_UNIVERSE}, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `n^n`.
    pub fn table_count(&self) -> u64 {
        (self.n as u64).pow(self.n as u32)
    }

    /// Every function table, lexicographically.
    pub fn tables(&self) -> impl Iterator<Item = Vec<u8>> {
        all_maps(self.n, self.n)
    }
}

/// All maps `{0..domain} -> {0..codomain}` as tables, lexicographically.
pub fn all_maps(domain: usize, codomain: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (codomain as u64).pow(domain as u32);
    (0..total).map(move |mut index| {
        let mut table = vec![0u8; domain];
        for slot in table.iter_mut().rev() {
            *slot = (index % codomain as u64) as u8;
            index /= codomain as u64;
        }
        table
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub injective: bool,
    pub max_preimage: u64,
}

pub fn classify_table(table: &[u8]) -> Classification {
    let mut fibres = [0u64; 256];
    for &v in table {
        fibres[v as usize] += 1;
    }
    let max_preimage = fibres.iter().copied().max().unwrap_or(0);
    Classification {
        injective: max_preimage <= 1,
        max_preimage,
    }
}

/// `(second ∘ first)[x] = second[first[x]]`.
pub fn compose_tables(first: &[u8], second: &[u8]) -> Vec<u8> {
    first.iter().map(|&v| second[v as usize]).collect()
}

/// Over all pairs of tables on `{0..n}`: the composite's largest fibre is at
/// most the product of the operands', and injective ∘ injective is injective.
pub fn composition_rule_check(n: usize) -> Result<Verdict> {
    let universe = FiniteUniverse::new(n)?;
    let tables: Vec<(Vec<u8>, Classification)> = universe
        .tables()
        .map(|t| {
            let c = classify_table(&t);
            (t, c)
        })
        .collect();
    let mut checked = 0u64;
    for (f, cf) in &tables {
        for (g, cg) in &tables {
            checked += 1;
            let composite = compose_tables(f, g);
            let cc = classify_table(&composite);
            let reason = if cc.max_preimage > cf.max_preimage * cg.max_preimage {
                Some("composite fibre exceeds product bound")
            } else if cf.injective && cg.injective && !cc.injective {
                Some("composite of injections is not injective")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Ok(Verdict::refuted(
                    checked,
                    Witness::TablePair {
                        first: f.clone(),
                        second: g.clone(),
                        composite,
                        reason: reason.into(),
                    },
                ));
            }
        }
    }
    Ok(Verdict::evidence(checked))
}

/// Every map from `k + 1` points into `k` slots collides. `n` is the
/// universe the points live in and must hold at least `k + 1` of them.
pub fn pigeonhole_fact_check(k: u64, n: u64) -> Result<Verdict> {
    if k == 0 || k > MAX_PIGEONHOLE_K {
        return Err(Error::Usage(format!(
            "k must be in 1..={MAX_PIGEONHOLE_K}, got {k}"
        )));
    }
    if k + 1 > n {
        return Err(Error::Usage(format!(
            "need k + 1 <= n, got k = {k}, n = {n}"
        )));
    }
    let mut checked = 0u64;
    for table in all_maps(k as usize + 1, k as usize) {
        checked += 1;
        if classify_table(&table).injective {
            return Ok(Verdict::refuted(checked, Witness::Table { table }));
        }
    }
    Ok(Verdict::evidence(checked))
}

/// Parses `"1100"` (character `i` is element `i`) into a bitmask.
pub fn mask_from_str(text: &str) -> Result<u8> {
    if text.is_empty() || text.len() > MAX_UNIVERSE {
        return Err(Error::Usage(format!(
            "mask `{text}` must have 1..={MAX_UNIVERSE} bits"
        )));
    }
    text.chars()
        .enumerate()
        .try_fold(0u8, |mask, (i, c)| match c {
            '1' => Ok(mask | (1 << i)),
            '0' => Ok(mask),
            other => Err(Error::Parse {
                position: i,
                message: format!("mask digit must be 0 or 1, got `{other}`"),
            }),
        })
}

fn in_mask(mask: u8, x: u8) -> bool {
    mask >> x & 1 == 1
}

fn fits_class(c: Classification, class: ReductionClass) -> bool {
    match class.bound() {
        Some(bound) => c.max_preimage <= bound,
        // Every fibre is finite on a finite universe.
        None => true,
    }
}

/// The lexicographically least table of the given class with
/// `x in a <=> t[x] in b`, if any.
pub fn reduces_exhaustive(
    a_mask: u8,
    b_mask: u8,
    class: ReductionClass,
    n: usize,
) -> Result<Option<Vec<u8>>> {
    let universe = FiniteUniverse::new(n)?;
    if (a_mask | b_mask) >> n != 0 {
        return Err(Error::Usage(format!("masks must fit in {n} bits")));
    }
    Ok(universe.tables().find(|t| {
        fits_class(classify_table(t), class)
            && t.iter()
                .enumerate()
                .all(|(x, &v)| in_mask(a_mask, x as u8) == in_mask(b_mask, v))
    }))
}

/// Refinement monotonicity over every pair of subsets of `{0..n}`: success at
/// a finer class implies success at every coarser class in the chain
/// one-one, bounded(1), finite-one, many-one; witnesses re-verify.
pub fn monotonicity_check(n: usize) -> Result<Verdict> {
    FiniteUniverse::new(n)?;
    let chain = [
        ReductionClass::OneOne,
        ReductionClass::BoundedFiniteOne(1),
        ReductionClass::FiniteOne,
        ReductionClass::ManyOne,
    ];
    let mut checked = 0;
    for a in 0..(1u8 << n) {
        for b in 0..(1u8 << n) {
            checked += 1;
            let mut previous = false;
            for class in chain {
                let witness = reduces_exhaustive(a, b, class, n)?;
                if let Some(t) = &witness {
                    let ok = t
                        .iter()
                        .enumerate()
                        .all(|(x, &v)| in_mask(a, x as u8) == in_mask(b, v))
                        && fits_class(classify_table(t), class);
                    if !ok {
                        return Ok(
                            Verdict::refuted(checked, Witness::Table { table: t.clone() })
                                .with_note(format!("witness fails to re-verify for {class}")),
                        );
                    }
                }
                if previous && witness.is_none() {
                    return Ok(
                        Verdict::refuted(checked, Witness::Table { table: vec![a, b] })
                            .with_note(format!("success lost when coarsening to {class}")),
                    );
                }
                previous = witness.is_some();
            }
        }
    }
    Ok(Verdict::evidence(checked))
}
