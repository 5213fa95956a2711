//! Candidate maps: finite stand-ins for "every total computable function".

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::ComputableDomain;
use crate::error::{capacity, Error, Result};
use crate::pairing;
use crate::sets::mix;
use crate::spec::SpecNode;

/// Which generator family produced a candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CandidateMode {
    /// `x -> max(a x + b, 0)`.
    Affine {
        a: i64,
        b: i64,
    },
    /// Explicit finite table, identity elsewhere.
    Table {
        entries: usize,
    },
    /// Injective on `[0, range)` into `[0, 2 range)`; `x -> x + range` beyond.
    SeededInjection {
        seed: u64,
        range: u64,
    },
    /// Sends `(k+1) y + j` to `k y + min(j, k-1)`: keeps every extracted
    /// `f_j` equal to the identity, so it can only lose by colliding.
    AdversarialIdentitySeeker {
        k: u64,
    },
    /// `z -> pi_1(z)`.
    Projection,
    /// `<x, i> -> <x, 0>`.
    Collapse,
    /// `<x, i> -> <x, i xor m(x)>` with `m(x) < 64` seeded; a bijection
    /// that preserves first coordinates.
    ColumnShuffle {
        seed: u64,
    },
    Constant {
        value: u64,
    },
    /// Library-supplied closure.
    Custom {
        name: String,
    },
}

type EvalFn = Arc<dyn Fn(u64) -> Result<u64> + Send + Sync>;

#[derive(Clone)]
enum Eval {
    Affine { a: i64, b: i64 },
    Table(Arc<BTreeMap<u64, u64>>),
    Injection { images: Arc<Vec<u64>>, range: u64 },
    Seeker { k: u64 },
    Projection,
    Collapse,
    Shuffle { seed: u64 },
    Constant(u64),
    Custom(EvalFn),
}

/// A total map on the naturals drawn from one of the generator families.
#[derive(Clone)]
pub struct CandidateMap {
    mode: CandidateMode,
    eval: Eval,
}

impl fmt::Debug for CandidateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CandidateMap").field(&self.name()).finish()
    }
}

impl CandidateMap {
    pub fn identity() -> Self {
        Self::affine(1, 0)
    }

    pub fn affine(a: i64, b: i64) -> Self {
        Self {
            mode: CandidateMode::Affine { a, b },
            eval: Eval::Affine { a, b },
        }
    }

    pub fn table<I: IntoIterator<Item = (u64, u64)>>(entries: I) -> Self {
        let table: BTreeMap<u64, u64> = entries.into_iter().collect();
        Self {
            mode: CandidateMode::Table {
                entries: table.len(),
            },
            eval: Eval::Table(Arc::new(table)),
        }
    }

    /// Shuffles `[0, 2 range)` with a seeded ChaCha stream and keeps the
    /// first `range` values as images of `0..range`.
    pub fn seeded_injection(seed: u64, range: u64) -> Result<Self> {
        let doubled = range
            .checked_mul(2)
            .ok_or_else(|| capacity(format!("injection range {range}")))?;
        let mut pool: Vec<u64> = (0..doubled).collect();
        pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        pool.truncate(range as usize);
        Ok(Self {
            mode: CandidateMode::SeededInjection { seed, range },
            eval: Eval::Injection {
                images: Arc::new(pool),
                range,
            },
        })
    }

    pub fn adversarial_identity_seeker(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("adversary requires k >= 1".into()));
        }
        Ok(Self {
            mode: CandidateMode::AdversarialIdentitySeeker { k },
            eval: Eval::Seeker { k },
        })
    }

    pub fn projection() -> Self {
        Self {
            mode: CandidateMode::Projection,
            eval: Eval::Projection,
        }
    }

    pub fn collapse() -> Self {
        Self {
            mode: CandidateMode::Collapse,
            eval: Eval::Collapse,
        }
    }

    pub fn column_shuffle(seed: u64) -> Self {
        Self {
            mode: CandidateMode::ColumnShuffle { seed },
            eval: Eval::Shuffle { seed },
        }
    }

    pub fn constant(value: u64) -> Self {
        Self {
            mode: CandidateMode::Constant { value },
            eval: Eval::Constant(value),
        }
    }

    pub fn from_fn<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(u64) -> Result<u64> + Send + Sync + 'static,
    {
        Self {
            mode: CandidateMode::Custom { name: name.into() },
            eval: Eval::Custom(Arc::new(f)),
        }
    }

    /// The map a candidate reduction `h` between two pullbacks induces on
    /// their domains: `z -> sigma_to(h(sigma_from^{-1}(z)))`.
    pub fn induced(h: &CandidateMap, from: &ComputableDomain, to: &ComputableDomain) -> Self {
        let (h2, from2, to2) = (h.clone(), from.clone(), to.clone());
        Self::from_fn(
            format!("{}[{} -> {}]", h.name(), from.descriptor(), to.descriptor()),
            move |z| to2.sigma(h2.apply(from2.sigma_inv(z)?)?),
        )
    }

    /// `z -> h(sigma_from^{-1}(z))`: a candidate from a pullback to the base set,
    /// viewed on domain codes.
    pub fn induced_from(h: &CandidateMap, from: &ComputableDomain) -> Self {
        let (h2, from2) = (h.clone(), from.clone());
        Self::from_fn(
            format!("{}[{} -> omega]", h.name(), from.descriptor()),
            move |z| h2.apply(from2.sigma_inv(z)?),
        )
    }

    pub fn mode(&self) -> &CandidateMode {
        &self.mode
    }

    pub fn name(&self) -> String {
        match &self.mode {
            CandidateMode::Affine { a, b } => format!("affine(a={a},b={b})"),
            CandidateMode::Table { entries } => format!("table({entries})"),
            CandidateMode::SeededInjection { seed, range } => {
                format!("inj(seed={seed},range={range})")
            }
            CandidateMode::AdversarialIdentitySeeker { k } => format!("adversary(k={k})"),
            CandidateMode::Projection => "projection".into(),
            CandidateMode::Collapse => "collapse".into(),
            CandidateMode::ColumnShuffle { seed } => format!("shuffle(seed={seed})"),
            CandidateMode::Constant { value } => format!("const({value})"),
            CandidateMode::Custom { name } => name.clone(),
        }
    }

    pub fn apply(&self, x: u64) -> Result<u64> {
        match &self.eval {
            Eval::Affine { a, b } => {
                let v = (*a as i128) * (x as i128) + (*b as i128);
                u64::try_from(v.max(0)).map_err(|_| capacity(format!("{} at {x}", self.name())))
            }
            Eval::Table(table) => Ok(table.get(&x).copied().unwrap_or(x)),
            Eval::Injection { images, range } => {
                if x < *range {
                    Ok(images[x as usize])
                } else {
                    x.checked_add(*range)
                        .ok_or_else(|| capacity(format!("{} at {x}", self.name())))
                }
            }
            Eval::Seeker { k } => {
                let (y, j) = (x / (k + 1), x % (k + 1));
                Ok(k * y + j.min(k - 1))
            }
            Eval::Projection => Ok(pairing::left(x)),
            Eval::Collapse => pairing::pair(pairing::left(x), 0),
            Eval::Shuffle { seed } => {
                let (col, i) = pairing::unpair(x);
                pairing::pair(col, i ^ (mix(*seed, col) & 63))
            }
            Eval::Constant(v) => Ok(*v),
            Eval::Custom(f) => f(x),
        }
    }
}

/// Reads a JSON list of `[input, output]` pairs; the map is the identity
/// outside the listed inputs.
pub fn table_from_json(text: &str) -> Result<CandidateMap> {
    let pairs: Vec<(u64, u64)> = serde_json::from_str(text).map_err(|e| Error::Parse {
        position: e.column().saturating_sub(1),
        message: format!("candidate table: {e}"),
    })?;
    Ok(CandidateMap::table(pairs))
}

pub fn load_table(path: &Path) -> Result<CandidateMap> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    table_from_json(&text)
}

/// Builds a deterministic candidate list from a generator spec.
///
/// Families, joined with `+`:
/// `affine:amin=1,amax=3,bmin=0,bmax=2`, `inj:seed=1,range=100,count=1`,
/// `adversary:k=2` (or `kmax=5`), `table:path=<file.json>`, `identity`,
/// `projection`, `collapse`, `shuffle:seed=<n>`, `const:value=<n>`.
/// `default_range` is used for `inj` when `range=` is omitted.
pub fn generate_candidates(spec: &str, default_range: u64) -> Result<Vec<CandidateMap>> {
    let mut out = Vec::new();
    let mut base = 0;
    for part in spec.split('+') {
        let trimmed = part.trim();
        let offset = base + (part.len() - part.trim_start().len());
        base += part.len() + 1;
        let node = SpecNode::parse(trimmed, offset)?;
        match node.name.as_str() {
            "affine" => {
                node.expect_keys(&["amin", "amax", "bmin", "bmax"])?;
                let int =
                    |key: &str, default: i64| node.get(key).map_or(Ok(default), |v| v.integer());
                let (amin, amax) = (int("amin", 1)?, int("amax", 3)?);
                let (bmin, bmax) = (int("bmin", 0)?, int("bmax", 2)?);
                for a in amin..=amax {
                    for b in bmin..=bmax {
                        out.push(CandidateMap::affine(a, b));
                    }
                }
            }
            "inj" => {
                node.expect_keys(&["seed", "range", "count"])?;
                let seed = node.natural_or("seed", 0)?;
                let range = node.natural_or("range", default_range)?;
                let count = node.natural_or("count", 1)?;
                for s in seed..seed.saturating_add(count) {
                    out.push(CandidateMap::seeded_injection(s, range)?);
                }
            }
            "adversary" => {
                node.expect_keys(&["k", "kmax"])?;
                if let Some(kmax) = node.get("kmax") {
                    for k in 1..=kmax.natural()? {
                        out.push(CandidateMap::adversarial_identity_seeker(k)?);
                    }
                } else {
                    out.push(CandidateMap::adversarial_identity_seeker(
                        node.natural("k")?,
                    )?);
                }
            }
            "table" => {
                node.expect_keys(&["path"])?;
                out.push(load_table(Path::new(&node.require("path")?.text))?);
            }
            "identity" => {
                node.expect_keys(&[])?;
                out.push(CandidateMap::identity());
            }
            "projection" => {
                node.expect_keys(&[])?;
                out.push(CandidateMap::projection());
            }
            "collapse" => {
                node.expect_keys(&[])?;
                out.push(CandidateMap::collapse());
            }
            "shuffle" => {
                node.expect_keys(&["seed"])?;
                out.push(CandidateMap::column_shuffle(node.natural_or("seed", 0)?));
            }
            "const" => {
                node.expect_keys(&["value"])?;
                out.push(CandidateMap::constant(node.natural("value")?));
            }
            other => return Err(Error::UnknownBuilder(other.to_string())),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn affine_grid_size() {
        let grid = generate_candidates("affine:amax=3,bmax=2", 0).unwrap();
        assert_eq!(grid.len(), 9);
        assert_eq!(grid[0].name(), "affine(a=1,b=0)");
        assert_eq!(CandidateMap::affine(-2, 3).apply(5).unwrap(), 0);
        assert_eq!(CandidateMap::affine(-2, 30).apply(5).unwrap(), 20);
        assert!(CandidateMap::affine(3, 0).apply(u64::MAX).is_err());
    }

    #[test]
    fn seeded_injection_is_injective() {
        let h = CandidateMap::seeded_injection(1, 100).unwrap();
        let images: HashSet<u64> = (0..300).map(|x| h.apply(x).unwrap()).collect();
        assert_eq!(images.len(), 300);
        assert!((0..100).all(|x| h.apply(x).unwrap() < 200));
        let again = CandidateMap::seeded_injection(1, 100).unwrap();
        assert!((0..100).all(|x| h.apply(x).unwrap() == again.apply(x).unwrap()));
        let other = CandidateMap::seeded_injection(2, 100).unwrap();
        assert!((0..100).any(|x| h.apply(x).unwrap() != other.apply(x).unwrap()));
    }

    #[test]
    fn seeker_stays_in_block() {
        let h = CandidateMap::adversarial_identity_seeker(2).unwrap();
        for y in 0..50u64 {
            let vals: Vec<u64> = (0..3).map(|j| h.apply(3 * y + j).unwrap()).collect();
            assert_eq!(vals, vec![2 * y, 2 * y + 1, 2 * y + 1]);
        }
        assert!(CandidateMap::adversarial_identity_seeker(0).is_err());
    }

    #[test]
    fn code_level_families() {
        let z = pairing::pair(5, 9).unwrap();
        assert_eq!(CandidateMap::projection().apply(z).unwrap(), 5);
        assert_eq!(
            CandidateMap::collapse().apply(z).unwrap(),
            pairing::pair(5, 0).unwrap()
        );
        let shuffle = CandidateMap::column_shuffle(3);
        let column: HashSet<u64> = (0..128)
            .map(|i| shuffle.apply(pairing::pair(5, i).unwrap()).unwrap())
            .collect();
        assert_eq!(column.len(), 128);
        assert!(column.iter().all(|&c| pairing::left(c) == 5));
    }

    #[test]
    fn tables_and_specs() {
        let t = table_from_json("[[0, 5], [3, 1]]").unwrap();
        assert_eq!(
            (
                t.apply(0).unwrap(),
                t.apply(3).unwrap(),
                t.apply(4).unwrap()
            ),
            (5, 1, 4)
        );
        assert!(table_from_json("[[0]]").is_err());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.json");
        std::fs::write(&path, "[[1,2]]").unwrap();
        let spec = format!(
            "table:path={}+identity+adversary:kmax=3+inj:seed=4,count=5,range=10",
            path.display()
        );
        let all = generate_candidates(&spec, 0).unwrap();
        assert_eq!(all.len(), 1 + 1 + 3 + 5);
        assert_eq!(all[0].apply(1).unwrap(), 2);

        assert!(matches!(
            generate_candidates("nope", 1),
            Err(Error::UnknownBuilder(_))
        ));
        assert!(matches!(
            generate_candidates("affine:amax=x", 1),
            Err(Error::Parse { .. })
        ));
    }
}
