//! Reduction witnesses and their window checks.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::OmegaSet;
use crate::verdict::{Verdict, Witness};

/// Reducibility notion claimed by a witness, ordered by refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class", content = "bound", rename_all = "kebab-case")]
pub enum ReductionClass {
    OneOne,
    /// Every fibre has at most `c >= 1` elements.
    BoundedFiniteOne(u64),
    FiniteOne,
    ManyOne,
}

impl ReductionClass {
    /// Global fibre bound, if the class has one.
    pub fn bound(self) -> Option<u64> {
        match self {
            Self::OneOne => Some(1),
            Self::BoundedFiniteOne(c) => Some(c),
            Self::FiniteOne | Self::ManyOne => None,
        }
    }

    /// `self` implies `other`: every reduction of class `self` is one of class `other`.
    pub fn refines(self, other: Self) -> bool {
        match (self, other) {
            (_, Self::ManyOne) => true,
            (Self::ManyOne, _) => false,
            (_, Self::FiniteOne) => true,
            (Self::FiniteOne, _) => false,
            (a, Self::OneOne) => a.bound() == Some(1),
            (a, Self::BoundedFiniteOne(c)) => a.bound().is_some_and(|b| b <= c),
        }
    }

    /// Class of `then ∘ self`. Bounds multiply; the product is sound but
    /// not necessarily tight.
    pub fn compose(self, then: Self) -> Self {
        match (self, then) {
            (Self::OneOne, Self::OneOne) => Self::OneOne,
            (Self::ManyOne, _) | (_, Self::ManyOne) => Self::ManyOne,
            (Self::FiniteOne, _) | (_, Self::FiniteOne) => Self::FiniteOne,
            (a, b) => match a.bound().zip(b.bound()) {
                Some((c1, c2)) => c1
                    .checked_mul(c2)
                    .map_or(Self::FiniteOne, Self::BoundedFiniteOne),
                None => Self::FiniteOne,
            },
        }
    }
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OneOne => f.write_str("one-one"),
            Self::BoundedFiniteOne(c) => write!(f, "bounded-finite-one({c})"),
            Self::FiniteOne => f.write_str("finite-one"),
            Self::ManyOne => f.write_str("many-one"),
        }
    }
}

impl FromStr for ReductionClass {
    type Err = Error;

    /// Inverse of `Display`; `bfin:c` is accepted as shorthand.
    fn from_str(text: &str) -> Result<Self> {
        let bounded = text
            .strip_prefix("bounded-finite-one(")
            .and_then(|rest| rest.strip_suffix(')'))
            .or_else(|| text.strip_prefix("bfin:"));
        match (text, bounded) {
            ("one-one", _) => Ok(Self::OneOne),
            ("finite-one" | "fin", _) => Ok(Self::FiniteOne),
            ("many-one", _) => Ok(Self::ManyOne),
            (_, Some(c)) => match c.parse::<u64>() {
                Ok(c) if c >= 1 => Ok(Self::BoundedFiniteOne(c)),
                _ => Err(Error::Usage(format!("bad fibre bound in `{text}`"))),
            },
            _ => Err(Error::Usage(format!("unknown reduction class `{text}`"))),
        }
    }
}

type MapFn = Arc<dyn Fn(u64) -> Result<u64> + Send + Sync>;

/// A total map bundled with the class it claims and the sets it connects.
///
/// Soundness is not a property of the value; it is established per window
/// by the `check_*` functions.
#[derive(Clone)]
pub struct Reduction {
    name: String,
    map: MapFn,
    class: ReductionClass,
    source: String,
    target: String,
}

impl fmt::Debug for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reduction")
            .field("name", &self.name)
            .field("class", &self.class)
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

impl Reduction {
    pub fn new<F>(
        name: impl Into<String>,
        class: ReductionClass,
        source: impl Into<String>,
        target: impl Into<String>,
        map: F,
    ) -> Self
    where
        F: Fn(u64) -> Result<u64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            map: Arc::new(map),
            class,
            source: source.into(),
            target: target.into(),
        }
    }

    pub fn identity(descriptor: impl Into<String>) -> Self {
        let descriptor = descriptor.into();
        Self::new(
            "identity",
            ReductionClass::OneOne,
            descriptor.clone(),
            descriptor,
            Ok,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> ReductionClass {
        self.class
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn apply(&self, x: u64) -> Result<u64> {
        (self.map)(x)
    }

    /// `then ∘ self`, from `self.source` to `then.target`.
    pub fn compose(&self, then: &Reduction) -> Result<Reduction> {
        if self.target != then.source {
            return Err(Error::DescriptorMismatch {
                left: self.target.clone(),
                right: then.source.clone(),
            });
        }
        let (first, second) = (self.map.clone(), then.map.clone());
        Ok(Reduction {
            name: format!("{} ∘ {}", then.name, self.name),
            map: Arc::new(move |x| second(first(x)?)),
            class: self.class.compose(then.class),
            source: self.source.clone(),
            target: then.target.clone(),
        })
    }
}

/// Whether `x in a <=> r(x) in b` holds at `x`.
pub fn preserves_membership_at(r: &Reduction, a: &OmegaSet, b: &OmegaSet, x: u64) -> Result<bool> {
    Ok(a.member(x)? == b.member(r.apply(x)?)?)
}

/// Refutes `x in a <=> r(x) in b` at the least violating `x < n`.
pub fn check_membership_preservation(
    r: &Reduction,
    a: &OmegaSet,
    b: &OmegaSet,
    n: u64,
) -> Result<Verdict> {
    for x in 0..n {
        let image = r.apply(x)?;
        let in_source = a.member(x)?;
        let in_target = b.member(image)?;
        if in_source != in_target {
            return Ok(Verdict::refuted(
                n,
                Witness::Membership {
                    x,
                    image,
                    in_source,
                    in_target,
                },
            ));
        }
    }
    Ok(Verdict::evidence(n))
}

/// Refutes injectivity on `0..n` with the pair `(x, x')` whose second
/// element is least.
pub fn check_injectivity(r: &Reduction, n: u64) -> Result<Verdict> {
    let mut seen: HashMap<u64, u64> = HashMap::new();
    for x in 0..n {
        let value = r.apply(x)?;
        if let Some(&first) = seen.get(&value) {
            return Ok(Verdict::refuted(
                n,
                Witness::Collision {
                    first,
                    second: x,
                    value,
                },
            ));
        }
        seen.insert(value, x);
    }
    Ok(Verdict::evidence(n))
}

/// Forward sweep: `counts[y] = |{ x < n : r(x) = y }|` for `y < m`.
pub fn preimage_counts(r: &Reduction, n: u64, m: u64) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; m as usize];
    for x in 0..n {
        let y = r.apply(x)?;
        if y < m {
            counts[y as usize] += 1;
        }
    }
    Ok(counts)
}

/// Refutes `|r^{-1}(y)| <= c` at the least `y < m` whose counted fibre over
/// `x < n` exceeds `c`. Counts are lower bounds on the true fibre sizes.
pub fn check_preimage_bound(r: &Reduction, c: u64, n: u64, m: u64) -> Result<Verdict> {
    if c == 0 {
        return Err(Error::Precondition("preimage bound c must be >= 1".into()));
    }
    let counts = preimage_counts(r, n, m)?;
    let note = format!("fibres counted over inputs below {n}; counts are lower bounds");
    match counts.iter().position(|&count| count > c) {
        Some(y) => {
            let y = y as u64;
            let mut preimages = Vec::with_capacity(c as usize + 1);
            for x in 0..n {
                if r.apply(x)? == y {
                    preimages.push(x);
                    if preimages.len() as u64 > c {
                        break;
                    }
                }
            }
            Ok(Verdict::refuted(
                n,
                Witness::Preimage {
                    value: y,
                    bound: c,
                    preimages,
                },
            )
            .with_note(note))
        }
        None => Ok(Verdict::evidence(n).with_note(note)),
    }
}
