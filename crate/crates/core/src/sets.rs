//! Subsets of the naturals as immutable, total membership oracles.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::ComputableDomain;
use crate::error::Result;
use crate::pairing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    ExplicitRule,
    SeededRandom,
    Complement,
    Pullback,
    Thickening,
}

type Rule = Arc<dyn Fn(u64) -> bool + Send + Sync>;

#[derive(Clone)]
enum Node {
    Evens,
    Odds,
    Primes,
    Empty,
    Full,
    Finite(BTreeSet<u64>),
    /// `S_k = { <k, i> : i in omega }`.
    Column(u64),
    Random(u64),
    Complement(OmegaSet),
    Thicken {
        k: u64,
        of: OmegaSet,
    },
    Pullback {
        domain: ComputableDomain,
        of: OmegaSet,
    },
    Custom {
        descriptor: String,
        rule: Rule,
    },
}

/// A decidable subset of the naturals.
///
/// Cloning is cheap; derived sets share their operands.
#[derive(Clone)]
pub struct OmegaSet {
    node: Arc<Node>,
}

impl fmt::Debug for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("OmegaSet").field(&self.descriptor()).finish()
    }
}

impl fmt::Display for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl OmegaSet {
    fn from_node(node: Node) -> Self {
        Self {
            node: Arc::new(node),
        }
    }

    pub fn evens() -> Self {
        Self::from_node(Node::Evens)
    }

    pub fn odds() -> Self {
        Self::from_node(Node::Odds)
    }

    pub fn primes() -> Self {
        Self::from_node(Node::Primes)
    }

    pub fn empty() -> Self {
        Self::from_node(Node::Empty)
    }

    pub fn full() -> Self {
        Self::from_node(Node::Full)
    }

    /// A finite set listed explicitly.
    pub fn explicit<I: IntoIterator<Item = u64>>(members: I) -> Self {
        Self::from_node(Node::Finite(members.into_iter().collect()))
    }

    /// Column `k` of the pairing plane: `{ <k, i> : i in omega }`.
    ///
    /// Distinct columns are disjoint, infinite and decidable.
    pub fn column(k: u64) -> Self {
        Self::from_node(Node::Column(k))
    }

    /// Pseudo-random proxy for a typical set: bit `x` is the low bit of a
    /// keyed 64-bit mix of `(seed, x)`, so answers do not depend on query order.
    pub fn seeded_random(seed: u64) -> Self {
        Self::from_node(Node::Random(seed))
    }

    pub fn complement(of: &OmegaSet) -> Self {
        Self::from_node(Node::Complement(of.clone()))
    }

    /// `{ x : floor(x / k) in of }`. Prefer [`crate::constructions::thicken`],
    /// which validates `k`.
    pub(crate) fn thickening(of: &OmegaSet, k: u64) -> Self {
        debug_assert!(k >= 1);
        Self::from_node(Node::Thicken { k, of: of.clone() })
    }

    /// `{ n : pi_1(sigma_d(n)) in of }`.
    pub fn pullback(domain: &ComputableDomain, of: &OmegaSet) -> Self {
        Self::from_node(Node::Pullback {
            domain: domain.clone(),
            of: of.clone(),
        })
    }

    /// A user-supplied decidable rule. The caller vouches for totality.
    pub fn from_rule<F>(descriptor: impl Into<String>, rule: F) -> Self
    where
        F: Fn(u64) -> bool + Send + Sync + 'static,
    {
        Self::from_node(Node::Custom {
            descriptor: descriptor.into(),
            rule: Arc::new(rule),
        })
    }

    pub fn kind(&self) -> SetKind {
        match &*self.node {
            Node::Random(_) => SetKind::SeededRandom,
            Node::Complement(_) => SetKind::Complement,
            Node::Thicken { .. } => SetKind::Thickening,
            Node::Pullback { .. } => SetKind::Pullback,
            _ => SetKind::ExplicitRule,
        }
    }

    /// Canonical spec string. Re-parses to an equal set for every builder
    /// except [`OmegaSet::from_rule`].
    pub fn descriptor(&self) -> String {
        match &*self.node {
            Node::Evens => "evens".into(),
            Node::Odds => "odds".into(),
            Node::Primes => "primes".into(),
            Node::Empty => "empty".into(),
            Node::Full => "full".into(),
            Node::Finite(members) => {
                let items: Vec<String> = members.iter().map(u64::to_string).collect();
                format!("explicit:[{}]", items.join(","))
            }
            Node::Column(k) => format!("column:k={k}"),
            Node::Random(seed) => format!("random:seed={seed}"),
            Node::Complement(of) => format!("complement:of={}", of.descriptor()),
            Node::Thicken { k, of } => format!("thicken:k={k},of={}", of.descriptor()),
            Node::Pullback { domain, of } => {
                format!(
                    "pullback:domain={},of={}",
                    domain.descriptor(),
                    of.descriptor()
                )
            }
            Node::Custom { descriptor, .. } => descriptor.clone(),
        }
    }

    /// Whether membership is backed by a computable rule all the way down.
    /// Seeded-random sets stand in for non-computable typical sets and are not.
    pub fn is_rule_backed(&self) -> bool {
        match &*self.node {
            Node::Random(_) => false,
            Node::Complement(of) | Node::Thicken { of, .. } | Node::Pullback { of, .. } => {
                of.is_rule_backed()
            }
            _ => true,
        }
    }

    pub fn member(&self, x: u64) -> Result<bool> {
        Ok(match &*self.node {
            Node::Evens => x.is_multiple_of(2),
            Node::Odds => x % 2 == 1,
            Node::Primes => is_prime(x),
            Node::Empty => false,
            Node::Full => true,
            Node::Finite(members) => members.contains(&x),
            Node::Column(k) => pairing::left(x) == *k,
            Node::Random(seed) => random_bit(*seed, x),
            Node::Complement(of) => !of.member(x)?,
            Node::Thicken { k, of } => of.member(x / k)?,
            Node::Pullback { domain, of } => of.member(pairing::left(domain.sigma(x)?))?,
            Node::Custom { rule, .. } => rule(x),
        })
    }

    /// Membership bits for `0..n`.
    pub fn prefix(&self, n: u64) -> Result<Vec<bool>> {
        (0..n).map(|x| self.member(x)).collect()
    }
}

/// Renders a prefix as a `0`/`1` string.
pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-mode keyed mix: random access, independent of query order.
pub(crate) fn mix(seed: u64, x: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(x.wrapping_add(0x632B_E59B_D9B4_E019)))
}

fn random_bit(seed: u64, x: u64) -> bool {
    mix(seed, x) & 1 == 1
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these bases are exact for all 64-bit inputs.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
