//! Spec-string mini-language for sets, domains and candidate generators.
//!
//! ```text
//! spec   := name (':' arg (',' arg)*)?
//! arg    := key '=' value
//! value  := '(' spec ')' | '[' list ']' | spec-valued remainder | atom
//! domain := 'pyramid' | 'full' | 'calibrated(' spec ')' | 'bounded(' spec ')'
//! ```
//!
//! Keys that hold a nested spec (`of`, `domain`) take the rest of the
//! string unless the value is parenthesised, so
//! `thicken:k=3,of=random:seed=7` and
//! `pullback:domain=bounded(evens),of=thicken:k=2,of=evens` both parse.

use crate::constructions;
use crate::domain::ComputableDomain;
use crate::error::{Error, Result};
use crate::sets::OmegaSet;

const NESTED_KEYS: [&str; 2] = ["of", "domain"];

/// A raw argument value with its byte offset in the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecValue {
    pub text: String,
    pub offset: usize,
}

/// `name:key=value,...` split into parts, offsets kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecNode {
    pub name: String,
    pub offset: usize,
    pub args: Vec<(String, SpecValue)>,
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

/// Index just past the bracket that closes the one at `open`.
fn matching_close(text: &str, open: usize, base: usize) -> Result<usize> {
    let mut depth = 0usize;
    for (i, ch) in text[open..].char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(open + i + 1);
                }
            }
            _ => {}
        }
    }
    Err(parse_error(base + open, "unbalanced bracket"))
}

/// End of a `name(...)` value starting at `start`, if the value has that form.
fn call_form_end(text: &str, start: usize, base: usize) -> Result<Option<usize>> {
    let ident = text[start..]
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-'))
        .map_or(text.len(), |i| start + i);
    if ident > start && text[ident..].starts_with('(') {
        Ok(Some(matching_close(text, ident, base)?))
    } else {
        Ok(None)
    }
}

impl SpecNode {
    /// Splits `text` into a node. `base` is the offset of `text` in the
    /// original input.
    pub fn parse(text: &str, base: usize) -> Result<Self> {
        let (name, rest) = match text.find(':') {
            Some(i) => (&text[..i], Some(i + 1)),
            None => (text, None),
        };
        if name.is_empty() {
            return Err(parse_error(base, "empty builder name"));
        }
        if let Some(bad) = name
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_' || *c == '-'))
        {
            return Err(parse_error(
                base + bad.0,
                format!("unexpected character `{}` in name", bad.1),
            ));
        }
        let mut node = SpecNode {
            name: name.to_string(),
            offset: base,
            args: Vec::new(),
        };
        let Some(mut pos) = rest else {
            return Ok(node);
        };
        loop {
            let eq = text[pos..]
                .find('=')
                .map(|i| pos + i)
                .ok_or_else(|| parse_error(base + pos, "expected key=value"))?;
            let key = &text[pos..eq];
            if key.is_empty() || key.contains(',') {
                return Err(parse_error(base + pos, "expected key=value"));
            }
            let start = eq + 1;
            let (value, value_offset, end) = if text[start..].starts_with('(') {
                let close = matching_close(text, start, base)?;
                (&text[start + 1..close - 1], start + 1, close)
            } else if let Some(close) = call_form_end(text, start, base)? {
                (&text[start..close], start, close)
            } else if NESTED_KEYS.contains(&key) {
                (&text[start..], start, text.len())
            } else {
                let mut depth = 0i32;
                let mut end = text.len();
                for (i, ch) in text[start..].char_indices() {
                    match ch {
                        '(' | '[' => depth += 1,
                        ')' | ']' => depth -= 1,
                        ',' if depth == 0 => {
                            end = start + i;
                            break;
                        }
                        _ => {}
                    }
                }
                (&text[start..end], start, end)
            };
            if value.is_empty() {
                return Err(parse_error(
                    base + start,
                    format!("empty value for `{key}`"),
                ));
            }
            node.args.push((
                key.to_string(),
                SpecValue {
                    text: value.to_string(),
                    offset: base + value_offset,
                },
            ));
            if end == text.len() {
                return Ok(node);
            }
            if &text[end..end + 1] != "," {
                return Err(parse_error(base + end, "expected `,` between arguments"));
            }
            pos = end + 1;
        }
    }

    pub fn get(&self, key: &str) -> Option<&SpecValue> {
        self.args.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn require(&self, key: &str) -> Result<&SpecValue> {
        self.get(key)
            .ok_or_else(|| parse_error(self.offset, format!("`{}` requires `{key}=`", self.name)))
    }

    pub fn natural(&self, key: &str) -> Result<u64> {
        self.require(key)?.natural()
    }

    pub fn natural_or(&self, key: &str, default: u64) -> Result<u64> {
        self.get(key).map_or(Ok(default), SpecValue::natural)
    }

    /// Rejects keys outside `allowed`.
    pub fn expect_keys(&self, allowed: &[&str]) -> Result<()> {
        for (key, value) in &self.args {
            if !allowed.contains(&key.as_str()) {
                return Err(parse_error(
                    value.offset,
                    format!("`{}` does not take `{key}=`", self.name),
                ));
            }
        }
        Ok(())
    }
}

impl SpecValue {
    pub fn natural(&self) -> Result<u64> {
        self.text.parse().map_err(|_| {
            parse_error(
                self.offset,
                format!("expected a natural, got `{}`", self.text),
            )
        })
    }

    pub fn integer(&self) -> Result<i64> {
        self.text.parse().map_err(|_| {
            parse_error(
                self.offset,
                format!("expected an integer, got `{}`", self.text),
            )
        })
    }

    /// `[a,b,c]` as naturals.
    pub fn natural_list(&self) -> Result<Vec<u64>> {
        let inner = self
            .text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| parse_error(self.offset, "expected `[...]`"))?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut offset = self.offset + 1;
        for item in inner.split(',') {
            let trimmed = item.trim();
            out.push(trimmed.parse().map_err(|_| {
                parse_error(offset, format!("expected a natural, got `{trimmed}`"))
            })?);
            offset += item.len() + 1;
        }
        Ok(out)
    }
}

/// Parses a set spec such as `thicken:k=3,of=random:seed=7`.
pub fn parse_set_spec(text: &str) -> Result<OmegaSet> {
    parse_set_at(text.trim(), 0)
}

fn parse_set_at(text: &str, base: usize) -> Result<OmegaSet> {
    // `explicit:[1,2,3]` has no key.
    if let Some(list) = text.strip_prefix("explicit:") {
        let value = SpecValue {
            text: list.to_string(),
            offset: base + "explicit:".len(),
        };
        return Ok(OmegaSet::explicit(value.natural_list()?));
    }
    let node = SpecNode::parse(text, base)?;
    let nullary = |set: OmegaSet| -> Result<OmegaSet> {
        node.expect_keys(&[])?;
        Ok(set)
    };
    match node.name.as_str() {
        "evens" => nullary(OmegaSet::evens()),
        "odds" => nullary(OmegaSet::odds()),
        "primes" => nullary(OmegaSet::primes()),
        "empty" => nullary(OmegaSet::empty()),
        "full" => nullary(OmegaSet::full()),
        "random" => {
            node.expect_keys(&["seed"])?;
            Ok(OmegaSet::seeded_random(node.natural("seed")?))
        }
        "explicit" => Err(parse_error(base, "`explicit` requires a `[...]` list")),
        "complement" => {
            node.expect_keys(&["of"])?;
            let of = node.require("of")?;
            Ok(OmegaSet::complement(&parse_set_at(&of.text, of.offset)?))
        }
        "thicken" => {
            node.expect_keys(&["k", "of"])?;
            let k = node.natural("k")?;
            if k == 0 {
                return Err(parse_error(node.require("k")?.offset, "k must be >= 1"));
            }
            let of = node.require("of")?;
            constructions::thicken(&parse_set_at(&of.text, of.offset)?, k)
        }
        "pullback" => {
            node.expect_keys(&["domain", "of"])?;
            let of = node.require("of")?;
            let domain = node.require("domain")?;
            let d = parse_domain_at(&domain.text, domain.offset)?;
            Ok(OmegaSet::pullback(&d, &parse_set_at(&of.text, of.offset)?))
        }
        "column" => {
            node.expect_keys(&["k"])?;
            Ok(OmegaSet::column(node.natural("k")?))
        }
        other => Err(Error::UnknownBuilder(other.to_string())),
    }
}

/// Parses `pyramid`, `full`, `calibrated(<set>)` or `bounded(<set>)`.
pub fn parse_domain_spec(text: &str) -> Result<ComputableDomain> {
    parse_domain_at(text.trim(), 0)
}

fn parse_domain_at(text: &str, base: usize) -> Result<ComputableDomain> {
    match text {
        "pyramid" => return Ok(ComputableDomain::pyramid()),
        "full" => return Ok(ComputableDomain::full()),
        _ => {}
    }
    let open = text
        .find('(')
        .ok_or_else(|| Error::UnknownBuilder(text.to_string()))?;
    let close = matching_close(text, open, base)?;
    if close != text.len() {
        return Err(parse_error(
            base + close,
            "trailing input after domain spec",
        ));
    }
    let inner = &text[open + 1..close - 1];
    let set = parse_set_at(inner, base + open + 1)?;
    match &text[..open] {
        "calibrated" => ComputableDomain::calibrated(&set),
        "bounded" => ComputableDomain::bounded_calibrated(&set),
        other => Err(Error::UnknownBuilder(other.to_string())),
    }
}
