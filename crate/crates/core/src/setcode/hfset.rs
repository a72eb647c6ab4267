use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SetCodeError;

/// A hereditarily finite set in canonical brace notation.
///
/// Members are listed without duplicates, sorted by (string length,
/// lexicographic). `{}` is the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(try_from = "String", into = "String")]
pub struct HFSet(String);

fn canonical_cmp(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl HFSet {
    pub fn empty() -> Self {
        HFSet("{}".to_string())
    }

    /// The set with the given members, deduplicated and canonically ordered.
    pub fn from_members(members: impl IntoIterator<Item = HFSet>) -> Self {
        let mut ms: Vec<String> = members.into_iter().map(|m| m.0).collect();
        ms.sort_by(|a, b| canonical_cmp(a, b));
        ms.dedup();
        HFSet(format!("{{{}}}", ms.join(",")))
    }

    /// Von Neumann natural number `n`.
    pub fn von_neumann(n: usize) -> Self {
        let mut built: Vec<HFSet> = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            let next = HFSet::from_members(built.iter().cloned());
            built.push(next);
        }
        built.pop().expect("at least one element built")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn members(&self) -> Vec<HFSet> {
        split_members(&self.0)
            .into_iter()
            .map(|s| HFSet(s.to_string()))
            .collect()
    }

    pub fn contains(&self, other: &HFSet) -> bool {
        split_members(&self.0).contains(&other.0.as_str())
    }

    pub fn cardinality(&self) -> usize {
        split_members(&self.0).len()
    }

    /// `Some(n)` when this is the von Neumann ordinal `n`.
    ///
    /// In canonical order the members of ordinal `n` are `0, 1, ..., n-1`
    /// in that order, since each ordinal's string is longer than every
    /// smaller one's.
    pub fn as_ordinal(&self) -> Option<usize> {
        let members = self.members();
        for (k, m) in members.iter().enumerate() {
            if m.as_ordinal() != Some(k) {
                return None;
            }
        }
        Some(members.len())
    }
}

/// Top-level member substrings of a brace string known to be well formed.
fn split_members(s: &str) -> Vec<&str> {
    let inner = &s[1..s.len() - 1];
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '{' => {
                if depth == 0 {
                    start = i;
                }
                depth += 1;
            }
            '}' => {
                depth -= 1;
                if depth == 0 {
                    out.push(&inner[start..=i]);
                }
            }
            _ => {}
        }
    }
    out
}

fn parse_at(bytes: &[u8], pos: &mut usize) -> Result<HFSet, SetCodeError> {
    if bytes.get(*pos) != Some(&b'{') {
        return Err(SetCodeError::MalformedSet(*pos));
    }
    *pos += 1;
    let mut members = Vec::new();
    if bytes.get(*pos) == Some(&b'}') {
        *pos += 1;
        return Ok(HFSet::empty());
    }
    loop {
        members.push(parse_at(bytes, pos)?);
        match bytes.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HFSet::from_members(members));
            }
            _ => return Err(SetCodeError::MalformedSet(*pos)),
        }
    }
}

impl FromStr for HFSet {
    type Err = SetCodeError;

    /// Parses any brace string (whitespace ignored) and canonicalizes it.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let set = parse_at(&compact, &mut pos)?;
        if pos != compact.len() {
            return Err(SetCodeError::MalformedSet(pos));
        }
        Ok(set)
    }
}

impl TryFrom<String> for HFSet {
    type Error = SetCodeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<HFSet> for String {
    fn from(s: HFSet) -> String {
        s.0
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn von_neumann_three() {
        assert_eq!(HFSet::von_neumann(3).as_str(), "{{},{{}},{{},{{}}}}");
        assert_eq!(HFSet::von_neumann(0).as_str(), "{}");
    }

    #[test]
    fn parse_canonicalizes() {
        let s: HFSet = "{ {{}, {{}}}, {{}}, {{}} }".parse().unwrap();
        assert_eq!(s.as_str(), "{{{}},{{},{{}}}}");
        assert_eq!(s.cardinality(), 2);
        assert!(s.contains(&"{{}}".parse().unwrap()));
        assert!(!s.contains(&HFSet::empty()));
    }

    #[test]
    fn rejects_malformed() {
        assert!("{".parse::<HFSet>().is_err());
        assert!("{}}".parse::<HFSet>().is_err());
        assert!("{{},}".parse::<HFSet>().is_err());
        assert!("x".parse::<HFSet>().is_err());
    }

    #[test]
    fn ordinal_recognition() {
        for n in 0..6 {
            assert_eq!(HFSet::von_neumann(n).as_ordinal(), Some(n));
        }
        let s: HFSet = "{{{}}}".parse().unwrap();
        assert_eq!(s.as_ordinal(), None);
    }
}
