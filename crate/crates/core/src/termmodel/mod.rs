//! Supported functions from integer-indexed points into a finite target,
//! compared on the filter base `A_{s,m,G}`.
//!
//! A point `x : Z → K` is only ever inspected on a finite window. A
//! function with support `s_1 < ... < s_n` reads `x(s_1), ..., x(s_n)` and
//! looks the tuple up in a table over `K^n`.

mod measure;
mod support;
mod witness;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qmodel::BaseStructure;
use crate::ramsey::{LevelSequence, RamseyError};

pub use measure::nonempty_triple;
pub use measure::{equiv, los_check, relation_holds, Decision, LosReport, TermFormula, Truth};
pub use support::{min_block_support, BlockSupport, BlockSupportReport};
pub use witness::{code_subset, coding_frame, witness_h};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("window [{lo}, {hi}] does not cover coordinate {coordinate}")]
    WindowTooSmall { lo: i64, hi: i64, coordinate: i64 },
    #[error("support {0:?} is not strictly increasing")]
    SupportNotSorted(Vec<i64>),
    #[error("no table entry for {0:?}")]
    MissingEntry(String),
    #[error("bad table key {0:?}")]
    BadKey(String),
    #[error("{0:?} is not an element of the target")]
    UnknownElement(String),
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("relation {name} takes {expected} arguments, got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("value {value} is outside 0..{k}")]
    OutOfScale { value: usize, k: usize },
    #[error("the target has no j")]
    NoJ,
    #[error("j is undefined at {0:?}")]
    JUndefined(String),
    #[error("no element codes the cut at {0}")]
    MissingCode(usize),
    #[error("the standard part has fewer than {0} nodes")]
    ShortStandardPart(usize),
    #[error("every candidate block is undecided at this scale")]
    Undecided,
    #[error(transparent)]
    Ramsey(#[from] RamseyError),
}

/// A finite structure with named relations and an optional unary map `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Target {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub j: Option<BTreeMap<String, String>>,
}

impl Target {
    /// Elements with equality only.
    pub fn plain(elements: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Target {
            elements: elements.into_iter().map(Into::into).collect(),
            relations: BTreeMap::new(),
            j: None,
        }
    }

    /// Nodes of the base, membership as `"in"`, and its `j`.
    pub fn from_base(b: &BaseStructure) -> Self {
        let mut relations = BTreeMap::new();
        relations.insert(
            "in".to_string(),
            b.edges
                .iter()
                .map(|(x, y)| vec![x.clone(), y.clone()])
                .collect(),
        );
        Target {
            elements: b.nodes.clone(),
            relations,
            j: Some(b.j.clone()),
        }
    }

    pub(crate) fn index(&self) -> Result<Indexed, TermError> {
        let index: HashMap<String, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), k))
            .collect();
        let lookup = |v: &String| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| TermError::UnknownElement(v.clone()))
        };
        let mut relations = HashMap::new();
        for (name, tuples) in &self.relations {
            let arity = tuples.first().map_or(0, Vec::len);
            let mut set = HashSet::new();
            for t in tuples {
                if t.len() != arity {
                    return Err(TermError::Arity {
                        name: name.clone(),
                        expected: arity,
                        found: t.len(),
                    });
                }
                set.insert(t.iter().map(lookup).collect::<Result<Vec<_>, _>>()?);
            }
            relations.insert(name.clone(), (arity, set));
        }
        Ok(Indexed { index, relations })
    }
}

pub(crate) struct Indexed {
    pub index: HashMap<String, usize>,
    /// Name to (arity, tuples). An empty relation has arity 0 and accepts
    /// any arity.
    pub relations: HashMap<String, (usize, HashSet<Vec<usize>>)>,
}

impl Indexed {
    pub fn element(&self, v: &str) -> Result<usize, TermError> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| TermError::UnknownElement(v.to_string()))
    }

    /// Whether `name` holds of `args`. `"="` is built in.
    pub fn holds(&self, name: &str, args: &[usize]) -> Result<bool, TermError> {
        if name == "=" {
            return Ok(args.windows(2).all(|w| w[0] == w[1]));
        }
        let (arity, set) = self
            .relations
            .get(name)
            .ok_or_else(|| TermError::UnknownRelation(name.to_string()))?;
        if *arity != 0 && *arity != args.len() {
            return Err(TermError::Arity {
                name: name.to_string(),
                expected: *arity,
                found: args.len(),
            });
        }
        Ok(set.contains(args))
    }
}

/// A function whose value depends only on the coordinates in `support`.
/// Table keys are comma-separated values, `""` for the empty support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct SupportedFunction {
    pub support: Vec<i64>,
    pub table: BTreeMap<String, String>,
}

/// A point restricted to the window `lo, lo + 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct WindowPoint {
    pub lo: i64,
    pub values: Vec<usize>,
}

impl WindowPoint {
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn at(&self, c: i64) -> Result<usize, TermError> {
        if c < self.lo || c > self.hi() {
            return Err(TermError::WindowTooSmall {
                lo: self.lo,
                hi: self.hi(),
                coordinate: c,
            });
        }
        Ok(self.values[(c - self.lo) as usize])
    }
}

/// The triple `⟨s, m, G⟩` naming the set `A_{s,m,G}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct FilterTriple {
    pub s: Vec<i64>,
    pub m: usize,
    pub g: Vec<usize>,
}

impl FilterTriple {
    /// The triple for the union of supports, the larger level, and the
    /// pointwise maximum.
    pub fn combine(&self, other: &FilterTriple) -> FilterTriple {
        let mut s: Vec<i64> = self.s.iter().chain(&other.s).copied().collect();
        s.sort_unstable();
        s.dedup();
        FilterTriple {
            s,
            m: self.m.max(other.m),
            g: self
                .g
                .iter()
                .zip(&other.g)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }
}

pub(crate) fn key_of(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// All tuples in `0..k` of length `n`, in lexicographic order.
pub(crate) fn all_tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |v| {
                    let mut u = t.clone();
                    u.push(v);
                    u
                })
            })
            .collect();
    }
    out
}

fn check_support(support: &[i64]) -> Result<(), TermError> {
    if support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TermError::SupportNotSorted(support.to_vec()));
    }
    Ok(())
}

impl SupportedFunction {
    pub fn from_fn(support: Vec<i64>, k: usize, mut f: impl FnMut(&[usize]) -> String) -> Self {
        let table = all_tuples(k, support.len())
            .iter()
            .map(|t| (key_of(t), f(t)))
            .collect();
        SupportedFunction { support, table }
    }

    pub fn lookup(&self, values: &[usize]) -> Result<&str, TermError> {
        let key = key_of(values);
        self.table
            .get(&key)
            .map(String::as_str)
            .ok_or(TermError::MissingEntry(key))
    }

    /// Table values as element indices, densely indexed by tuple in base `k`.
    pub(crate) fn compile(&self, target: &Indexed, k: usize) -> Result<Compiled, TermError> {
        check_support(&self.support)?;
        for key in self.table.keys() {
            let ok = key.is_empty() && self.support.is_empty()
                || key.split(',').count() == self.support.len()
                    && key
                        .split(',')
                        .all(|p| p.trim().parse::<usize>().is_ok_and(|v| v < k));
            if !ok {
                return Err(TermError::BadKey(key.clone()));
            }
        }
        let values = all_tuples(k, self.support.len())
            .iter()
            .map(|t| target.element(self.lookup(t)?))
            .collect::<Result<_, _>>()?;
        Ok(Compiled {
            support: self.support.clone(),
            k,
            values,
        })
    }

    /// Every table value, deduplicated.
    pub fn range(&self) -> Vec<String> {
        let mut r: Vec<String> = self.table.values().cloned().collect();
        r.sort();
        r.dedup();
        r
    }
}

pub(crate) struct Compiled {
    pub support: Vec<i64>,
    pub k: usize,
    pub values: Vec<usize>,
}

impl Compiled {
    /// Value at a point given as coordinate lookups.
    pub fn at(&self, mut coord: impl FnMut(i64) -> usize) -> usize {
        let mut idx = 0;
        for &c in &self.support {
            idx = idx * self.k + coord(c);
        }
        self.values[idx]
    }
}

pub fn eval_supported(f: &SupportedFunction, x: &WindowPoint) -> Result<String, TermError> {
    check_support(&f.support)?;
    let values = f
        .support
        .iter()
        .map(|&c| x.at(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(f.lookup(&values)?.to_string())
}

/// Membership of `x` in `A_{s,m,G}`: `x[s]` strictly increasing, inside
/// `B_m`, and `G`-spread apart.
pub fn filter_contains(
    x: &WindowPoint,
    t: &FilterTriple,
    levels: &LevelSequence,
) -> Result<bool, TermError> {
    let mut s = t.s.clone();
    s.sort_unstable();
    s.dedup();
    let values = s.iter().map(|&c| x.at(c)).collect::<Result<Vec<_>, _>>()?;
    let level = levels.level(t.m)?;
    if let Some(&v) = values.iter().find(|&&v| v >= t.g.len()) {
        return Err(TermError::OutOfScale {
            value: v,
            k: t.g.len(),
        });
    }
    Ok(values.windows(2).all(|w| w[0] < w[1])
        && values.iter().all(|v| level.contains(v))
        && crate::ramsey::spread_apart(&values, &t.g).unwrap_or(false))
}

/// The constant function with value `a`.
pub fn diagonal(a: impl Into<String>) -> SupportedFunction {
    SupportedFunction {
        support: Vec::new(),
        table: [(String::new(), a.into())].into_iter().collect(),
    }
}

/// `K(f)(x) = f(s(x))` with `s(x)(n) = x(n + 1)`: the support moves up by one.
pub fn shift_k(f: &SupportedFunction) -> SupportedFunction {
    SupportedFunction {
        support: f.support.iter().map(|c| c + 1).collect(),
        table: f.table.clone(),
    }
}

/// The automorphism `k` on representatives.
pub fn automorphism_k(f: &SupportedFunction) -> SupportedFunction {
    shift_k(f)
}

/// `j' = k ∘ j*`: shift the support and apply `j` to every table value.
pub fn compose_jprime(
    f: &SupportedFunction,
    j: &BTreeMap<String, String>,
) -> Result<SupportedFunction, TermError> {
    let table = f
        .table
        .iter()
        .map(|(key, v)| {
            j.get(v)
                .map(|w| (key.clone(), w.clone()))
                .ok_or_else(|| TermError::JUndefined(v.clone()))
        })
        .collect::<Result<_, _>>()?;
    Ok(SupportedFunction {
        support: shift_k(f).support,
        table,
    })
}
