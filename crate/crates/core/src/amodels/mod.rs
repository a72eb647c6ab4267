//! Finite A-models: a structure `N` with an automorphism `j`, a standard
//! part, and an embedding `i` of the standard part onto an initial segment
//! of `N` whose range is exactly the fixed points of `j`.
//!
//! Elementarity is checked by bounded Ehrenfeucht–Fraïssé games.

pub mod ef;
mod limit;
pub mod random;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qmodel::{Base, BaseStructure, QError};

pub use limit::{cocone_violations, direct_limit, find_isomorphism, oracle_limit, Limit};

pub const DEFAULT_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AModelError {
    #[error(transparent)]
    Structure(#[from] QError),
    #[error("standard node {0:?} listed twice")]
    DuplicateStandard(String),
    #[error("unknown standard node {0:?}")]
    UnknownStandard(String),
    #[error("i is undefined at {0:?}")]
    IUndefined(String),
    #[error("no rank given for {0:?}")]
    RankUndefined(String),
    #[error("map {from}->{to} is undefined at {node:?}")]
    MapUndefined {
        from: usize,
        to: usize,
        node: String,
    },
    #[error("map {from}->{to} refers to stage {stage}, which does not exist")]
    NoSuchStage {
        from: usize,
        to: usize,
        stage: usize,
    },
    #[error("map {from}->{to} does not go forward")]
    Backward { from: usize, to: usize },
    #[error("no map from stage {0} to stage {}", .0 + 1)]
    MissingMap(usize),
    #[error("stages disagree on the standard part at stage {0}")]
    StandardMismatch(usize),
    #[error("map {from}->{to} differs from the composite at {node:?}")]
    Functoriality {
        from: usize,
        to: usize,
        node: String,
    },
    #[error("{relation} between {x:?} and {y:?} is decided differently at different stages")]
    Ambiguous {
        relation: String,
        x: String,
        y: String,
    },
    #[error("j sends original {node:?} of stage {stage} to a non-original element")]
    JNotOriginal { stage: usize, node: String },
    #[error("diagram has no stages")]
    Empty,
}

/// The standard part with its order, given by integer ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct StandardPart {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub rank: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct AModelF {
    pub structure: BaseStructure,
    pub standard_part: StandardPart,
    pub i: BTreeMap<String, String>,
    /// The order on `N`: `x` precedes `y` iff `rank[x] < rank[y]`.
    pub rank: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AViolation {
    INotInjective {
        first: String,
        second: String,
    },
    IBreaksEdge {
        a: String,
        b: String,
    },
    IBreaksOrder {
        a: String,
        b: String,
    },
    NotInitialSegment {
        node: String,
        above: String,
    },
    FixedOutsideRange {
        node: String,
    },
    RangeNotFixed {
        node: String,
    },
    NotElementary {
        map: String,
        tuple: Vec<String>,
        depth: usize,
    },
    MapNotInjective {
        first: String,
        second: String,
    },
    MapBreaksEdge {
        a: String,
        b: String,
    },
    MapBreaksOrder {
        a: String,
        b: String,
    },
    Figure1 {
        standard: String,
        expected: String,
        actual: String,
    },
    Figure2 {
        node: String,
        pi_after_j: String,
        j_after_pi: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct AReport {
    pub pass: bool,
    pub violations: Vec<AViolation>,
}

impl AReport {
    fn from(violations: Vec<AViolation>) -> Self {
        AReport {
            pass: violations.is_empty(),
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct MapTable {
    pub from: usize,
    pub to: usize,
    pub table: BTreeMap<String, String>,
}

/// A finite chain of A-models. Maps between consecutive stages are
/// required; any others given are checked against the composites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Diagram {
    pub stages: Vec<AModelF>,
    pub maps: Vec<MapTable>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct DiagramReport {
    pub pass: bool,
    pub stages: Vec<AReport>,
    /// One report per consecutive map, in stage order.
    pub maps: Vec<AReport>,
}

/// Indexed form of an [`AModelF`].
#[derive(Debug, Clone)]
pub(crate) struct Model {
    pub base: Base,
    pub rank: Vec<i64>,
    pub std_names: Vec<String>,
    pub std_index: HashMap<String, usize>,
    pub std_adj: Vec<Vec<bool>>,
    pub std_rank: Vec<i64>,
    pub i: Vec<usize>,
}

impl AModelF {
    /// The A-model with `N` the standard part and `i`, `j` identities.
    pub fn trivial(standard_part: StandardPart) -> Self {
        let mut structure =
            BaseStructure::with_identity(standard_part.nodes.clone(), standard_part.edges.clone());
        structure.levels.clear();
        AModelF {
            structure,
            i: standard_part
                .nodes
                .iter()
                .map(|v| (v.clone(), v.clone()))
                .collect(),
            rank: standard_part.rank.clone(),
            standard_part,
        }
    }

    pub(crate) fn index(&self) -> Result<Model, AModelError> {
        let base = self.structure.index()?;
        let sp = &self.standard_part;
        let mut std_index = HashMap::new();
        for (k, v) in sp.nodes.iter().enumerate() {
            if std_index.insert(v.clone(), k).is_some() {
                return Err(AModelError::DuplicateStandard(v.clone()));
            }
        }
        let s = sp.nodes.len();
        let std_lookup = |v: &String| {
            std_index
                .get(v)
                .copied()
                .ok_or_else(|| AModelError::UnknownStandard(v.clone()))
        };
        let mut std_adj = vec![vec![false; s]; s];
        for (a, b) in &sp.edges {
            std_adj[std_lookup(a)?][std_lookup(b)?] = true;
        }
        let std_rank = sp
            .nodes
            .iter()
            .map(|v| {
                sp.rank
                    .get(v)
                    .copied()
                    .ok_or_else(|| AModelError::RankUndefined(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let i = sp
            .nodes
            .iter()
            .map(|v| {
                let t = self
                    .i
                    .get(v)
                    .ok_or_else(|| AModelError::IUndefined(v.clone()))?;
                Ok(base.node(t)?)
            })
            .collect::<Result<_, AModelError>>()?;
        if let Some(k) = self.i.keys().find(|k| !std_index.contains_key(*k)) {
            return Err(AModelError::UnknownStandard(k.clone()));
        }
        let rank = base
            .names
            .iter()
            .map(|v| {
                self.rank
                    .get(v)
                    .copied()
                    .ok_or_else(|| AModelError::RankUndefined(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Model {
            base,
            rank,
            std_names: sp.nodes.clone(),
            std_index,
            std_adj,
            std_rank,
            i,
        })
    }
}

/// Checks both A-model requirements and elementarity of `i` to `depth`.
pub fn check_amodel(cand: &AModelF, depth: usize) -> Result<AReport, AModelError> {
    let m = cand.index()?;
    Ok(AReport::from(model_violations(&m, depth)))
}

pub(crate) fn model_violations(m: &Model, depth: usize) -> Vec<AViolation> {
    let mut out = Vec::new();
    let s = m.std_names.len();
    let sn = |a: usize| m.std_names[a].clone();
    let nn = |x: usize| m.base.names[x].clone();
    let mut injective = true;
    for a in 0..s {
        for b in 0..s {
            if a < b && m.i[a] == m.i[b] {
                injective = false;
                out.push(AViolation::INotInjective {
                    first: sn(a),
                    second: sn(b),
                });
            }
            if m.std_adj[a][b] != m.base.adj[m.i[a]][m.i[b]] {
                out.push(AViolation::IBreaksEdge { a: sn(a), b: sn(b) });
            }
            if (m.std_rank[a] <= m.std_rank[b]) != (m.rank[m.i[a]] <= m.rank[m.i[b]]) {
                out.push(AViolation::IBreaksOrder { a: sn(a), b: sn(b) });
            }
        }
    }
    let mut in_range = vec![false; m.base.len()];
    for &x in &m.i {
        in_range[x] = true;
    }
    for x in m.base.lex_order() {
        if in_range[x] {
            if !m.base.is_fixed(x) {
                out.push(AViolation::RangeNotFixed { node: nn(x) });
            }
            continue;
        }
        if m.base.is_fixed(x) {
            out.push(AViolation::FixedOutsideRange { node: nn(x) });
        }
        if let Some(&above) =
            m.i.iter()
                .filter(|&&r| m.rank[x] <= m.rank[r])
                .min_by(|&&p, &&q| m.base.names[p].cmp(&m.base.names[q]))
        {
            out.push(AViolation::NotInitialSegment {
                node: nn(x),
                above: nn(above),
            });
        }
    }
    if injective {
        if let Some(t) = ef::elementarity_witness(&m.std_adj, &m.base.adj, &m.i, depth) {
            out.push(AViolation::NotElementary {
                map: "i".into(),
                tuple: t.into_iter().map(sn).collect(),
                depth,
            });
        }
    }
    out
}

/// Resolves a map table against indexed stages.
pub(crate) fn map_indices(
    table: &BTreeMap<String, String>,
    src: &Model,
    dst: &Model,
    from: usize,
    to: usize,
) -> Result<Vec<usize>, AModelError> {
    src.base
        .names
        .iter()
        .map(|v| {
            let t = table.get(v).ok_or_else(|| AModelError::MapUndefined {
                from,
                to,
                node: v.clone(),
            })?;
            Ok(dst.base.node(t)?)
        })
        .collect()
}

/// Checks that `pi` is an elementary embedding (to `depth`) under which
/// both squares commute.
pub fn check_amodel_map(
    pi: &BTreeMap<String, String>,
    src: &AModelF,
    dst: &AModelF,
    depth: usize,
) -> Result<AReport, AModelError> {
    let (s, d) = (src.index()?, dst.index()?);
    let p = map_indices(pi, &s, &d, 0, 1)?;
    Ok(AReport::from(map_violations(&p, &s, &d, depth)))
}

pub(crate) fn map_violations(p: &[usize], s: &Model, d: &Model, depth: usize) -> Vec<AViolation> {
    let mut out = Vec::new();
    let n = s.base.len();
    let sn = |x: usize| s.base.names[x].clone();
    let dn = |x: usize| d.base.names[x].clone();
    let order = s.base.lex_order();
    let mut injective = true;
    for (k, &x) in order.iter().enumerate() {
        for &y in &order[k + 1..] {
            if p[x] == p[y] {
                injective = false;
                out.push(AViolation::MapNotInjective {
                    first: sn(x),
                    second: sn(y),
                });
            }
        }
    }
    for &x in &order {
        for &y in &order {
            if s.base.adj[x][y] != d.base.adj[p[x]][p[y]] {
                out.push(AViolation::MapBreaksEdge { a: sn(x), b: sn(y) });
            }
            if (s.rank[x] <= s.rank[y]) != (d.rank[p[x]] <= d.rank[p[y]]) {
                out.push(AViolation::MapBreaksOrder { a: sn(x), b: sn(y) });
            }
        }
    }
    for (a, name) in s.std_names.iter().enumerate() {
        let expected = d.std_index.get(name).map(|&b| d.i[b]);
        let actual = p[s.i[a]];
        if expected != Some(actual) {
            out.push(AViolation::Figure1 {
                standard: name.clone(),
                expected: expected.map_or_else(|| "<missing>".to_string(), dn),
                actual: dn(actual),
            });
        }
    }
    for &x in &order {
        let (pj, jp) = (p[s.base.j[x]], d.base.j[p[x]]);
        if pj != jp {
            out.push(AViolation::Figure2 {
                node: sn(x),
                pi_after_j: dn(pj),
                j_after_pi: dn(jp),
            });
        }
    }
    if injective && n > 0 {
        if let Some(t) = ef::elementarity_witness(&s.base.adj, &d.base.adj, p, depth) {
            out.push(AViolation::NotElementary {
                map: "pi".into(),
                tuple: t.into_iter().map(sn).collect(),
                depth,
            });
        }
    }
    out
}

/// Indexed stages and consecutive maps of a diagram, with the standard
/// parts and any extra maps checked.
pub(crate) struct Chain {
    pub stages: Vec<Model>,
    /// `next[a]` maps stage `a` into stage `a + 1`.
    pub next: Vec<Vec<usize>>,
}

impl Chain {
    /// `π[b][a]` for `b ≤ a`.
    pub fn compose(&self, b: usize, a: usize) -> Vec<usize> {
        let mut cur: Vec<usize> = (0..self.stages[b].base.len()).collect();
        for step in b..a {
            cur = cur.iter().map(|&x| self.next[step][x]).collect();
        }
        cur
    }
}

pub(crate) fn index_diagram(d: &Diagram) -> Result<Chain, AModelError> {
    if d.stages.is_empty() {
        return Err(AModelError::Empty);
    }
    let stages: Vec<Model> = d
        .stages
        .iter()
        .map(AModelF::index)
        .collect::<Result<_, _>>()?;
    for (k, st) in d.stages.iter().enumerate().skip(1) {
        if st.standard_part != d.stages[0].standard_part {
            return Err(AModelError::StandardMismatch(k));
        }
    }
    let count = stages.len();
    let mut next: Vec<Option<Vec<usize>>> = vec![None; count - 1];
    for m in &d.maps {
        for stage in [m.from, m.to] {
            if stage >= count {
                return Err(AModelError::NoSuchStage {
                    from: m.from,
                    to: m.to,
                    stage,
                });
            }
        }
        if m.to < m.from {
            return Err(AModelError::Backward {
                from: m.from,
                to: m.to,
            });
        }
        if m.to == m.from + 1 {
            next[m.from] = Some(map_indices(
                &m.table,
                &stages[m.from],
                &stages[m.to],
                m.from,
                m.to,
            )?);
        }
    }
    let next: Vec<Vec<usize>> = next
        .into_iter()
        .enumerate()
        .map(|(a, m)| m.ok_or(AModelError::MissingMap(a)))
        .collect::<Result<_, _>>()?;
    let chain = Chain { stages, next };
    for m in &d.maps {
        if m.to == m.from + 1 {
            continue;
        }
        let given = map_indices(
            &m.table,
            &chain.stages[m.from],
            &chain.stages[m.to],
            m.from,
            m.to,
        )?;
        let composite = chain.compose(m.from, m.to);
        if let Some(x) = (0..given.len()).find(|&x| given[x] != composite[x]) {
            return Err(AModelError::Functoriality {
                from: m.from,
                to: m.to,
                node: chain.stages[m.from].base.names[x].clone(),
            });
        }
    }
    Ok(chain)
}

/// Checks every stage with [`check_amodel`] and every consecutive map with
/// [`check_amodel_map`]. Composites of passing maps pass as well, so only
/// consecutive maps are examined.
pub fn check_diagram(d: &Diagram, depth: usize) -> Result<DiagramReport, AModelError> {
    let chain = index_diagram(d)?;
    let stages: Vec<AReport> = chain
        .stages
        .iter()
        .map(|m| AReport::from(model_violations(m, depth)))
        .collect();
    let maps: Vec<AReport> = chain
        .next
        .iter()
        .enumerate()
        .map(|(a, p)| {
            AReport::from(map_violations(
                p,
                &chain.stages[a],
                &chain.stages[a + 1],
                depth,
            ))
        })
        .collect();
    Ok(DiagramReport {
        pass: stages.iter().chain(&maps).all(|r| r.pass),
        stages,
        maps,
    })
}
