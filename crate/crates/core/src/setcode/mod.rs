//! Sets coded by finite pointed digraphs.
//!
//! A [`PointedGraph`] with an extensional, well-founded, topped edge
//! relation codes the set obtained by Mostowski-collapsing its top. This
//! module validates codes, collapses them to canonical [`HFSet`] strings,
//! decides isomorphism and the derived membership relation between codes,
//! and implements the singleton-wrapping operation `T` and ordinal codes.

mod embed;
mod hfset;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use embed::{
    e_rel, e_rel_prepared, e_rel_with_cap, ERelMethod, ERelResult, PreparedCode, DEFAULT_EMBED_CAP,
};
pub use hfset::HFSet;

/// Upper bound on `n` for [`ordinal_code`].
pub const DEFAULT_ORDINAL_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetCodeError {
    #[error("top `{0}` is not a node")]
    TopMissing(String),
    #[error("edge endpoint `{0}` is not a node")]
    UnknownNode(String),
    #[error("duplicate node label `{0}`")]
    DuplicateNode(String),
    #[error("graph is not {0}")]
    Invalid(Flag),
    #[error("ordinal {n} exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("malformed set string at byte {0}")]
    MalformedSet(usize),
}

/// One of the three conditions a set code must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Extensional,
    WellFounded,
    Topped,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Extensional => "extensional",
            Flag::WellFounded => "well-founded",
            Flag::Topped => "topped",
        })
    }
}

/// A finite digraph with a designated top node. An edge `[x, y]` means
/// `x R y`, read "x is a member of y".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct PointedGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub top: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Validity {
    pub extensional: bool,
    pub well_founded: bool,
    pub topped: bool,
}

impl Validity {
    pub fn all(&self) -> bool {
        self.extensional && self.well_founded && self.topped
    }

    fn first_failure(&self) -> Option<Flag> {
        if !self.extensional {
            Some(Flag::Extensional)
        } else if !self.well_founded {
            Some(Flag::WellFounded)
        } else if !self.topped {
            Some(Flag::Topped)
        } else {
            None
        }
    }
}

/// Index-based view of a structurally sound graph.
#[derive(Debug, Clone)]
pub(crate) struct Indexed {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    pub preds: Vec<Vec<usize>>,
    pub top: usize,
}

impl Indexed {
    /// Nodes ordered so that every node comes after all of its predecessors,
    /// or `None` when the relation has a cycle.
    pub fn topological(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&x| indeg[x] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for y in 0..self.n {
                if self.adj[x][y] {
                    indeg[y] -= 1;
                    if indeg[y] == 0 {
                        queue.push_back(y);
                    }
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    fn validity(&self) -> Validity {
        let mut pred_sets: Vec<&Vec<usize>> = self.preds.iter().collect();
        pred_sets.sort();
        let extensional = pred_sets.windows(2).all(|w| w[0] != w[1]);
        let well_founded = self.topological().is_some();
        let mut seen = vec![false; self.n];
        seen[self.top] = true;
        let mut stack = vec![self.top];
        while let Some(y) = stack.pop() {
            for &x in &self.preds[y] {
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        Validity {
            extensional,
            well_founded,
            topped: seen.iter().all(|&s| s),
        }
    }
}

impl PointedGraph {
    pub fn new(
        nodes: impl IntoIterator<Item = impl Into<String>>,
        edges: impl IntoIterator<Item = (impl Into<String>, impl Into<String>)>,
        top: impl Into<String>,
    ) -> Result<Self, SetCodeError> {
        let g = PointedGraph {
            nodes: nodes.into_iter().map(Into::into).collect(),
            edges: edges
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            top: top.into(),
        };
        g.indexed()?;
        Ok(g)
    }

    pub(crate) fn indexed(&self) -> Result<Indexed, SetCodeError> {
        let mut index = HashMap::with_capacity(self.nodes.len());
        for (k, v) in self.nodes.iter().enumerate() {
            if index.insert(v.as_str(), k).is_some() {
                return Err(SetCodeError::DuplicateNode(v.clone()));
            }
        }
        let top = *index
            .get(self.top.as_str())
            .ok_or_else(|| SetCodeError::TopMissing(self.top.clone()))?;
        let n = self.nodes.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in &self.edges {
            let x = *index
                .get(a.as_str())
                .ok_or_else(|| SetCodeError::UnknownNode(a.clone()))?;
            let y = *index
                .get(b.as_str())
                .ok_or_else(|| SetCodeError::UnknownNode(b.clone()))?;
            adj[x][y] = true;
        }
        let preds = (0..n)
            .map(|y| (0..n).filter(|&x| adj[x][y]).collect())
            .collect();
        Ok(Indexed { n, adj, preds, top })
    }

    /// Checks the three code conditions. Errors only on structural defects.
    pub fn validate(&self) -> Result<Validity, SetCodeError> {
        Ok(self.indexed()?.validity())
    }

    fn valid_indexed(&self) -> Result<Indexed, SetCodeError> {
        let ix = self.indexed()?;
        match ix.validity().first_failure() {
            Some(flag) => Err(SetCodeError::Invalid(flag)),
            None => Ok(ix),
        }
    }

    /// The same graph with node labels permuted by `rename`.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> PointedGraph {
        PointedGraph {
            nodes: self.nodes.iter().map(|v| rename(v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|(a, b)| (rename(a), rename(b)))
                .collect(),
            top: rename(&self.top),
        }
    }
}

/// Canonical collapse value of every node, in node order.
fn collapse_all(ix: &Indexed) -> Vec<HFSet> {
    let order = ix.topological().expect("well-founded graph");
    let mut value: Vec<Option<HFSet>> = vec![None; ix.n];
    for x in order {
        let members = ix.preds[x]
            .iter()
            .map(|&z| value[z].clone().expect("predecessors come first"));
        value[x] = Some(HFSet::from_members(members));
    }
    value
        .into_iter()
        .map(|v| v.expect("all nodes visited"))
        .collect()
}

/// Free function form of [`PointedGraph::validate`].
pub fn validate(g: &PointedGraph) -> Result<Validity, SetCodeError> {
    g.validate()
}

/// The set coded by `g`: the Mostowski collapse of its top.
pub fn collapse(g: &PointedGraph) -> Result<HFSet, SetCodeError> {
    let ix = g.valid_indexed()?;
    let values = collapse_all(&ix);
    Ok(values[ix.top].clone())
}

/// Whether two codes are isomorphic as pointed structures.
///
/// Valid codes are rigid and the collapse is a complete invariant, so this
/// compares collapses.
pub fn iso_eq(g1: &PointedGraph, g2: &PointedGraph) -> Result<bool, SetCodeError> {
    Ok(collapse(g1)? == collapse(g2)?)
}

/// The code of `T(z)`: every label `x` becomes `{x}` and edges follow.
pub fn usc_t(g: &PointedGraph) -> PointedGraph {
    g.relabel(|x| format!("{{{x}}}"))
}

/// `a, b, ..., z, aa, ab, ...`
pub fn alpha_label(mut k: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Code of the ordinal `n`, capped at [`DEFAULT_ORDINAL_CAP`].
pub fn ordinal_code(n: usize) -> Result<PointedGraph, SetCodeError> {
    ordinal_code_capped(n, DEFAULT_ORDINAL_CAP)
}

/// Code of the ordinal `n`: a strict linear order on `n` nodes with a fresh
/// top appended at the end. Nodes are labelled `a, b, c, ...` in order and
/// the top gets the next label.
pub fn ordinal_code_capped(n: usize, cap: usize) -> Result<PointedGraph, SetCodeError> {
    if n > cap {
        return Err(SetCodeError::CapExceeded { n, cap });
    }
    let nodes: Vec<String> = (0..=n).map(alpha_label).collect();
    let mut edges = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            edges.push((nodes[i].clone(), nodes[j].clone()));
        }
    }
    Ok(PointedGraph {
        top: nodes[n].clone(),
        nodes,
        edges,
    })
}

/// `Some(n)` when `g` codes the von Neumann ordinal `n`.
pub fn decode_ordinal(g: &PointedGraph) -> Result<Option<usize>, SetCodeError> {
    Ok(collapse(g)?.as_ordinal())
}

/// Every valid code whose nodes are labelled `"0"`, ..., `"{n-1}"`.
///
/// Brute force over all loop-free edge sets; intended for `n <= 5`.
pub fn valid_graphs_on(n: usize) -> Vec<PointedGraph> {
    let labels: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut adj = vec![vec![false; n]; n];
        let mut outdeg = vec![0usize; n];
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                adj[a][b] = true;
                outdeg[a] += 1;
            }
        }
        // a topped graph has exactly one sink, the top
        let mut sinks = (0..n).filter(|&x| outdeg[x] == 0);
        let (Some(top), None) = (sinks.next(), sinks.next()) else {
            continue;
        };
        let preds = (0..n)
            .map(|y| (0..n).filter(|&x| adj[x][y]).collect())
            .collect();
        let ix = Indexed { n, adj, preds, top };
        if !ix.validity().all() {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &(a, b))| (labels[a].clone(), labels[b].clone()))
            .collect();
        out.push(PointedGraph {
            nodes: labels.clone(),
            edges,
            top: labels[top].clone(),
        });
    }
    out
}

/// Number of label permutations preserving edges and top. Brute force.
pub fn automorphism_count(g: &PointedGraph) -> Result<usize, SetCodeError> {
    let ix = g.indexed()?;
    let mut perm: Vec<usize> = Vec::with_capacity(ix.n);
    let mut used = vec![false; ix.n];
    Ok(count_automorphisms(&ix, &mut perm, &mut used))
}

fn count_automorphisms(ix: &Indexed, perm: &mut Vec<usize>, used: &mut [bool]) -> usize {
    let x = perm.len();
    if x == ix.n {
        return usize::from(perm[ix.top] == ix.top);
    }
    let mut total = 0;
    for y in 0..ix.n {
        if used[y] {
            continue;
        }
        let consistent = (0..x)
            .all(|u| ix.adj[u][x] == ix.adj[perm[u]][y] && ix.adj[x][u] == ix.adj[y][perm[u]])
            && ix.adj[x][x] == ix.adj[y][y];
        if consistent {
            used[y] = true;
            perm.push(y);
            total += count_automorphisms(ix, perm, used);
            perm.pop();
            used[y] = false;
        }
    }
    total
}

/// Distinct collapse values among `graphs`; a convenience for sweeps.
pub fn distinct_collapses(graphs: &[PointedGraph]) -> HashSet<HFSet> {
    graphs.iter().filter_map(|g| collapse(g).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(nodes: &[&str], edges: &[(&str, &str)], top: &str) -> PointedGraph {
        PointedGraph::new(nodes.iter().copied(), edges.iter().copied(), top).unwrap()
    }

    #[test]
    fn single_node_is_valid() {
        let v = g(&["a"], &[], "a").validate().unwrap();
        assert!(v.all());
    }

    #[test]
    fn two_isolated_nodes_not_extensional() {
        let v = g(&["a", "b"], &[], "b").validate().unwrap();
        assert!(!v.extensional);
    }

    #[test]
    fn two_cycle_not_well_founded() {
        let v = g(&["a", "b"], &[("a", "b"), ("b", "a")], "b")
            .validate()
            .unwrap();
        assert!(!v.well_founded);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            PointedGraph::new(["a"], [("a", "b")], "a").unwrap_err(),
            SetCodeError::UnknownNode("b".into())
        );
        assert_eq!(
            PointedGraph::new(["a"], Vec::<(String, String)>::new(), "z").unwrap_err(),
            SetCodeError::TopMissing("z".into())
        );
        assert_eq!(
            PointedGraph::new(["a", "a"], Vec::<(String, String)>::new(), "a").unwrap_err(),
            SetCodeError::DuplicateNode("a".into())
        );
    }

    #[test]
    fn chain_collapses_to_singleton_of_empty() {
        assert_eq!(
            collapse(&g(&["a", "b"], &[("a", "b")], "b"))
                .unwrap()
                .as_str(),
            "{{}}"
        );
    }

    #[test]
    fn kuratowski_pair_code() {
        // x = ∅, y = {∅}; z = {{x},{x,y}}, where {x} is y itself
        let code = g(
            &["x", "y", "xy", "z"],
            &[
                ("x", "y"),
                ("x", "xy"),
                ("y", "xy"),
                ("y", "z"),
                ("xy", "z"),
            ],
            "z",
        );
        assert_eq!(collapse(&code).unwrap().as_str(), "{{{}},{{},{{}}}}");
    }

    #[test]
    fn collapse_names_failed_flag() {
        let bad = g(&["a", "b"], &[], "b");
        assert_eq!(
            collapse(&bad).unwrap_err(),
            SetCodeError::Invalid(Flag::Extensional)
        );
        let cyc = g(&["a", "b"], &[("a", "b"), ("b", "a")], "b");
        assert_eq!(
            collapse(&cyc).unwrap_err(),
            SetCodeError::Invalid(Flag::WellFounded)
        );
        let untopped = g(&["a", "b", "c"], &[("a", "b")], "b");
        assert!(matches!(
            collapse(&untopped).unwrap_err(),
            SetCodeError::Invalid(_)
        ));
    }

    #[test]
    fn ordinal_codes() {
        let zero = ordinal_code(0).unwrap();
        assert_eq!(zero.nodes, ["a"]);
        assert_eq!(collapse(&zero).unwrap().as_str(), "{}");
        assert_eq!(
            collapse(&ordinal_code(1).unwrap()).unwrap().as_str(),
            "{{}}"
        );
        assert_eq!(
            collapse(&ordinal_code(3).unwrap()).unwrap().as_str(),
            "{{},{{}},{{},{{}}}}"
        );
        assert_eq!(
            ordinal_code_capped(5, 4).unwrap_err(),
            SetCodeError::CapExceeded { n: 5, cap: 4 }
        );
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_ordinal(&ordinal_code(3).unwrap()).unwrap(), Some(3));
        assert_eq!(decode_ordinal(&ordinal_code(0).unwrap()).unwrap(), Some(0));
        // {{∅}}
        let code = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")], "c");
        assert_eq!(decode_ordinal(&code).unwrap(), None);
    }

    #[test]
    fn t_of_ordinal_two_wraps_labels() {
        let t = usc_t(&ordinal_code(2).unwrap());
        assert_eq!(t.nodes, ["{a}", "{b}", "{c}"]);
        assert_eq!(
            t.edges,
            [
                ("{a}".to_string(), "{b}".to_string()),
                ("{a}".to_string(), "{c}".to_string()),
                ("{b}".to_string(), "{c}".to_string())
            ]
        );
        assert_eq!(t.top, "{c}");
    }

    #[test]
    fn iso_examples() {
        let a = ordinal_code(2).unwrap();
        let b = a.relabel(|x| format!("n_{x}"));
        assert!(iso_eq(&a, &b).unwrap());
        assert!(!iso_eq(&a, &ordinal_code(3).unwrap()).unwrap());
    }

    #[test]
    fn alpha_labels() {
        assert_eq!(alpha_label(0), "a");
        assert_eq!(alpha_label(25), "z");
        assert_eq!(alpha_label(26), "aa");
        assert_eq!(alpha_label(27), "ab");
        assert_eq!(alpha_label(26 + 26 * 26), "aaa");
    }

    #[test]
    fn small_graph_counts() {
        // one code on one node, one on two nodes ({∅}), and the two
        // three-node sets {{∅}} and {∅,{∅}} in every labelling
        assert_eq!(valid_graphs_on(1).len(), 1);
        assert_eq!(valid_graphs_on(2).len(), 2);
        assert_eq!(valid_graphs_on(3).len(), 2 * 6);
    }
}
