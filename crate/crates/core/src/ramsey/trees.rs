use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::RamseyError;

/// A finite tree, either as an explicit strict order or as a set of 0/1
/// sequences ordered by extension. `branch` optionally names a candidate
/// branch (node names, or sequences).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreePresentation {
    Order {
        nodes: Vec<String>,
        /// `[a, b]` means `a <_T b`.
        less: Vec<(String, String)>,
        #[serde(default)]
        branch: Option<Vec<String>>,
    },
    Binary {
        /// Strings over `{0, 1}`; `""` is the root.
        sequences: Vec<String>,
        #[serde(default)]
        branch: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Check {
    pub pass: bool,
    pub failures: Vec<String>,
}

impl Check {
    fn from(failures: Vec<String>) -> Self {
        Check {
            pass: failures.is_empty(),
            failures,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct TreeReport {
    pub tree: Check,
    pub k_tree: Check,
    /// Present for binary presentations.
    pub binary_k_tree: Option<Check>,
    /// Present when a branch candidate is given.
    pub branch: Option<Check>,
    /// Rank of each node.
    pub ranks: BTreeMap<String, usize>,
}

struct Order {
    names: Vec<String>,
    less: Vec<Vec<bool>>,
}

/// Node names, order pairs and an optional branch, all as labels.
type RawOrder = (Vec<String>, Vec<(String, String)>, Option<Vec<String>>);

fn order_of(t: &TreePresentation) -> Result<(Order, Option<Vec<usize>>), RamseyError> {
    let (names, pairs, branch): RawOrder = match t {
        TreePresentation::Order {
            nodes,
            less,
            branch,
        } => (nodes.clone(), less.clone(), branch.clone()),
        TreePresentation::Binary { sequences, branch } => {
            if let Some(bad) = sequences
                .iter()
                .find(|s| s.chars().any(|c| c != '0' && c != '1'))
            {
                return Err(RamseyError::MalformedTree(format!(
                    "{bad:?} is not a 0/1 string"
                )));
            }
            let mut pairs = Vec::new();
            for a in sequences {
                for b in sequences {
                    if a.len() < b.len() && b.starts_with(a.as_str()) {
                        pairs.push((a.clone(), b.clone()));
                    }
                }
            }
            (sequences.clone(), pairs, branch.clone())
        }
    };
    let mut index = BTreeMap::new();
    for (k, v) in names.iter().enumerate() {
        if index.insert(v.clone(), k).is_some() {
            return Err(RamseyError::MalformedTree(format!(
                "node {v:?} listed twice"
            )));
        }
    }
    let lookup = |v: &String| {
        index
            .get(v)
            .copied()
            .ok_or_else(|| RamseyError::MalformedTree(format!("unknown node {v:?}")))
    };
    let n = names.len();
    let mut less = vec![vec![false; n]; n];
    for (a, b) in &pairs {
        less[lookup(a)?][lookup(b)?] = true;
    }
    let branch = branch
        .map(|b| b.iter().map(lookup).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    Ok((Order { names, less }, branch))
}

/// Checks the tree axioms, the `K`-tree conditions, the binary conditions
/// for binary presentations, and the branch conditions for a candidate.
pub fn tree_validators(t: &TreePresentation, k: usize) -> Result<TreeReport, RamseyError> {
    let (o, branch) = order_of(t)?;
    let n = o.names.len();
    let mut tree = Vec::new();
    for a in 0..n {
        if o.less[a][a] {
            tree.push(format!("{} precedes itself", o.names[a]));
        }
        for b in 0..n {
            for c in 0..n {
                if o.less[a][b] && o.less[b][c] && !o.less[a][c] {
                    tree.push(format!(
                        "not transitive: {} < {} < {}",
                        o.names[a], o.names[b], o.names[c]
                    ));
                }
            }
        }
    }
    // Each segment must be linearly ordered.
    for c in 0..n {
        let seg: Vec<usize> = (0..n).filter(|&y| o.less[y][c]).collect();
        for (i, &a) in seg.iter().enumerate() {
            for &b in &seg[i + 1..] {
                if !o.less[a][b] && !o.less[b][a] {
                    tree.push(format!(
                        "segment of {} is not linear: {} and {} are incomparable",
                        o.names[c], o.names[a], o.names[b]
                    ));
                }
            }
        }
    }
    let rank: Vec<usize> = (0..n)
        .map(|c| (0..n).filter(|&y| o.less[y][c]).count())
        .collect();
    let mut k_tree = Vec::new();
    for c in 0..n {
        if rank[c] >= k {
            k_tree.push(format!("{} has rank {} ≥ {k}", o.names[c], rank[c]));
        }
    }
    for alpha in 0..k {
        let size = rank.iter().filter(|&&r| r == alpha).count();
        if size == 0 {
            k_tree.push(format!("level {alpha} is empty"));
        } else if size >= k {
            k_tree.push(format!("level {alpha} has {size} ≥ {k} nodes"));
        }
    }
    let binary_k_tree = match t {
        TreePresentation::Binary { sequences, .. } => {
            let set: BTreeSet<&str> = sequences.iter().map(String::as_str).collect();
            let mut failures = Vec::new();
            for s in sequences {
                if s.len() >= k {
                    failures.push(format!("{s:?} has length {} ≥ {k}", s.len()));
                }
                for l in 0..s.len() {
                    if !set.contains(&s[..l]) {
                        failures.push(format!("restriction {:?} of {s:?} is missing", &s[..l]));
                        break;
                    }
                }
            }
            for l in 0..k {
                if !sequences.iter().any(|s| s.len() == l) {
                    failures.push(format!("no sequence of length {l}"));
                }
            }
            Some(Check::from(failures))
        }
        TreePresentation::Order { .. } => None,
    };
    let branch = branch.map(|b| {
        let mut failures = Vec::new();
        for alpha in 0..k {
            let hits: Vec<&str> = b
                .iter()
                .filter(|&&x| rank[x] == alpha)
                .map(|&x| o.names[x].as_str())
                .collect();
            if hits.len() != 1 {
                failures.push(format!(
                    "meets level {alpha} in {} nodes {hits:?}",
                    hits.len()
                ));
            }
        }
        for &x in &b {
            for y in 0..n {
                if o.less[y][x] && !b.contains(&y) {
                    failures.push(format!(
                        "{} lies below {} but is missing",
                        o.names[y], o.names[x]
                    ));
                }
            }
        }
        Check::from(failures)
    });
    Ok(TreeReport {
        tree: Check::from(tree),
        k_tree: Check::from(k_tree),
        binary_k_tree,
        branch,
        ranks: o.names.iter().cloned().zip(rank).collect(),
    })
}
