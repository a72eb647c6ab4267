use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::QError;

/// How strictly `j` is checked.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema,
)]
#[serde(rename_all = "snake_case")]
pub enum JMode {
    /// `j` is a bijection preserving and reflecting edges.
    #[default]
    Automorphism,
    /// `j` only has to preserve edges.
    Endomorphism,
}

/// A finite membership digraph with a level filtration and a map `j`.
///
/// An edge `[x, y]` means `x ∈ y`. `levels[0]` must list every node and
/// each later level must be included in the one before. An empty `levels`
/// list is read as the single level of all nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct BaseStructure {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub levels: Vec<Vec<String>>,
    pub j: BTreeMap<String, String>,
    #[serde(default)]
    pub mode: JMode,
}

/// Index-based form of a validated [`BaseStructure`].
#[derive(Debug, Clone)]
pub struct Base {
    pub names: Vec<String>,
    pub index: HashMap<String, usize>,
    pub adj: Vec<Vec<bool>>,
    /// Members of each node, ascending by index.
    pub ext: Vec<Vec<usize>>,
    pub levels: Vec<Vec<bool>>,
    pub j: Vec<usize>,
    pub mode: JMode,
}

impl Base {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn node(&self, name: &str) -> Result<usize, QError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| QError::UnknownNode(name.to_string()))
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    /// Node indices in lexicographic order of their labels.
    pub fn lex_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        order
    }

    pub fn is_fixed(&self, x: usize) -> bool {
        self.j[x] == x
    }
}

impl BaseStructure {
    /// A structure with `j` the identity and the single level of all nodes.
    pub fn with_identity(
        nodes: impl IntoIterator<Item = impl Into<String>>,
        edges: impl IntoIterator<Item = (impl Into<String>, impl Into<String>)>,
    ) -> Self {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        BaseStructure {
            j: nodes.iter().map(|v| (v.clone(), v.clone())).collect(),
            edges: edges
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            levels: vec![nodes.clone()],
            nodes,
            mode: JMode::Automorphism,
        }
    }

    /// Validates every invariant and returns the indexed form.
    pub fn index(&self) -> Result<Base, QError> {
        let mut index = HashMap::with_capacity(self.nodes.len());
        for (k, v) in self.nodes.iter().enumerate() {
            if index.insert(v.clone(), k).is_some() {
                return Err(QError::DuplicateNode(v.clone()));
            }
        }
        let n = self.nodes.len();
        let lookup = |name: &String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| QError::UnknownNode(name.clone()))
        };
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in &self.edges {
            adj[lookup(a)?][lookup(b)?] = true;
        }
        let ext = (0..n)
            .map(|y| (0..n).filter(|&x| adj[x][y]).collect())
            .collect();

        let mut levels: Vec<Vec<bool>> = Vec::new();
        if self.levels.is_empty() {
            levels.push(vec![true; n]);
        }
        for (k, level) in self.levels.iter().enumerate() {
            let mut mask = vec![false; n];
            for v in level {
                mask[lookup(v)?] = true;
            }
            if k == 0 && mask.iter().any(|m| !m) {
                let missing = (0..n).find(|&x| !mask[x]).expect("some node missing");
                return Err(QError::LevelZeroIncomplete(self.nodes[missing].clone()));
            }
            if let Some(prev) = levels.last() {
                if let Some(x) = (0..n).find(|&x| mask[x] && !prev[x]) {
                    return Err(QError::LevelsNotNested {
                        level: k,
                        node: self.nodes[x].clone(),
                    });
                }
            }
            levels.push(mask);
        }

        let mut j = vec![usize::MAX; n];
        for (x, name) in self.nodes.iter().enumerate() {
            let target = self
                .j
                .get(name)
                .ok_or_else(|| QError::JUndefined(name.clone()))?;
            j[x] = lookup(target)?;
        }
        if let Some(extra) = self.j.keys().find(|k| !index.contains_key(*k)) {
            return Err(QError::UnknownNode(extra.clone()));
        }

        let base = Base {
            names: self.nodes.clone(),
            index,
            adj,
            ext,
            levels,
            j,
            mode: self.mode,
        };
        check_j(&base)?;
        Ok(base)
    }
}

fn check_j(b: &Base) -> Result<(), QError> {
    let n = b.len();
    if b.mode == JMode::Automorphism {
        let mut preimage = vec![usize::MAX; n];
        for x in 0..n {
            let y = b.j[x];
            if preimage[y] != usize::MAX {
                return Err(QError::JNotInjective {
                    first: b.names[preimage[y]].clone(),
                    second: b.names[x].clone(),
                });
            }
            preimage[y] = x;
        }
    }
    for x in 0..n {
        for y in 0..n {
            let image_edge = b.adj[b.j[x]][b.j[y]];
            if b.adj[x][y] && !image_edge {
                return Err(QError::JBreaksEdge {
                    member: b.names[x].clone(),
                    set: b.names[y].clone(),
                });
            }
            if b.mode == JMode::Automorphism && !b.adj[x][y] && image_edge {
                return Err(QError::JCreatesEdge {
                    member: b.names[x].clone(),
                    set: b.names[y].clone(),
                });
            }
        }
    }
    for (k, level) in b.levels.iter().enumerate() {
        if let Some(x) = (0..n).find(|&x| level[x] && !level[b.j[x]]) {
            return Err(QError::JLeavesLevel {
                level: k,
                node: b.names[x].clone(),
            });
        }
    }
    Ok(())
}
