use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ColoringFamily, RamseyError};

/// Elements of `B` placed on nodes of the tree of sequences `h` with
/// `h(β) < γ_β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct AssignmentTree {
    pub k: usize,
    /// Node of each element, in order of assignment.
    pub assignment: Vec<(usize, Vec<usize>)>,
    /// Nodes of the chosen branch, root first.
    pub branch: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantViolation {
    /// Two elements share a node.
    SharedNode {
        node: Vec<usize>,
        first: usize,
        second: usize,
    },
    /// An element sits below a node that was empty when it arrived.
    OrphanNode {
        node: Vec<usize>,
        element: usize,
        missing: Vec<usize>,
    },
}

impl AssignmentTree {
    pub fn new(k: usize) -> Self {
        AssignmentTree {
            k,
            assignment: Vec::new(),
            branch: Vec::new(),
        }
    }

    fn occupied(&self) -> BTreeMap<&[usize], usize> {
        self.assignment
            .iter()
            .map(|(b, h)| (h.as_slice(), *b))
            .collect()
    }

    /// Places `b` on the shortest unoccupied restriction of
    /// `α ↦ F_α(b)` and returns that node.
    pub fn insert(&mut self, b: usize, fam: &ColoringFamily) -> Result<Vec<usize>, RamseyError> {
        if b >= self.k {
            return Err(RamseyError::OutOfScale(b));
        }
        let g: Vec<usize> = (0..self.k).map(|alpha| fam.tables[alpha][b]).collect();
        let occupied = self.occupied();
        let len = (0..=self.k)
            .find(|&len| !occupied.contains_key(&g[..len]))
            .ok_or(RamseyError::TreeFull(b))?;
        let node = g[..len].to_vec();
        self.assignment.push((b, node.clone()));
        Ok(node)
    }

    /// The deepest occupied node, lexicographically least among the
    /// deepest, with its ancestors.
    pub fn choose_branch(&mut self) {
        let top = self
            .assignment
            .iter()
            .map(|(_, h)| h)
            .max_by(|p, q| p.len().cmp(&q.len()).then_with(|| q.cmp(p)));
        self.branch = match top {
            Some(h) => (0..=h.len()).map(|l| h[..l].to_vec()).collect(),
            None => Vec::new(),
        };
    }

    /// Elements on the branch, increasing.
    pub fn branch_elements(&self) -> Vec<usize> {
        let occupied = self.occupied();
        let mut out: Vec<usize> = self
            .branch
            .iter()
            .filter_map(|h| occupied.get(h.as_slice()).copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Both assignment conditions, checked against assignment order.
    pub fn check_invariants(&self) -> Vec<InvariantViolation> {
        let mut out = Vec::new();
        let mut seen: BTreeMap<&[usize], usize> = BTreeMap::new();
        for (b, h) in &self.assignment {
            for len in 0..h.len() {
                if !seen.contains_key(&h[..len]) {
                    out.push(InvariantViolation::OrphanNode {
                        node: h.clone(),
                        element: *b,
                        missing: h[..len].to_vec(),
                    });
                    break;
                }
            }
            if let Some(&first) = seen.get(h.as_slice()) {
                out.push(InvariantViolation::SharedNode {
                    node: h.clone(),
                    first,
                    second: *b,
                });
            } else {
                seen.insert(h, *b);
            }
        }
        out
    }

    /// Indented listing; branch nodes are starred.
    pub fn render(&self) -> String {
        let occupied = self.occupied();
        let mut out = String::new();
        for (h, b) in &occupied {
            let mark = if self.branch.iter().any(|n| n.as_slice() == *h) {
                "*"
            } else {
                " "
            };
            let seq: Vec<String> = h.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}{mark}<{}> {b}", "  ".repeat(h.len()), seq.join(","));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct BasicModuleOutput {
    pub tree: AssignmentTree,
    pub b_prime: Vec<usize>,
}

/// Assigns the elements of `b` in increasing order and keeps those on the
/// chosen branch.
pub fn basic_module(b: &[usize], fam: &ColoringFamily) -> Result<BasicModuleOutput, RamseyError> {
    fam.validate()?;
    if b.is_empty() {
        return Err(RamseyError::EmptySet);
    }
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut tree = AssignmentTree::new(fam.k());
    for &x in &sorted {
        tree.insert(x, fam)?;
    }
    tree.choose_branch();
    Ok(BasicModuleOutput {
        b_prime: tree.branch_elements(),
        tree,
    })
}

/// For each `i`, `F_i` is constant on the branch elements sitting at depth
/// greater than `i`.
pub fn tail_constancy_holds(fam: &ColoringFamily, tree: &AssignmentTree) -> bool {
    let on_branch: Vec<(usize, &Vec<usize>)> = tree
        .assignment
        .iter()
        .filter(|(_, h)| tree.branch.contains(h))
        .map(|(b, h)| (*b, h))
        .collect();
    (0..fam.k()).all(|i| {
        let mut values = on_branch
            .iter()
            .filter(|(_, h)| h.len() > i)
            .map(|(b, _)| fam.tables[i][*b]);
        match values.next() {
            None => true,
            Some(v) => values.all(|w| w == v),
        }
    })
}

/// Nested sets `B_0 = K ⊇ B_1 ⊇ ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct LevelSequence {
    pub k: usize,
    pub levels: Vec<Vec<usize>>,
}

impl LevelSequence {
    pub fn trivial(k: usize) -> Self {
        LevelSequence {
            k,
            levels: vec![(0..k).collect()],
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, m: usize) -> Result<&[usize], RamseyError> {
        self.levels
            .get(m)
            .map(Vec::as_slice)
            .ok_or(RamseyError::NoSuchLevel {
                level: m,
                depth: self.depth(),
            })
    }

    pub fn validate(&self) -> Result<(), RamseyError> {
        if self.k < 2 {
            return Err(RamseyError::ScaleTooSmall(self.k));
        }
        let full: Vec<usize> = (0..self.k).collect();
        if self.levels.first() != Some(&full) {
            return Err(RamseyError::MalformedTree("level 0 must be 0..K".into()));
        }
        for (m, pair) in self.levels.windows(2).enumerate() {
            if pair[1].windows(2).any(|w| w[0] >= w[1]) {
                return Err(RamseyError::NotIncreasing(pair[1].clone()));
            }
            if let Some(&x) = pair[1].iter().find(|x| !pair[0].contains(x)) {
                return Err(RamseyError::MalformedTree(format!(
                    "level {} contains {x}, which level {m} lacks",
                    m + 1
                )));
            }
        }
        Ok(())
    }
}

/// Optional thinning of each basic-module output: keep a greedy
/// `G`-spread-apart subsequence, with `G` the pointwise maximum of the
/// functions listed up to that stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Thinning {
    pub functions: Vec<Vec<usize>>,
}

impl Thinning {
    fn apply(&self, stage: usize, b: &[usize]) -> Vec<usize> {
        let k = match self.functions.first() {
            Some(f) => f.len(),
            None => return b.to_vec(),
        };
        let mut g = vec![0usize; k];
        for f in self.functions.iter().take(stage + 1) {
            for (x, &v) in g.iter_mut().zip(f) {
                *x = (*x).max(v);
            }
        }
        let mut out: Vec<usize> = Vec::new();
        for &x in b {
            let bound = out.last().map_or(g[0], |&p| g[p]);
            if x > bound {
                out.push(x);
            }
        }
        out
    }
}

/// `B_0 = 0..K` and `B_{n+1}` the basic-module output on `B_n` with the
/// `n`-th family.
pub fn length_construction(
    k: usize,
    families: &[ColoringFamily],
    thinning: Option<&Thinning>,
) -> Result<LevelSequence, RamseyError> {
    if k < 2 {
        return Err(RamseyError::ScaleTooSmall(k));
    }
    let mut levels = vec![(0..k).collect::<Vec<usize>>()];
    for (n, fam) in families.iter().enumerate() {
        if fam.k() != k {
            return Err(RamseyError::Length {
                expected: k,
                found: fam.k(),
            });
        }
        let mut next = basic_module(levels.last().expect("level 0"), fam)?.b_prime;
        if let Some(t) = thinning {
            next = t.apply(n, &next);
        }
        if next.is_empty() {
            return Err(RamseyError::EmptyLevel(n + 1));
        }
        levels.push(next);
    }
    Ok(LevelSequence { k, levels })
}
