//! The membership relation `E` between set codes.
//!
//! `g1 E g2` holds when some injection `ψ` of the nodes of `g1` into those
//! of `g2` preserves and reflects edges, has a transitive range, and sends
//! the top of `g1` to a predecessor of the top of `g2`.

use serde::{Deserialize, Serialize};

use super::{collapse, Indexed, PointedGraph, SetCodeError};

/// Graphs with more nodes than this use the collapse criterion instead of
/// the embedding search.
pub const DEFAULT_EMBED_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum ERelMethod {
    EmbeddingSearch,
    CollapseMembership,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct ERelResult {
    pub holds: bool,
    pub method: ERelMethod,
}

pub fn e_rel(g1: &PointedGraph, g2: &PointedGraph) -> Result<bool, SetCodeError> {
    Ok(e_rel_with_cap(g1, g2, DEFAULT_EMBED_CAP)?.holds)
}

pub fn e_rel_with_cap(
    g1: &PointedGraph,
    g2: &PointedGraph,
    cap: usize,
) -> Result<ERelResult, SetCodeError> {
    let a = PreparedCode::new(g1)?;
    let b = PreparedCode::new(g2)?;
    if a.ix.n.max(b.ix.n) > cap {
        let holds = collapse(g2)?.contains(&collapse(g1)?);
        return Ok(ERelResult {
            holds,
            method: ERelMethod::CollapseMembership,
        });
    }
    Ok(ERelResult {
        holds: e_rel_prepared(&a, &b),
        method: ERelMethod::EmbeddingSearch,
    })
}

/// A validated code with its search order, for many `E` queries against
/// the same graphs.
#[derive(Debug, Clone)]
pub struct PreparedCode {
    ix: Indexed,
    order: Vec<usize>,
}

impl PreparedCode {
    pub fn new(g: &PointedGraph) -> Result<Self, SetCodeError> {
        let ix = g.valid_indexed()?;
        let order = ix.topological().expect("validated");
        Ok(PreparedCode { ix, order })
    }

    pub fn len(&self) -> usize {
        self.ix.n
    }

    pub fn is_empty(&self) -> bool {
        self.ix.n == 0
    }
}

/// The embedding search on prepared codes, with no size cap.
pub fn e_rel_prepared(g1: &PreparedCode, g2: &PreparedCode) -> bool {
    // The range sits strictly below the top of g2.
    if g1.ix.n >= g2.ix.n {
        return false;
    }
    let mut search = Search {
        a: &g1.ix,
        b: &g2.ix,
        order: &g1.order,
        image: vec![usize::MAX; g1.ix.n],
        used: vec![false; g2.ix.n],
    };
    search.extend(0)
}

struct Search<'a> {
    a: &'a Indexed,
    b: &'a Indexed,
    order: &'a [usize],
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Tries to map `order[step..]`, given that earlier nodes are mapped.
    fn extend(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            return true;
        }
        let x = self.order[step];
        for y in 0..self.b.n {
            if self.used[y] || !self.admissible(step, x, y) {
                continue;
            }
            self.image[x] = y;
            self.used[y] = true;
            if self.extend(step + 1) {
                return true;
            }
            self.used[y] = false;
            self.image[x] = usize::MAX;
        }
        false
    }

    fn admissible(&self, step: usize, x: usize, y: usize) -> bool {
        let (a, b) = (self.a, self.b);
        if a.adj[x][x] != b.adj[y][y] {
            return false;
        }
        for &u in &self.order[..step] {
            let v = self.image[u];
            if a.adj[u][x] != b.adj[v][y] || a.adj[x][u] != b.adj[y][v] {
                return false;
            }
        }
        // Predecessors of x are all mapped already. Transitivity of the range
        // forces every predecessor of y to be an image, and by reflection
        // it must be the image of a predecessor of x.
        if b.preds[y].len() != a.preds[x].len() {
            return false;
        }
        if b.preds[y].iter().any(|&w| !self.used[w]) {
            return false;
        }
        if x == a.top && !b.adj[y][b.top] {
            return false;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcode::ordinal_code;

    #[test]
    fn one_is_in_two() {
        assert!(e_rel(&ordinal_code(1).unwrap(), &ordinal_code(2).unwrap()).unwrap());
    }

    #[test]
    fn two_is_not_in_one() {
        assert!(!e_rel(&ordinal_code(2).unwrap(), &ordinal_code(1).unwrap()).unwrap());
    }

    #[test]
    fn nothing_is_its_own_member() {
        for n in 0..5 {
            let g = ordinal_code(n).unwrap();
            assert!(!e_rel(&g, &g).unwrap());
        }
    }

    #[test]
    fn cap_switches_method() {
        let r = e_rel_with_cap(&ordinal_code(1).unwrap(), &ordinal_code(3).unwrap(), 2).unwrap();
        assert_eq!(r.method, ERelMethod::CollapseMembership);
        assert!(r.holds);
        let r = e_rel_with_cap(&ordinal_code(1).unwrap(), &ordinal_code(3).unwrap(), 64).unwrap();
        assert_eq!(r.method, ERelMethod::EmbeddingSearch);
        assert!(r.holds);
    }
}
