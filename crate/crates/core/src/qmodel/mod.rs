//! The model `Q` built from a base membership structure.
//!
//! A node `x` is a set when all its base members lie in `levels[1]`, and
//! `x ∈_Q y` holds when `y` is a set and `x ∈ j(y)` in the base. `P(x, y, z)`
//! holds when `z` is the Kuratowski pair `{{x}, {x, y}}` of the base.

mod audit;
mod base;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::formulae::{stratify, Formula, StratFailure, ABSTRACTION_VAR};

pub use audit::{
    audit_extensionality, audit_pairing, AuditReport, Violation, EXTENSIONALITY_SENTENCE,
    PAIRING_SENTENCE, SETS_ONLY_SENTENCE,
};
pub use base::{Base, BaseStructure, JMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("node {0:?} listed twice")]
    DuplicateNode(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("level 0 must contain every node, {0:?} is missing")]
    LevelZeroIncomplete(String),
    #[error("level {level} is not included in level {}: {node:?}", level - 1)]
    LevelsNotNested { level: usize, node: String },
    #[error("j is undefined at {0:?}")]
    JUndefined(String),
    #[error("j is not injective: {first:?} and {second:?} have the same image")]
    JNotInjective { first: String, second: String },
    #[error("j does not preserve the edge {member:?} -> {set:?}")]
    JBreaksEdge { member: String, set: String },
    #[error("j does not reflect edges: images of {member:?} -> {set:?} are joined")]
    JCreatesEdge { member: String, set: String },
    #[error("j moves {node:?} out of level {level}")]
    JLeavesLevel { level: usize, node: String },
    #[error("the construction needs level {0}")]
    MissingLevel(usize),
    #[error("variable {0:?} is unbound")]
    Unbound(String),
    #[error("formula is not stratified: {0}")]
    Unstratified(StratFailure),
    #[error("{0:?} is not fixed by j")]
    NotFixed(String),
}

/// The derived structure. Immutable once built.
#[derive(Debug, Clone)]
pub struct QModel {
    base: Base,
    setness: Vec<bool>,
    member: Vec<Vec<bool>>,
    /// `pairs_of[(x, y)]` lists every `z` with `P(x, y, z)`.
    pairs_of: BTreeMap<(usize, usize), Vec<usize>>,
}

/// Label-level view of a [`QModel`], for printing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, schemars::JsonSchema)]
pub struct QSummary {
    pub domain: Vec<String>,
    pub sets: Vec<String>,
    pub membership: Vec<(String, String)>,
    pub pairs: Vec<(String, String, String)>,
}

pub fn build_q(structure: &BaseStructure) -> Result<QModel, QError> {
    let base = structure.index()?;
    let level1 = base.levels.get(1).ok_or(QError::MissingLevel(1))?.clone();
    let n = base.len();
    let setness: Vec<bool> = (0..n)
        .map(|x| base.ext[x].iter().all(|&m| level1[m]))
        .collect();
    let member = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| setness[y] && base.adj[x][base.j[y]])
                .collect()
        })
        .collect();
    let pairs_of = kuratowski_pairs(&base);
    Ok(QModel {
        base,
        setness,
        member,
        pairs_of,
    })
}

fn kuratowski_pairs(base: &Base) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for z in 0..base.len() {
        let m = &base.ext[z];
        let mut found = BTreeSet::new();
        match *m.as_slice() {
            [a] => {
                if let &[x] = base.ext[a].as_slice() {
                    found.insert((x, x));
                }
            }
            [a, b] => {
                for (s, d) in [(a, b), (b, a)] {
                    if let (&[x], &[p, q]) = (base.ext[s].as_slice(), base.ext[d].as_slice()) {
                        if p == x {
                            found.insert((x, q));
                        } else if q == x {
                            found.insert((x, p));
                        }
                    }
                }
            }
            _ => {}
        }
        for key in found {
            out.entry(key).or_default().push(z);
        }
    }
    out
}

impl QModel {
    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn is_set(&self, x: usize) -> bool {
        self.setness[x]
    }

    pub fn member(&self, x: usize, y: usize) -> bool {
        self.member[x][y]
    }

    pub fn pair_nodes(&self, x: usize, y: usize) -> &[usize] {
        self.pairs_of.get(&(x, y)).map_or(&[], Vec::as_slice)
    }

    pub fn is_pair(&self, x: usize, y: usize, z: usize) -> bool {
        self.pair_nodes(x, y).contains(&z)
    }

    /// The `∈_Q`-extension of `y`, ascending by index.
    pub fn extension(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.member[x][y]).collect()
    }

    /// Pair nodes for the labels `a`, `b`.
    pub fn pair_cell(&self, a: &str, b: &str) -> Result<Vec<String>, QError> {
        let (x, y) = (self.base.node(a)?, self.base.node(b)?);
        Ok(self.labels(self.pair_nodes(x, y)))
    }

    fn labels(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.base.names[x].clone()).collect()
    }

    pub fn summary(&self) -> QSummary {
        let order = self.base.lex_order();
        let name = |x: usize| self.base.names[x].clone();
        let mut membership = Vec::new();
        for &y in &order {
            for &x in &order {
                if self.member[x][y] {
                    membership.push((name(x), name(y)));
                }
            }
        }
        let mut pairs: Vec<(String, String, String)> = self
            .pairs_of
            .iter()
            .flat_map(|(&(x, y), zs)| zs.iter().map(move |&z| (name(x), name(y), name(z))))
            .collect();
        pairs.sort();
        QSummary {
            domain: order.iter().map(|&x| name(x)).collect(),
            sets: order
                .iter()
                .filter(|&&x| self.setness[x])
                .map(|&x| name(x))
                .collect(),
            membership,
            pairs,
        }
    }

    /// Satisfaction of `phi` with the free variables bound by `env`.
    pub fn eval(&self, phi: &Formula, env: &BTreeMap<String, String>) -> Result<bool, QError> {
        let mut scope: HashMap<String, Vec<usize>> = HashMap::new();
        for (v, node) in env {
            scope
                .entry(v.clone())
                .or_default()
                .push(self.base.node(node)?);
        }
        if let Some(v) = phi.free_vars().into_iter().find(|v| !scope.contains_key(v)) {
            return Err(QError::Unbound(v));
        }
        Ok(self.sat(phi, &mut scope))
    }

    fn sat(&self, phi: &Formula, scope: &mut HashMap<String, Vec<usize>>) -> bool {
        let val = |v: &String| *scope[v].last().expect("bound variable");
        match phi {
            Formula::Eq(a, b) => val(a) == val(b),
            Formula::In(a, b) => self.member[val(a)][val(b)],
            Formula::IsSet(a) => self.setness[val(a)],
            Formula::Pair(a, b, c) => self.is_pair(val(a), val(b), val(c)),
            Formula::Not(f) => !self.sat(f, scope),
            Formula::And(f, g) => self.sat(f, scope) && self.sat(g, scope),
            Formula::Or(f, g) => self.sat(f, scope) || self.sat(g, scope),
            Formula::Implies(f, g) => !self.sat(f, scope) || self.sat(g, scope),
            Formula::Iff(f, g) => self.sat(f, scope) == self.sat(g, scope),
            Formula::Forall(v, body) => self.quantify(v, body, scope, true),
            Formula::Exists(v, body) => self.quantify(v, body, scope, false),
        }
    }

    fn quantify(
        &self,
        v: &str,
        body: &Formula,
        scope: &mut HashMap<String, Vec<usize>>,
        universal: bool,
    ) -> bool {
        let mut result = universal;
        for x in 0..self.len() {
            scope.entry(v.to_string()).or_default().push(x);
            let holds = self.sat(body, scope);
            scope.get_mut(v).expect("just pushed").pop();
            if holds != universal {
                result = !universal;
                break;
            }
        }
        if scope.get(v).is_some_and(Vec::is_empty) {
            scope.remove(v);
        }
        result
    }
}

pub fn eval_formula(
    q: &QModel,
    phi: &Formula,
    env: &BTreeMap<String, String>,
) -> Result<bool, QError> {
    q.eval(phi, env)
}

/// First set-node, in label order, whose `∈_Q`-extension is
/// `{x : phi(v0 := x)}`.
pub fn audit_comprehension(
    q: &QModel,
    phi: &Formula,
    env: &BTreeMap<String, String>,
) -> Result<Option<String>, QError> {
    stratify(phi).map_err(QError::Unstratified)?;
    if let Some(v) = phi
        .free_vars()
        .into_iter()
        .find(|v| v != ABSTRACTION_VAR && !env.contains_key(v))
    {
        return Err(QError::Unbound(v));
    }
    let mut env = env.clone();
    let mut wanted = vec![false; q.len()];
    for (x, slot) in wanted.iter_mut().enumerate() {
        env.insert(ABSTRACTION_VAR.to_string(), q.base.names[x].clone());
        *slot = q.eval(phi, &env)?;
    }
    Ok(q.base
        .lex_order()
        .into_iter()
        .find(|&y| q.setness[y] && (0..q.len()).all(|x| q.member[x][y] == wanted[x]))
        .map(|y| q.base.names[y].clone()))
}

/// Whether fixing a chain position forces every earlier position fixed.
pub fn criterion1_check(structure: &BaseStructure, chain: &[String]) -> Result<bool, QError> {
    let base = structure.index()?;
    let idx: Vec<usize> = chain
        .iter()
        .map(|c| base.node(c))
        .collect::<Result<_, _>>()?;
    // Equivalent: once some position is moved, no later position is fixed.
    let mut moved_seen = false;
    for &x in &idx {
        if base.is_fixed(x) && moved_seen {
            return Ok(false);
        }
        moved_seen |= !base.is_fixed(x);
    }
    Ok(true)
}

/// First node, in label order, whose base members among the fixed points
/// of `j` are exactly `target`.
pub fn coded_subsets_report(
    structure: &BaseStructure,
    target: &[String],
) -> Result<Option<String>, QError> {
    let base = structure.index()?;
    let mut wanted = vec![false; base.len()];
    for t in target {
        let x = base.node(t)?;
        if !base.is_fixed(x) {
            return Err(QError::NotFixed(t.clone()));
        }
        wanted[x] = true;
    }
    let fixed: Vec<usize> = (0..base.len()).filter(|&x| base.is_fixed(x)).collect();
    Ok(base
        .lex_order()
        .into_iter()
        .find(|&w| fixed.iter().all(|&x| base.adj[x][w] == wanted[x]))
        .map(|w| base.names[w].clone()))
}

/// The four-node `V_3` with levels `V_3 ⊇ V_2 ⊇ V_1` and `j` the identity.
pub fn v3_identity() -> BaseStructure {
    let (e, one, s1, two) = ("{}", "{{}}", "{{{}}}", "{{},{{}}}");
    let mut b = BaseStructure::with_identity(
        [e, one, s1, two],
        [(e, one), (one, s1), (e, two), (one, two)],
    );
    b.levels = vec![
        b.nodes.clone(),
        vec![e.to_string(), one.to_string()],
        vec![e.to_string()],
    ];
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulae::parse_formula;

    fn env(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    fn three_cycle() -> BaseStructure {
        BaseStructure {
            nodes: vec!["a".into(), "b".into(), "c".into()],
            edges: vec![
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("c".into(), "a".into()),
            ],
            levels: vec![],
            j: env(&[("a", "b"), ("b", "c"), ("c", "a")]),
            mode: JMode::Automorphism,
        }
    }

    #[test]
    fn v3_membership_matches_base() {
        let q = build_q(&v3_identity()).unwrap();
        let b = q.base();
        for x in 0..q.len() {
            assert!(q.is_set(x));
            for y in 0..q.len() {
                assert_eq!(q.member(x, y), b.adj[x][y]);
            }
        }
    }

    #[test]
    fn three_cycle_membership_goes_through_j() {
        let mut s = three_cycle();
        s.levels = vec![s.nodes.clone(), s.nodes.clone()];
        let q = build_q(&s).unwrap();
        let b = q.base();
        let (a, bb, c) = (
            b.node("a").unwrap(),
            b.node("b").unwrap(),
            b.node("c").unwrap(),
        );
        // j(a) = b and a ∈ b, so a ∈_Q a.
        assert!(q.member(a, a));
        assert!(q.member(bb, bb));
        assert!(!q.member(a, c));
    }

    #[test]
    fn single_level_is_rejected_by_build() {
        assert_eq!(
            build_q(&three_cycle()).unwrap_err(),
            QError::MissingLevel(1)
        );
    }

    #[test]
    fn broken_edge_is_named() {
        let mut s = v3_identity();
        s.j.insert("{}".into(), "{{{}}}".into());
        s.j.insert("{{{}}}".into(), "{}".into());
        s.mode = JMode::Endomorphism;
        let err = s.index().unwrap_err();
        assert_eq!(
            err,
            QError::JBreaksEdge {
                member: "{}".into(),
                set: "{{}}".into()
            }
        );
    }

    #[test]
    fn level_errors() {
        let mut s = v3_identity();
        s.levels[2] = vec!["{{{}}}".into()];
        assert!(matches!(
            s.index(),
            Err(QError::LevelsNotNested { level: 2, .. })
        ));
        let mut s = v3_identity();
        s.levels[0].pop();
        assert!(matches!(s.index(), Err(QError::LevelZeroIncomplete(_))));
    }

    #[test]
    fn evaluation_examples() {
        let q = build_q(&v3_identity()).unwrap();
        let f = parse_formula("x in y").unwrap();
        assert!(q.eval(&f, &env(&[("x", "{}"), ("y", "{{}}")])).unwrap());
        let f = parse_formula("forall x. not (x in y)").unwrap();
        assert!(q.eval(&f, &env(&[("y", "{}")])).unwrap());
        let f = parse_formula("exists z. P(x, y, z)").unwrap();
        assert!(!q.eval(&f, &env(&[("x", "{}"), ("y", "{{}}")])).unwrap());
        assert!(q.eval(&f, &env(&[("x", "{}"), ("y", "{}")])).unwrap());
        assert_eq!(
            q.eval(&f, &env(&[("x", "{}")])).unwrap_err(),
            QError::Unbound("y".into())
        );
    }

    #[test]
    fn pair_of_empty_is_singleton_of_singleton() {
        let q = build_q(&v3_identity()).unwrap();
        assert_eq!(q.pair_cell("{}", "{}").unwrap(), vec!["{{{}}}".to_string()]);
    }

    #[test]
    fn comprehension_examples() {
        let q = build_q(&v3_identity()).unwrap();
        let no = BTreeMap::new();
        let all = parse_formula("v0 = v0").unwrap();
        assert_eq!(audit_comprehension(&q, &all, &no).unwrap(), None);
        let none = parse_formula("not (v0 = v0)").unwrap();
        assert_eq!(
            audit_comprehension(&q, &none, &no).unwrap(),
            Some("{}".into())
        );
        let inp = parse_formula("v0 in p").unwrap();
        assert_eq!(
            audit_comprehension(&q, &inp, &env(&[("p", "{{},{{}}}")])).unwrap(),
            Some("{{},{{}}}".into())
        );
        let russell = parse_formula("not (v0 in v0)").unwrap();
        assert!(matches!(
            audit_comprehension(&q, &russell, &no),
            Err(QError::Unstratified(_))
        ));
    }

    #[test]
    fn criterion1_examples() {
        let chain: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut s = BaseStructure::with_identity(["a", "b", "c"], Vec::<(String, String)>::new());
        assert!(criterion1_check(&s, &chain).unwrap());
        s.j = env(&[("a", "a"), ("b", "c"), ("c", "b")]);
        assert!(criterion1_check(&s, &chain).unwrap());
        let mut t =
            BaseStructure::with_identity(["a", "b", "c", "d"], Vec::<(String, String)>::new());
        t.j = env(&[("a", "a"), ("b", "d"), ("c", "c"), ("d", "b")]);
        assert!(!criterion1_check(&t, &chain).unwrap());
    }

    #[test]
    fn coded_subset_examples() {
        let s = v3_identity();
        assert_eq!(coded_subsets_report(&s, &[]).unwrap(), Some("{}".into()));
        assert_eq!(
            coded_subsets_report(&s, &["{}".into()]).unwrap(),
            Some("{{}}".into())
        );
        assert_eq!(coded_subsets_report(&s, &s.nodes.clone()).unwrap(), None);
        let mut moved = three_cycle();
        moved.levels = vec![];
        assert_eq!(
            coded_subsets_report(&moved, &["a".into()]).unwrap_err(),
            QError::NotFixed("a".into())
        );
    }
}
