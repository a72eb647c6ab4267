use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Formula;

/// Name of the abstraction variable in comprehension instances.
pub const ABSTRACTION_VAR: &str = "v0";

/// A type assignment witnessing that a formula is stratified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Stratification {
    /// Type of every variable of the alpha-renamed formula.
    pub assignment: BTreeMap<String, u32>,
}

/// A difference constraint `σ(to) = σ(from) + offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Constraint {
    pub from: String,
    pub to: String,
    pub offset: i64,
}

impl Constraint {
    fn new(from: &str, to: &str, offset: i64) -> Self {
        Constraint {
            from: from.to_string(),
            to: to.to_string(),
            offset,
        }
    }

    pub fn reversed(&self) -> Self {
        Constraint::new(&self.to, &self.from, -self.offset)
    }
}

/// Certificate that no stratification exists: a closed walk of constraints
/// whose offsets sum to a nonzero value.
///
/// Each step is oriented along the walk; a step may be the reversal of a
/// generated constraint, in which case its offset is negated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct StratFailure {
    pub cycle: Vec<Constraint>,
}

impl StratFailure {
    pub fn offset_sum(&self) -> i64 {
        self.cycle.iter().map(|c| c.offset).sum()
    }

    /// Whether consecutive steps chain up and the walk closes.
    pub fn is_closed_walk(&self) -> bool {
        let n = self.cycle.len();
        n > 0 && (0..n).all(|k| self.cycle[k].to == self.cycle[(k + 1) % n].from)
    }
}

impl fmt::Display for StratFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unstratifiable: ")?;
        for (k, c) in self.cycle.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {} ({:+})", c.from, c.to, c.offset)?;
        }
        write!(f, " sums to {}", self.offset_sum())
    }
}

impl std::error::Error for StratFailure {}

/// Renames binders apart.
///
/// A binder keeps its name unless that name is already free in the formula
/// or bound by an earlier binder; clashing binders become `name'k`, which
/// cannot collide with a parsed variable.
pub fn alpha_rename(phi: &Formula) -> Formula {
    let mut used: BTreeSet<String> = phi.free_vars();
    let mut counter = 0usize;
    let mut scope: Vec<(String, String)> = Vec::new();
    rename(phi, &mut used, &mut counter, &mut scope)
}

fn rename(
    phi: &Formula,
    used: &mut BTreeSet<String>,
    counter: &mut usize,
    scope: &mut Vec<(String, String)>,
) -> Formula {
    let look = |v: &String, scope: &Vec<(String, String)>| -> String {
        scope
            .iter()
            .rev()
            .find(|(old, _)| old == v)
            .map_or_else(|| v.clone(), |(_, new)| new.clone())
    };
    match phi {
        Formula::Eq(v, w) => Formula::Eq(look(v, scope), look(w, scope)),
        Formula::In(v, w) => Formula::In(look(v, scope), look(w, scope)),
        Formula::IsSet(v) => Formula::IsSet(look(v, scope)),
        Formula::Pair(u, v, w) => Formula::Pair(look(u, scope), look(v, scope), look(w, scope)),
        Formula::Not(a) => Formula::not(rename(a, used, counter, scope)),
        Formula::And(a, b) => {
            let a = rename(a, used, counter, scope);
            Formula::and(a, rename(b, used, counter, scope))
        }
        Formula::Or(a, b) => {
            let a = rename(a, used, counter, scope);
            Formula::or(a, rename(b, used, counter, scope))
        }
        Formula::Implies(a, b) => {
            let a = rename(a, used, counter, scope);
            Formula::implies(a, rename(b, used, counter, scope))
        }
        Formula::Iff(a, b) => {
            let a = rename(a, used, counter, scope);
            Formula::iff(a, rename(b, used, counter, scope))
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let fresh = if used.contains(v) {
                loop {
                    *counter += 1;
                    let cand = format!("{v}'{counter}");
                    if !used.contains(&cand) {
                        break cand;
                    }
                }
            } else {
                v.clone()
            };
            used.insert(fresh.clone());
            scope.push((v.clone(), fresh.clone()));
            let body = rename(body, used, counter, scope);
            scope.pop();
            if matches!(phi, Formula::Forall(..)) {
                Formula::forall(fresh, body)
            } else {
                Formula::exists(fresh, body)
            }
        }
    }
}

/// The stratification constraints generated by the atoms of `phi`, taken
/// as written (no renaming). `S(v)` generates nothing.
pub fn constraints(phi: &Formula) -> Vec<Constraint> {
    let mut out = Vec::new();
    gather(phi, &mut out);
    out
}

fn gather(phi: &Formula, out: &mut Vec<Constraint>) {
    match phi {
        Formula::Eq(v, w) => out.push(Constraint::new(v, w, 0)),
        Formula::In(v, w) => out.push(Constraint::new(v, w, 1)),
        Formula::IsSet(_) => {}
        Formula::Pair(u, v, w) => {
            out.push(Constraint::new(u, v, 0));
            out.push(Constraint::new(v, w, 0));
        }
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => gather(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            gather(a, out);
            gather(b, out);
        }
    }
}

/// Union-find over type variables where each node stores its type offset
/// relative to its parent.
struct OffsetUnionFind {
    parent: Vec<usize>,
    offset: Vec<i64>,
    size: Vec<usize>,
}

impl OffsetUnionFind {
    fn new(n: usize) -> Self {
        OffsetUnionFind {
            parent: (0..n).collect(),
            offset: vec![0; n],
            size: vec![1; n],
        }
    }

    /// Returns the root of `x` and `σ(x) - σ(root)`.
    fn find(&mut self, x: usize) -> (usize, i64) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, up) = self.find(p);
        self.offset[x] += up;
        self.parent[x] = root;
        (root, self.offset[x])
    }

    /// Records `σ(b) = σ(a) + d`. Returns `false` on contradiction.
    fn union(&mut self, a: usize, b: usize, d: i64) -> Result<bool, ()> {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return if pb - pa == d { Ok(false) } else { Err(()) };
        }
        // σ(rb) - σ(ra) = d + pa - pb
        let delta = d + pa - pb;
        if self.size[ra] >= self.size[rb] {
            self.parent[rb] = ra;
            self.offset[rb] = delta;
            self.size[ra] += self.size[rb];
        } else {
            self.parent[ra] = rb;
            self.offset[ra] = -delta;
            self.size[rb] += self.size[ra];
        }
        Ok(true)
    }
}

/// Decides stratifiability of `phi` after renaming its binders apart.
///
/// On success every variable of the renamed formula receives a type, each
/// connected group of variables normalized so that its least type is 0.
/// On failure the certificate is a closed walk through the generated
/// constraints with a nonzero offset sum.
pub fn stratify(phi: &Formula) -> Result<Stratification, StratFailure> {
    let renamed = alpha_rename(phi);
    let names: Vec<String> = renamed.all_vars().into_iter().collect();
    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(k, v)| (v.as_str(), k))
        .collect();
    let mut uf = OffsetUnionFind::new(names.len());
    // spanning forest of accepted constraints: (neighbour, constraint oriented away from here)
    let mut forest: Vec<Vec<(usize, Constraint)>> = vec![Vec::new(); names.len()];

    for c in constraints(&renamed) {
        let a = index[c.from.as_str()];
        let b = index[c.to.as_str()];
        match uf.union(a, b, c.offset) {
            Ok(true) => {
                forest[a].push((b, c.clone()));
                forest[b].push((a, c.reversed()));
            }
            Ok(false) => {}
            Err(()) => {
                let mut cycle = vec![c.clone()];
                cycle.extend(forest_path(&forest, b, a));
                return Err(StratFailure { cycle });
            }
        }
    }

    let mut types = vec![0i64; names.len()];
    let mut least: HashMap<usize, i64> = HashMap::new();
    for x in 0..names.len() {
        let (root, off) = uf.find(x);
        types[x] = off;
        let e = least.entry(root).or_insert(off);
        *e = (*e).min(off);
    }
    let assignment = names
        .iter()
        .enumerate()
        .map(|(x, v)| {
            let (root, _) = uf.find(x);
            (v.clone(), (types[x] - least[&root]) as u32)
        })
        .collect();
    Ok(Stratification { assignment })
}

/// Path from `from` to `to` in the constraint forest, steps oriented along it.
fn forest_path(forest: &[Vec<(usize, Constraint)>], from: usize, to: usize) -> Vec<Constraint> {
    if from == to {
        return Vec::new();
    }
    let mut prev: Vec<Option<(usize, Constraint)>> = vec![None; forest.len()];
    let mut seen = vec![false; forest.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for (y, c) in &forest[x] {
            if !seen[*y] {
                seen[*y] = true;
                prev[*y] = Some((x, c.clone()));
                queue.push_back(*y);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, c) = prev[cur]
            .clone()
            .expect("constraint endpoints share a component");
        path.push(c);
        cur = p;
    }
    path.reverse();
    path
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComprehensionError {
    #[error("formula is not stratified ({0})")]
    Unstratified(StratFailure),
    #[error("variable `{0}` clashes with the comprehension variable")]
    NameClash(String),
    #[error("free variable `{0}` is neither `v0` nor a parameter")]
    StrayFreeVariable(String),
    #[error("parameter `{0}` listed twice or equal to `v0`")]
    BadParameter(String),
}

/// Builds `∀p1…∀pn ∃v(n+1) ∀v0 (v0 ∈ v(n+1) ↔ phi)`.
///
/// The set variable is named `v{n+1}` where `n` is the number of
/// parameters; it must not occur in `phi` or among the parameters.
pub fn comprehension_axiom(
    phi: &Formula,
    params: &[String],
) -> Result<Formula, ComprehensionError> {
    stratify(phi).map_err(ComprehensionError::Unstratified)?;

    let mut seen = BTreeSet::new();
    for p in params {
        if p == ABSTRACTION_VAR || !seen.insert(p.as_str()) {
            return Err(ComprehensionError::BadParameter(p.clone()));
        }
    }
    for v in phi.free_vars() {
        if v != ABSTRACTION_VAR && !seen.contains(v.as_str()) {
            return Err(ComprehensionError::StrayFreeVariable(v));
        }
    }
    let set_var = format!("v{}", params.len() + 1);
    if phi.all_vars().contains(&set_var) || seen.contains(set_var.as_str()) {
        return Err(ComprehensionError::NameClash(set_var));
    }

    let matrix = Formula::forall(
        ABSTRACTION_VAR,
        Formula::iff(
            Formula::member(ABSTRACTION_VAR, set_var.clone()),
            phi.clone(),
        ),
    );
    let body = Formula::exists(set_var, matrix);
    Ok(params
        .iter()
        .rev()
        .fold(body, |acc, p| Formula::forall(p.clone(), acc)))
}
