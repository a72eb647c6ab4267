//! The five-predicate NFU language: syntax, parsing, stratification and
//! comprehension instances.
//!
//! Formulas are built from the atoms `v = w`, `v in w`, `S(v)` and
//! `P(u,v,w)` with the usual connectives and quantifiers. A formula is
//! stratified when its variables admit a type assignment `σ` with
//! `σ(v) = σ(w)` across `=` and `P`, and `σ(w) = σ(v) + 1` across `in`.

mod parse;
mod stratify;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse_formula, ParseError};
pub use stratify::{
    alpha_rename, comprehension_axiom, constraints, stratify, ComprehensionError, Constraint,
    StratFailure, Stratification, ABSTRACTION_VAR,
};

/// Abstract syntax of an NFU formula. Variables are plain identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(String, String),
    In(String, String),
    /// `S(v)`: `v` is a set.
    IsSet(String),
    /// `P(u,v,w)`: `w` is the ordered pair of `u` and `v`.
    Pair(String, String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn eq(v: impl Into<String>, w: impl Into<String>) -> Self {
        Formula::Eq(v.into(), w.into())
    }

    pub fn member(v: impl Into<String>, w: impl Into<String>) -> Self {
        Formula::In(v.into(), w.into())
    }

    pub fn is_set(v: impl Into<String>) -> Self {
        Formula::IsSet(v.into())
    }

    pub fn pair(u: impl Into<String>, v: impl Into<String>, w: impl Into<String>) -> Self {
        Formula::Pair(u.into(), v.into(), w.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Eq(v, w) | Formula::In(v, w) => {
                note(v, bound);
                note(w, bound);
            }
            Formula::IsSet(v) => note(v, bound),
            Formula::Pair(u, v, w) => {
                note(u, bound);
                note(v, bound);
                note(w, bound);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, free or bound (binders included).
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    fn visit_names(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Eq(v, w) | Formula::In(v, w) => {
                f(v);
                f(w);
            }
            Formula::IsSet(v) => f(v),
            Formula::Pair(u, v, w) => {
                f(u);
                f(v);
                f(w);
            }
            Formula::Not(a) => a.visit_names(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                f(v);
                body.visit_names(f);
            }
        }
    }

    /// Number of atomic subformulas.
    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::In(..) | Formula::IsSet(_) | Formula::Pair(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.atom_count(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.atom_count() + b.atom_count(),
        }
    }

    /// Binding strength used by the printer; larger binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            _ => 6,
        }
    }

    fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..)
        )
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Eq(v, w) => write!(f, "{v} = {w}"),
            Formula::In(v, w) => write!(f, "{v} in {w}"),
            Formula::IsSet(v) => write!(f, "S({v})"),
            Formula::Pair(u, v, w) => write!(f, "P({u},{v},{w})"),
            Formula::Not(a) => {
                write!(f, "not ")?;
                if matches!(**a, Formula::Eq(..) | Formula::In(..)) {
                    write!(f, "({a})")
                } else {
                    a.write_at(f, 5)
                }
            }
            Formula::And(a, b) => binary(f, a, "and", b, 4, 5),
            Formula::Or(a, b) => binary(f, a, "or", b, 3, 4),
            Formula::Implies(a, b) => binary(f, a, "->", b, 3, 2),
            Formula::Iff(a, b) => binary(f, a, "<->", b, 2, 2),
            Formula::Forall(v, body) => quantifier(f, "forall", v, body),
            Formula::Exists(v, body) => quantifier(f, "exists", v, body),
        }
    }
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    left_min: u8,
    right_min: u8,
) -> fmt::Result {
    a.write_at(f, left_min)?;
    write!(f, " {op} ")?;
    b.write_at(f, right_min)
}

fn quantifier(f: &mut fmt::Formatter<'_>, q: &str, v: &str, body: &Formula) -> fmt::Result {
    write!(f, "{q} {v}. ")?;
    if body.is_binary() {
        write!(f, "({body})")
    } else {
        body.write_at(f, 0)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_schema_shape() {
        let f = Formula::forall(
            "v1",
            Formula::exists(
                "v2",
                Formula::forall(
                    "v0",
                    Formula::iff(Formula::member("v0", "v2"), Formula::member("v0", "v1")),
                ),
            ),
        );
        assert_eq!(
            f.to_string(),
            "forall v1. exists v2. forall v0. (v0 in v2 <-> v0 in v1)"
        );
    }

    #[test]
    fn prints_negated_atom_with_parens() {
        let f = Formula::forall("x", Formula::not(Formula::member("x", "x")));
        assert_eq!(f.to_string(), "forall x. not (x in x)");
    }

    #[test]
    fn free_vars_respect_binders() {
        let f: Formula = "x in y and forall x. x in z".parse().unwrap();
        let free: Vec<_> = f.free_vars().into_iter().collect();
        assert_eq!(free, ["x", "y", "z"]);
        let f: Formula = "forall x. x in y".parse().unwrap();
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), ["y"]);
    }
}
