use serde::{Deserialize, Serialize};

use super::QModel;

/// Distinct sets have distinct members.
pub const EXTENSIONALITY_SENTENCE: &str =
    "forall a. forall b. S(a) and S(b) and not (a = b) -> exists c. not (c in a <-> c in b)";
/// Only sets have members.
pub const SETS_ONLY_SENTENCE: &str = "forall x. forall y. x in y -> S(y)";
/// Every pair exists, is unique, and determines its coordinates.
pub const PAIRING_SENTENCE: &str = "(forall a. forall b. exists c. P(a, b, c) and (forall d. P(a, b, d) -> d = c)) and (forall a. forall b. forall c. forall d. forall e. P(a, b, e) and P(c, d, e) -> a = c and b = d)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    SameExtension {
        a: String,
        b: String,
    },
    MemberOfNonSet {
        member: String,
        non_set: String,
    },
    MissingPair {
        a: String,
        b: String,
    },
    MultiplePairs {
        a: String,
        b: String,
        witnesses: Vec<String>,
    },
    PairNotInjective {
        pair: String,
        first: (String, String),
        second: (String, String),
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct AuditReport {
    pub axiom: String,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    fn new(axiom: &str, violations: Vec<Violation>) -> Self {
        AuditReport {
            axiom: axiom.to_string(),
            pass: violations.is_empty(),
            violations,
        }
    }

    /// The report with missing-pair cells dropped, i.e. restricted to the
    /// pairs the base can represent.
    pub fn ignoring_missing_pairs(&self) -> Self {
        let kept = self
            .violations
            .iter()
            .filter(|v| !matches!(v, Violation::MissingPair { .. }))
            .cloned()
            .collect();
        AuditReport::new(&self.axiom, kept)
    }
}

pub fn audit_extensionality(q: &QModel) -> AuditReport {
    let b = q.base();
    let order = b.lex_order();
    let name = |x: usize| b.name(x).to_string();
    let mut violations = Vec::new();
    for (k, &a) in order.iter().enumerate() {
        for &c in &order[k + 1..] {
            if q.is_set(a) && q.is_set(c) && q.extension(a) == q.extension(c) {
                violations.push(Violation::SameExtension {
                    a: name(a),
                    b: name(c),
                });
            }
        }
    }
    // Unreachable by construction, kept as a check of the derivation.
    for &y in &order {
        if q.is_set(y) {
            continue;
        }
        for &x in &order {
            if q.member(x, y) {
                violations.push(Violation::MemberOfNonSet {
                    member: name(x),
                    non_set: name(y),
                });
            }
        }
    }
    AuditReport::new("extensionality", violations)
}

pub fn audit_pairing(q: &QModel) -> AuditReport {
    let b = q.base();
    let order = b.lex_order();
    let name = |x: usize| b.name(x).to_string();
    let mut violations = Vec::new();
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; q.len()];
    for &x in &order {
        for &y in &order {
            let zs = q.pair_nodes(x, y);
            match zs.len() {
                0 => violations.push(Violation::MissingPair {
                    a: name(x),
                    b: name(y),
                }),
                1 => {}
                _ => violations.push(Violation::MultiplePairs {
                    a: name(x),
                    b: name(y),
                    witnesses: zs.iter().map(|&z| name(z)).collect(),
                }),
            }
            for &z in zs {
                match owner[z] {
                    Some((u, v)) => violations.push(Violation::PairNotInjective {
                        pair: name(z),
                        first: (name(u), name(v)),
                        second: (name(x), name(y)),
                    }),
                    None => owner[z] = Some((x, y)),
                }
            }
        }
    }
    AuditReport::new("pairing", violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmodel::{build_q, v3_identity, BaseStructure};

    #[test]
    fn v3_is_extensional() {
        let q = build_q(&v3_identity()).unwrap();
        assert!(audit_extensionality(&q).pass);
    }

    #[test]
    fn two_empty_sets_fail() {
        let mut s = BaseStructure::with_identity(["e", "f"], Vec::<(String, String)>::new());
        s.levels.push(s.nodes.clone());
        let r = audit_extensionality(&build_q(&s).unwrap());
        assert!(!r.pass);
        assert_eq!(
            r.violations,
            vec![Violation::SameExtension {
                a: "e".into(),
                b: "f".into()
            }]
        );
    }

    #[test]
    fn urelements_pass_vacuously() {
        // u and w each have a member outside level 1, so neither is a set.
        let mut s = BaseStructure::with_identity(["o", "u", "w"], [("o", "u"), ("o", "w")]);
        s.levels.push(vec![]);
        let q = build_q(&s).unwrap();
        let r = audit_extensionality(&q);
        assert_eq!(r.violations.len(), 0, "{r:?}");
    }

    #[test]
    fn v3_pairing_cells() {
        let r = audit_pairing(&build_q(&v3_identity()).unwrap());
        assert!(!r.pass);
        assert!(r.violations.contains(&Violation::MissingPair {
            a: "{}".into(),
            b: "{{}}".into()
        }));
        assert!(!r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MissingPair { a, b } if a == "{}" && b == "{}")));
        assert!(r.ignoring_missing_pairs().pass);
    }

    #[test]
    fn single_node_has_no_pairs() {
        let mut s = BaseStructure::with_identity(["e"], Vec::<(String, String)>::new());
        s.levels.push(s.nodes.clone());
        let r = audit_pairing(&build_q(&s).unwrap());
        assert!(!r.pass);
    }
}
