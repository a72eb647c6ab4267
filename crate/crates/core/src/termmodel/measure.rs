//! Measure-one questions, decided by partitioning an indicator coloring.

use serde::{Deserialize, Serialize};

use super::{Compiled, FilterTriple, Indexed, SupportedFunction, Target, TermError};
use crate::ramsey::{partition_find, Coloring, LevelSequence, PartitionOutcome, Truncation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    False,
    Undecided,
}

impl Truth {
    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Undecided => Truth::Undecided,
        }
    }
}

/// A verdict and, when decided, a set `A_{s,m,G}` on which the indicator
/// is constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Decision {
    pub truth: Truth,
    pub triple: Option<FilterTriple>,
}

impl Decision {
    fn undecided() -> Self {
        Decision {
            truth: Truth::Undecided,
            triple: None,
        }
    }
}

/// Merged sorted support of several functions.
pub(crate) fn merged_support<'a>(fs: impl IntoIterator<Item = &'a Compiled>) -> Vec<i64> {
    let mut s: Vec<i64> = fs
        .into_iter()
        .flat_map(|f| f.support.iter().copied())
        .collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Decides whether `{x : pred(x[s])}` has measure one, where the predicate
/// sees a lookup from coordinates in `s` to values.
pub(crate) fn decide(
    s: &[i64],
    levels: &LevelSequence,
    trunc: Truncation,
    mut pred: impl FnMut(&dyn Fn(i64) -> usize) -> bool,
) -> Result<Decision, TermError> {
    let k = levels.k;
    let pos = |c: i64| {
        s.binary_search(&c)
            .expect("coordinate inside merged support")
    };
    if s.is_empty() {
        let truth = if pred(&|_| 0) {
            Truth::True
        } else {
            Truth::False
        };
        return Ok(Decision {
            truth,
            triple: Some(FilterTriple {
                s: Vec::new(),
                m: 0,
                g: vec![0; k],
            }),
        });
    }
    let col = Coloring::from_fn(k, s.len(), 2, |t| usize::from(pred(&|c| t[pos(c)])))?;
    Ok(match partition_find(&col, levels, trunc)? {
        PartitionOutcome::Certified(cert) => Decision {
            truth: if cert.eta == 1 {
                Truth::True
            } else {
                Truth::False
            },
            triple: Some(FilterTriple {
                s: s.to_vec(),
                m: cert.m,
                g: cert.g,
            }),
        },
        PartitionOutcome::Insufficient => Decision::undecided(),
    })
}

fn compile_all(
    fs: &[&SupportedFunction],
    target: &Indexed,
    k: usize,
) -> Result<Vec<Compiled>, TermError> {
    fs.iter().map(|f| f.compile(target, k)).collect()
}

/// Whether `f(x) = g(x)` on a measure-one set.
pub fn equiv(
    f: &SupportedFunction,
    g: &SupportedFunction,
    target: &Target,
    levels: &LevelSequence,
    trunc: Truncation,
) -> Result<Decision, TermError> {
    relation_holds("=", &[f, g], target, levels, trunc)
}

/// Whether `R(f_1(x), ..., f_n(x))` holds on a measure-one set.
pub fn relation_holds(
    relation: &str,
    args: &[&SupportedFunction],
    target: &Target,
    levels: &LevelSequence,
    trunc: Truncation,
) -> Result<Decision, TermError> {
    let t = target.index()?;
    let fs = compile_all(args, &t, levels.k)?;
    let s = merged_support(&fs);
    // Surface arity and name errors before the search.
    t.holds(relation, &vec![0; fs.len()]).or_else(|e| match e {
        TermError::UnknownRelation(_) | TermError::Arity { .. } => Err(e),
        _ => Ok(false),
    })?;
    decide(&s, levels, trunc, |x| {
        let vals: Vec<usize> = fs.iter().map(|f| f.at(x)).collect();
        t.holds(relation, &vals).unwrap_or(false)
    })
}

/// Boolean combinations of atomic relations between indexed functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum TermFormula {
    Atom { relation: String, args: Vec<usize> },
    Not { arg: Box<TermFormula> },
    And { args: Vec<TermFormula> },
    Or { args: Vec<TermFormula> },
}

impl TermFormula {
    fn functions(&self, out: &mut Vec<usize>) {
        match self {
            TermFormula::Atom { args, .. } => out.extend(args),
            TermFormula::Not { arg } => arg.functions(out),
            TermFormula::And { args } | TermFormula::Or { args } => {
                args.iter().for_each(|a| a.functions(out))
            }
        }
    }

    fn eval(&self, t: &Indexed, vals: &[usize]) -> bool {
        match self {
            TermFormula::Atom { relation, args } => {
                let v: Vec<usize> = args.iter().map(|&a| vals[a]).collect();
                t.holds(relation, &v).unwrap_or(false)
            }
            TermFormula::Not { arg } => !arg.eval(t, vals),
            TermFormula::And { args } => args.iter().all(|a| a.eval(t, vals)),
            TermFormula::Or { args } => args.iter().any(|a| a.eval(t, vals)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct LosReport {
    /// Atoms decided separately, combined with three-valued logic.
    pub recursive: Decision,
    /// The whole formula decided as one indicator.
    pub direct: Decision,
    /// Some point lies in both certified sets.
    pub overlap: bool,
    /// `Some` when both are decided and the certified sets meet.
    pub agree: Option<bool>,
}

fn combine_and(parts: Vec<Decision>, want: Truth) -> Decision {
    // `want` is the value that short-circuits: False for and, True for or.
    if let Some(d) = parts.iter().find(|d| d.truth == want) {
        return d.clone();
    }
    if parts.iter().any(|d| d.truth == Truth::Undecided) {
        return Decision::undecided();
    }
    let mut triple: Option<FilterTriple> = None;
    for d in &parts {
        let t = d.triple.as_ref().expect("decided parts carry a triple");
        triple = Some(match triple {
            None => t.clone(),
            Some(acc) => acc.combine(t),
        });
    }
    Decision {
        truth: want.not(),
        triple,
    }
}

fn recursive(
    phi: &TermFormula,
    fs: &[&SupportedFunction],
    target: &Target,
    levels: &LevelSequence,
    trunc: Truncation,
) -> Result<Decision, TermError> {
    Ok(match phi {
        TermFormula::Atom { relation, args } => {
            let a: Vec<&SupportedFunction> = args.iter().map(|&i| fs[i]).collect();
            relation_holds(relation, &a, target, levels, trunc)?
        }
        TermFormula::Not { arg } => {
            let d = recursive(arg, fs, target, levels, trunc)?;
            Decision {
                truth: d.truth.not(),
                triple: d.triple,
            }
        }
        TermFormula::And { args } => combine_and(
            args.iter()
                .map(|a| recursive(a, fs, target, levels, trunc))
                .collect::<Result<_, _>>()?,
            Truth::False,
        ),
        TermFormula::Or { args } => combine_and(
            args.iter()
                .map(|a| recursive(a, fs, target, levels, trunc))
                .collect::<Result<_, _>>()?,
            Truth::True,
        ),
    })
}

/// Whether some point of `A_{s,m,G}` exists, i.e. some `G`-spread
/// increasing `|s|`-tuple from `B_m`.
pub fn nonempty_triple(t: &FilterTriple, levels: &LevelSequence) -> Result<bool, TermError> {
    fn go(set: &[usize], g: &[usize], prev: Option<usize>, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        let bound = g[prev.unwrap_or(0)];
        set.iter()
            .filter(|&&a| a > bound && prev.is_none_or(|p| a > p))
            .any(|&a| go(set, g, Some(a), left - 1))
    }
    let set = levels.level(t.m)?;
    Ok(go(set, &t.g, None, t.s.len()))
}

/// Compares the atom-by-atom verdict with the verdict for the whole
/// formula.
pub fn los_check(
    phi: &TermFormula,
    fs: &[&SupportedFunction],
    target: &Target,
    levels: &LevelSequence,
    trunc: Truncation,
) -> Result<LosReport, TermError> {
    let mut used = Vec::new();
    phi.functions(&mut used);
    if let Some(&bad) = used.iter().find(|&&i| i >= fs.len()) {
        return Err(TermError::MissingEntry(format!("function #{bad}")));
    }
    let rec = recursive(phi, fs, target, levels, trunc)?;
    let t = target.index()?;
    let compiled = compile_all(fs, &t, levels.k)?;
    let s = merged_support(used.iter().map(|&i| &compiled[i]));
    let direct = decide(&s, levels, trunc, |x| {
        let vals: Vec<usize> = compiled
            .iter()
            .map(|f| {
                if f.support.iter().all(|c| s.contains(c)) {
                    f.at(x)
                } else {
                    0
                }
            })
            .collect();
        phi.eval(&t, &vals)
    })?;
    let overlap = match (&rec.triple, &direct.triple) {
        (Some(a), Some(b)) => nonempty_triple(&a.combine(b), levels)?,
        _ => false,
    };
    let agree = (overlap && rec.truth != Truth::Undecided && direct.truth != Truth::Undecided)
        .then(|| rec.truth == direct.truth);
    Ok(LosReport {
        recursive: rec,
        direct,
        overlap,
        agree,
    })
}
