use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{is_spread, ColoringFamily, LevelSequence, RamseyError};

/// Finite stand-ins for "a tail" and "some spread-apart tuple".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Truncation {
    /// A tail must hold at least this many defined values.
    pub min_tail: usize,
    /// A certificate must govern at least this many tuples.
    pub min_support: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            min_tail: 2,
            min_support: 2,
        }
    }
}

/// A coloring of increasing tuples given as a JSON table with keys such as
/// `"1,4"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct TupleTable {
    pub k: usize,
    pub arity: usize,
    pub gamma: usize,
    pub table: BTreeMap<String, usize>,
}

/// A possibly partial coloring of increasing `arity`-tuples from `0..k`
/// into `0..gamma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    k: usize,
    arity: usize,
    gamma: usize,
    values: HashMap<Vec<usize>, usize>,
}

pub(crate) fn parse_key(key: &str) -> Result<Vec<usize>, RamseyError> {
    if key.trim().is_empty() {
        return Ok(Vec::new());
    }
    key.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| RamseyError::BadKey(key.to_string()))
        })
        .collect()
}

pub(crate) fn format_key(t: &[usize]) -> String {
    t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Calls `f` on every increasing `n`-tuple drawn from the sorted `set`.
pub(crate) fn for_each_increasing(set: &[usize], n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(set: &[usize], n: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for idx in from..set.len() {
            if set.len() - idx < n - cur.len() {
                break;
            }
            cur.push(set[idx]);
            go(set, n, idx + 1, cur, f);
            cur.pop();
        }
    }
    go(set, n, 0, &mut Vec::with_capacity(n), f);
}

impl Coloring {
    /// The total coloring `t ↦ f(t)`.
    pub fn from_fn(
        k: usize,
        arity: usize,
        gamma: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self, RamseyError> {
        if k < 2 {
            return Err(RamseyError::ScaleTooSmall(k));
        }
        if arity == 0 {
            return Err(RamseyError::Arity {
                expected: 1,
                found: 0,
            });
        }
        let all: Vec<usize> = (0..k).collect();
        let mut values = HashMap::new();
        let mut bad = None;
        for_each_increasing(&all, arity, &mut |t| {
            let c = f(t);
            if c >= gamma && bad.is_none() {
                bad = Some((t.to_vec(), c));
            }
            values.insert(t.to_vec(), c);
        });
        if let Some((tuple, color)) = bad {
            return Err(RamseyError::ColorRange {
                tuple,
                color,
                gamma,
            });
        }
        Ok(Coloring {
            k,
            arity,
            gamma,
            values,
        })
    }

    pub fn from_table(t: &TupleTable) -> Result<Self, RamseyError> {
        let mut given = HashMap::new();
        for (key, &c) in &t.table {
            let tuple = parse_key(key)?;
            if tuple.len() != t.arity {
                return Err(RamseyError::Arity {
                    expected: t.arity,
                    found: tuple.len(),
                });
            }
            if tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(RamseyError::NotIncreasing(tuple));
            }
            if let Some(&x) = tuple.iter().find(|&&x| x >= t.k) {
                return Err(RamseyError::OutOfScale(x));
            }
            given.insert(tuple, c);
        }
        let mut missing = None;
        let col = Coloring::from_fn(t.k, t.arity, t.gamma, |tuple| match given.get(tuple) {
            Some(&c) => c,
            None => {
                missing.get_or_insert_with(|| tuple.to_vec());
                0
            }
        })?;
        match missing {
            Some(tuple) => Err(RamseyError::Undefined(tuple)),
            None => Ok(col),
        }
    }

    pub fn to_table(&self) -> TupleTable {
        TupleTable {
            k: self.k,
            arity: self.arity,
            gamma: self.gamma,
            table: self
                .values
                .iter()
                .map(|(t, &c)| (format_key(t), c))
                .collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn get(&self, t: &[usize]) -> Option<usize> {
        self.values.get(t).copied()
    }

    /// For arity 1, every `F_α` is the coloring itself. For arity 2,
    /// `F_α(β) = F(α, β)` for `β > α` and 0 otherwise.
    pub fn section_family(&self) -> Result<ColoringFamily, RamseyError> {
        let k = self.k;
        let gamma = self.gamma.min(k).max(1);
        let tables = match self.arity {
            1 => vec![
                (0..k)
                    .map(|b| self.values[&vec![b]])
                    .collect::<Vec<usize>>();
                k
            ],
            2 => (0..k)
                .map(|a| {
                    (0..k)
                        .map(|b| if b > a { self.values[&vec![a, b]] } else { 0 })
                        .collect()
                })
                .collect(),
            n => {
                return Err(RamseyError::Arity {
                    expected: 2,
                    found: n,
                })
            }
        };
        if self.gamma > k {
            return Err(RamseyError::GammaRange {
                index: 0,
                gamma: self.gamma,
                k,
            });
        }
        Ok(ColoringFamily {
            gammas: vec![gamma; k],
            tables,
        })
    }
}

/// Every `G`-spread-apart increasing `arity`-tuple from `B_m` has color
/// `eta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct PartitionCert {
    pub m: usize,
    pub g: Vec<usize>,
    pub eta: usize,
    /// Number of governed tuples carrying a color.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PartitionOutcome {
    Certified(PartitionCert),
    Insufficient,
}

impl PartitionOutcome {
    pub fn cert(&self) -> Option<&PartitionCert> {
        match self {
            PartitionOutcome::Certified(c) => Some(c),
            PartitionOutcome::Insufficient => None,
        }
    }
}

/// Spread-apart tuples from `set`, enumerated with pruning.
fn spread_tuples(set: &[usize], n: usize, g: &[usize], f: &mut dyn FnMut(&[usize])) {
    fn go(set: &[usize], n: usize, g: &[usize], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        let bound = cur.last().map_or(g[0], |&p| g[p].max(p));
        for &x in set.iter().filter(|&&x| x > bound) {
            cur.push(x);
            go(set, n, g, cur, f);
            cur.pop();
        }
    }
    go(set, n, g, &mut Vec::with_capacity(n), f);
}

/// Colors found on governed tuples: `(count, first color, agrees)`.
fn survey(col: &Coloring, set: &[usize], g: &[usize]) -> (usize, Option<usize>, bool) {
    let (mut count, mut first, mut agrees) = (0usize, None, true);
    spread_tuples(set, col.arity, g, &mut |t| {
        if let Some(c) = col.get(t) {
            count += 1;
            match first {
                None => first = Some(c),
                Some(f) if f != c => agrees = false,
                _ => {}
            }
        }
    });
    (count, first, agrees)
}

/// The tail of defined values after `floor` in `set`: its color, the last
/// element carrying another color (if any), and the tail's size.
fn tail(
    set: &[usize],
    floor: Option<usize>,
    mut color: impl FnMut(usize) -> Option<usize>,
) -> Option<(usize, Option<usize>, usize)> {
    let defined: Vec<(usize, usize)> = set
        .iter()
        .filter(|&&x| floor.is_none_or(|f| x > f))
        .filter_map(|&x| color(x).map(|c| (x, c)))
        .collect();
    let &(_, eta) = defined.last()?;
    let threshold = defined
        .iter()
        .rev()
        .find(|&&(_, c)| c != eta)
        .map(|&(x, _)| x);
    let size = defined
        .iter()
        .filter(|&&(x, _)| threshold.is_none_or(|t| x > t))
        .count();
    Some((eta, threshold, size))
}

/// All certificates reachable by the recursion, ordered by the level at
/// which the outermost tail is read and then by the inner recursion.
/// Inner certificates only need to govern one tuple; the outermost needs
/// `min_support`.
fn candidates(
    col: &Coloring,
    levels: &LevelSequence,
    trunc: Truncation,
    min_support: usize,
) -> Vec<PartitionCert> {
    let k = col.k;
    let mut out = Vec::new();
    for (t, set) in levels.levels.iter().enumerate() {
        if col.arity == 1 {
            if let Some((eta, threshold, size)) = tail(set, None, |x| col.get(&[x])) {
                if size >= trunc.min_tail {
                    let cert = PartitionCert {
                        m: t,
                        g: vec![threshold.unwrap_or(0); k],
                        eta,
                        support: 0,
                    };
                    push_checked(col, levels, min_support, cert, &mut out);
                }
            }
            continue;
        }
        // Per prefix, the tail of last coordinates: H records its color and
        // G* its threshold, as a function of the last prefix entry. Prefixes
        // whose tail is too short leave H undefined.
        let mut g_star = vec![0usize; k];
        let mut h: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut ext = Vec::with_capacity(col.arity);
        for_each_increasing(set, col.arity - 1, &mut |p| {
            let last = *p.last().expect("prefix has arity at least 1");
            let found = tail(set, Some(last), |x| {
                ext.clear();
                ext.extend_from_slice(p);
                ext.push(x);
                col.get(&ext)
            });
            if let Some((eta, threshold, size)) = found {
                g_star[last] = g_star[last].max(threshold.unwrap_or(0));
                if size >= trunc.min_tail {
                    h.insert(p.to_vec(), eta);
                }
            }
        });
        let sub = Coloring {
            k,
            arity: col.arity - 1,
            gamma: col.gamma,
            values: h,
        };
        for inner in candidates(&sub, levels, trunc, 1) {
            let g: Vec<usize> = g_star
                .iter()
                .zip(&inner.g)
                .map(|(&a, &b)| a.max(b))
                .collect();
            let cert = PartitionCert {
                m: t.max(inner.m),
                g,
                eta: inner.eta,
                support: 0,
            };
            push_checked(col, levels, min_support, cert, &mut out);
        }
    }
    out
}

fn push_checked(
    col: &Coloring,
    levels: &LevelSequence,
    min_support: usize,
    mut cert: PartitionCert,
    out: &mut Vec<PartitionCert>,
) {
    let (count, first, agrees) = survey(col, &levels.levels[cert.m], &cert.g);
    cert.support = count;
    if count >= min_support.max(1) && agrees && first == Some(cert.eta) && !out.contains(&cert) {
        out.push(cert);
    }
}

fn check_scale(col: &Coloring, levels: &LevelSequence) -> Result<(), RamseyError> {
    levels.validate()?;
    if col.k != levels.k {
        return Err(RamseyError::Length {
            expected: levels.k,
            found: col.k,
        });
    }
    Ok(())
}

/// Runs the arity recursion and returns the first certificate governing
/// enough tuples, or `Insufficient`.
pub fn partition_find(
    col: &Coloring,
    levels: &LevelSequence,
    trunc: Truncation,
) -> Result<PartitionOutcome, RamseyError> {
    check_scale(col, levels)?;
    Ok(candidates(col, levels, trunc, trunc.min_support)
        .into_iter()
        .find(|c| verify_partition(col, c, levels).is_ok_and(|v| v.holds()))
        .map_or(PartitionOutcome::Insufficient, PartitionOutcome::Certified))
}

/// Every certificate the recursion produces, in search order.
pub fn partition_candidates(
    col: &Coloring,
    levels: &LevelSequence,
    trunc: Truncation,
) -> Result<Vec<PartitionCert>, RamseyError> {
    check_scale(col, levels)?;
    Ok(candidates(col, levels, trunc, trunc.min_support))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Verification {
    pub tuples_checked: usize,
    pub mismatch: Option<(Vec<usize>, usize)>,
}

impl Verification {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Exhaustive check over all increasing tuples from `B_m`, filtered by
/// the spread-apart condition.
pub fn verify_partition(
    col: &Coloring,
    cert: &PartitionCert,
    levels: &LevelSequence,
) -> Result<Verification, RamseyError> {
    let set = levels.level(cert.m)?;
    if cert.g.len() != col.k {
        return Err(RamseyError::Length {
            expected: col.k,
            found: cert.g.len(),
        });
    }
    let mut v = Verification {
        tuples_checked: 0,
        mismatch: None,
    };
    for_each_increasing(set, col.arity, &mut |t| {
        if v.mismatch.is_some() || !is_spread(t, &cert.g) {
            return;
        }
        if let Some(c) = col.get(t) {
            v.tuples_checked += 1;
            if c != cert.eta {
                v.mismatch = Some((t.to_vec(), c));
            }
        }
    });
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EtaVerdict {
    Agree,
    /// Outputs `first` and `second` both govern `witness` but name
    /// different colors.
    Conflict {
        first: usize,
        second: usize,
        witness: Vec<usize>,
        color: Option<usize>,
    },
    /// No tuple governed by both exists at this scale.
    Undecided {
        first: usize,
        second: usize,
    },
}

/// Compares the colors named by several certificates through their
/// combination `m* = max(m, m')`, `G* = max(G, G')`.
pub fn eta_uniqueness_check(
    col: &Coloring,
    levels: &LevelSequence,
    outputs: &[PartitionCert],
) -> Result<EtaVerdict, RamseyError> {
    let mut undecided = None;
    for a in 0..outputs.len() {
        for b in a + 1..outputs.len() {
            let (p, q) = (&outputs[a], &outputs[b]);
            if p.eta == q.eta {
                continue;
            }
            let m = p.m.max(q.m);
            let g: Vec<usize> = p.g.iter().zip(&q.g).map(|(&x, &y)| x.max(y)).collect();
            let set = levels.level(m)?;
            let mut witness = None;
            spread_tuples(set, col.arity, &g, &mut |t| {
                if witness.is_none() {
                    witness = Some(t.to_vec());
                }
            });
            match witness {
                Some(w) => {
                    return Ok(EtaVerdict::Conflict {
                        first: a,
                        second: b,
                        color: col.get(&w),
                        witness: w,
                    })
                }
                None => {
                    undecided.get_or_insert(EtaVerdict::Undecided {
                        first: a,
                        second: b,
                    });
                }
            }
        }
    }
    Ok(undecided.unwrap_or(EtaVerdict::Agree))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub enum Nu {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "undefined")]
    Undefined,
}

impl fmt::Display for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Nu::One => "1",
            Nu::Zero => "0",
            Nu::Undefined => "undefined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct NuResult {
    pub value: Nu,
    /// The least level whose tail decided the value.
    pub stage: Option<usize>,
}

/// `1` when the last `min_tail` elements of some `B_n` lie in `b`, `0`
/// when they lie outside it; the least such `n` decides.
pub fn nu_measure(b: &[usize], levels: &LevelSequence, min_tail: usize) -> NuResult {
    let min_tail = min_tail.max(1);
    for (n, set) in levels.levels.iter().enumerate() {
        if set.len() < min_tail {
            continue;
        }
        let tail = &set[set.len() - min_tail..];
        if tail.iter().all(|x| b.contains(x)) {
            return NuResult {
                value: Nu::One,
                stage: Some(n),
            };
        }
        if tail.iter().all(|x| !b.contains(x)) {
            return NuResult {
                value: Nu::Zero,
                stage: Some(n),
            };
        }
    }
    NuResult {
        value: Nu::Undefined,
        stage: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramsey::length_construction;

    fn worked_levels() -> LevelSequence {
        let mut f = ColoringFamily::constant(4);
        f.tables[0] = vec![0, 1, 0, 1];
        length_construction(4, &[f], None).unwrap()
    }

    #[test]
    fn constant_coloring_is_certified_at_level_zero() {
        let levels = LevelSequence::trivial(6);
        for arity in 1..=3 {
            let col = Coloring::from_fn(6, arity, 3, |_| 2).unwrap();
            let cert = partition_find(&col, &levels, Truncation::default()).unwrap();
            let cert = cert.cert().unwrap().clone();
            assert_eq!((cert.m, cert.eta), (0, 2));
            assert_eq!(cert.g, vec![0; 6], "arity {arity}");
        }
    }

    #[test]
    fn worked_unary_partition() {
        let f = [0, 1, 0, 1];
        let col = Coloring::from_fn(4, 1, 2, |t| f[t[0]]).unwrap();
        let out = partition_find(&col, &worked_levels(), Truncation::default()).unwrap();
        let cert = out.cert().unwrap();
        assert_eq!((cert.m, cert.g.clone(), cert.eta), (1, vec![0; 4], 1));
    }

    #[test]
    fn single_color() {
        let col = Coloring::from_fn(4, 2, 1, |_| 0).unwrap();
        let out = partition_find(&col, &LevelSequence::trivial(4), Truncation::default()).unwrap();
        let cert = out.cert().unwrap();
        assert_eq!((cert.m, cert.eta), (0, 0));
    }

    #[test]
    fn alternating_unary_is_insufficient_without_levels() {
        let col = Coloring::from_fn(6, 1, 2, |t| t[0] % 2).unwrap();
        let out = partition_find(&col, &LevelSequence::trivial(6), Truncation::default()).unwrap();
        assert_eq!(out, PartitionOutcome::Insufficient);
    }

    #[test]
    fn pair_coloring_by_parity_of_larger() {
        // F(a, b) = b mod 2 is decided by the tail threshold of the last
        // coordinate after thinning to odd numbers.
        let k = 8;
        let col = Coloring::from_fn(k, 2, 2, |t| t[1] % 2).unwrap();
        let levels = LevelSequence {
            k,
            levels: vec![(0..k).collect(), vec![1, 3, 5, 7]],
        };
        let out = partition_find(&col, &levels, Truncation::default()).unwrap();
        let cert = out.cert().unwrap();
        assert_eq!(cert.eta, 1);
        assert!(verify_partition(&col, cert, &levels).unwrap().holds());
    }

    #[test]
    fn eta_checks() {
        let col = Coloring::from_fn(6, 1, 2, |t| t[0] % 2).unwrap();
        let levels = LevelSequence::trivial(6);
        let p = PartitionCert {
            m: 0,
            g: vec![0; 6],
            eta: 1,
            support: 0,
        };
        assert_eq!(
            eta_uniqueness_check(&col, &levels, &[p.clone(), p.clone()]).unwrap(),
            EtaVerdict::Agree
        );
        let q = PartitionCert {
            eta: 0,
            ..p.clone()
        };
        assert!(matches!(
            eta_uniqueness_check(&col, &levels, &[p.clone(), q.clone()]).unwrap(),
            EtaVerdict::Conflict { witness, .. } if witness == vec![1]
        ));
        let far = PartitionCert { g: vec![5; 6], ..q };
        assert_eq!(
            eta_uniqueness_check(&col, &levels, &[p, far]).unwrap(),
            EtaVerdict::Undecided {
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn nu_examples() {
        let k = 8;
        let all: Vec<usize> = (0..k).collect();
        let levels = LevelSequence {
            k,
            levels: vec![all.clone(), vec![0, 2, 3, 4, 7]],
        };
        assert_eq!(nu_measure(&all, &levels, 2).value, Nu::One);
        assert_eq!(nu_measure(&[], &levels, 2).value, Nu::Zero);
        let evens: Vec<usize> = (0..k).filter(|x| x % 2 == 0).collect();
        assert_eq!(
            nu_measure(&evens, &levels, 2),
            NuResult {
                value: Nu::Undefined,
                stage: None
            }
        );
    }

    #[test]
    fn table_round_trip() {
        let col = Coloring::from_fn(5, 2, 3, |t| (t[0] + t[1]) % 3).unwrap();
        let back = Coloring::from_table(&col.to_table()).unwrap();
        assert_eq!(col, back);
        let mut t = col.to_table();
        t.table.remove("0,1");
        assert_eq!(
            Coloring::from_table(&t),
            Err(RamseyError::Undefined(vec![0, 1]))
        );
    }
}
