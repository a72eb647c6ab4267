//! Finite combinatorics behind the weak-compactness arguments: the
//! basic-module tree assignment, the level sequence it iterates into,
//! spread-apart partitions, the measure `ν`, and tree validators.
//!
//! The scale is a positive integer `K`; ordinals are `0..K`.

mod basic;
mod partition;
mod trees;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use basic::{
    basic_module, length_construction, tail_constancy_holds, AssignmentTree, BasicModuleOutput,
    InvariantViolation, LevelSequence, Thinning,
};
pub use partition::{
    eta_uniqueness_check, nu_measure, partition_candidates, partition_find, verify_partition,
    Coloring, EtaVerdict, Nu, NuResult, PartitionCert, PartitionOutcome, Truncation, TupleTable,
    Verification,
};
pub use trees::{tree_validators, Check, TreePresentation, TreeReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("K must be at least 2, got {0}")]
    ScaleTooSmall(usize),
    #[error("expected {expected} entries, found {found}")]
    Length { expected: usize, found: usize },
    #[error("gamma {gamma} at index {index} is outside 1..={k}")]
    GammaRange {
        index: usize,
        gamma: usize,
        k: usize,
    },
    #[error("F_{index}({arg}) = {value} is not below gamma {gamma}")]
    ValueRange {
        index: usize,
        arg: usize,
        value: usize,
        gamma: usize,
    },
    #[error("{0} is outside 0..K")]
    OutOfScale(usize),
    #[error("tuple {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("the set is empty")]
    EmptySet,
    #[error("level {0} came out empty")]
    EmptyLevel(usize),
    #[error("no free node left for {0}")]
    TreeFull(usize),
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("color {color} of {tuple:?} is not below gamma {gamma}")]
    ColorRange {
        tuple: Vec<usize>,
        color: usize,
        gamma: usize,
    },
    #[error("no color given for {0:?}")]
    Undefined(Vec<usize>),
    #[error("bad tuple key {0:?}")]
    BadKey(String),
    #[error("level {level} does not exist (depth {depth})")]
    NoSuchLevel { level: usize, depth: usize },
    #[error("malformed tree: {0}")]
    MalformedTree(String),
}

/// Functions `F_i : K → γ_i` for `i < K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct ColoringFamily {
    pub gammas: Vec<usize>,
    pub tables: Vec<Vec<usize>>,
}

impl ColoringFamily {
    pub fn k(&self) -> usize {
        self.tables.len()
    }

    pub fn validate(&self) -> Result<(), RamseyError> {
        let k = self.k();
        if k < 2 {
            return Err(RamseyError::ScaleTooSmall(k));
        }
        if self.gammas.len() != k {
            return Err(RamseyError::Length {
                expected: k,
                found: self.gammas.len(),
            });
        }
        for (index, (&gamma, table)) in self.gammas.iter().zip(&self.tables).enumerate() {
            if gamma == 0 || gamma > k {
                return Err(RamseyError::GammaRange { index, gamma, k });
            }
            if table.len() != k {
                return Err(RamseyError::Length {
                    expected: k,
                    found: table.len(),
                });
            }
            if let Some((arg, &value)) = table.iter().enumerate().find(|(_, &v)| v >= gamma) {
                return Err(RamseyError::ValueRange {
                    index,
                    arg,
                    value,
                    gamma,
                });
            }
        }
        Ok(())
    }

    /// Every `F_i` constantly 0, with all `γ_i = 2`.
    pub fn constant(k: usize) -> Self {
        ColoringFamily {
            gammas: vec![2; k],
            tables: vec![vec![0; k]; k],
        }
    }

    /// Uniformly random tables with random `γ_i ∈ 1..=max_gamma`.
    pub fn random<R: rand::Rng>(rng: &mut R, k: usize, max_gamma: usize) -> Self {
        let gammas: Vec<usize> = (0..k)
            .map(|_| rng.gen_range(1..=max_gamma.min(k)))
            .collect();
        let tables = gammas
            .iter()
            .map(|&g| (0..k).map(|_| rng.gen_range(0..g)).collect())
            .collect();
        ColoringFamily { gammas, tables }
    }
}

/// `G(0) < α_1` and `G(α_{i-1}) < α_i` for `1 < i ≤ n`.
pub fn spread_apart(alphas: &[usize], g: &[usize]) -> Result<bool, RamseyError> {
    if alphas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RamseyError::NotIncreasing(alphas.to_vec()));
    }
    if let Some(&a) = alphas.iter().find(|&&a| a >= g.len()) {
        return Err(RamseyError::OutOfScale(a));
    }
    Ok(is_spread(alphas, g))
}

pub(crate) fn is_spread(alphas: &[usize], g: &[usize]) -> bool {
    match alphas.first() {
        None => true,
        Some(&first) => g[0] < first && alphas.windows(2).all(|w| g[w[0]] < w[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_examples() {
        let zero = vec![0; 8];
        let succ: Vec<usize> = (0..8).map(|a| a + 1).collect();
        assert!(spread_apart(&[1, 2], &zero).unwrap());
        assert!(!spread_apart(&[1, 3], &succ).unwrap());
        assert!(spread_apart(&[2, 5], &succ).unwrap());
        assert_eq!(
            spread_apart(&[3, 3], &zero),
            Err(RamseyError::NotIncreasing(vec![3, 3]))
        );
    }

    #[test]
    fn family_validation() {
        assert!(ColoringFamily::constant(4).validate().is_ok());
        let mut f = ColoringFamily::constant(4);
        f.tables[2][1] = 2;
        assert!(matches!(
            f.validate(),
            Err(RamseyError::ValueRange {
                index: 2,
                arg: 1,
                ..
            })
        ));
        f.tables[2][1] = 0;
        f.gammas[0] = 0;
        assert!(matches!(f.validate(), Err(RamseyError::GammaRange { .. })));
    }
}
