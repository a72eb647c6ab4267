//! Least block supports: the narrowest interval of coordinates on which
//! some function equivalent to `f` depends.

use serde::{Deserialize, Serialize};

use super::measure::{equiv, Truth};
use super::{diagonal, SupportedFunction, Target, TermError};
use crate::ramsey::{LevelSequence, Truncation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockSupport {
    /// `f` is equivalent to the diagonal of `value`.
    Empty {
        value: String,
    },
    Block {
        lo: i64,
        hi: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct BlockSupportReport {
    pub minimal: BlockSupport,
    /// Every block `[lo, hi]` inside the window that supports `f`.
    pub passing: Vec<(i64, i64)>,
    pub undecided: Vec<(i64, i64)>,
}

/// The candidate supported by `[lo, hi]`: coordinates of `f` left of the
/// block are frozen to the anchors `θ*_1 < θ*_2 < ...` taken from the
/// deepest level, coordinates right of it to the successors of the last
/// block value in that level.
fn frozen(
    f: &SupportedFunction,
    lo: i64,
    hi: i64,
    levels: &LevelSequence,
) -> Result<SupportedFunction, TermError> {
    let k = levels.k;
    let deepest = levels
        .level(levels.levels.len().saturating_sub(1))?
        .to_vec();
    let above = |v: usize, n: usize| {
        deepest
            .iter()
            .copied()
            .filter(|&a| a > v)
            .nth(n)
            .unwrap_or(k - 1)
    };
    let width = (hi - lo + 1) as usize;
    let mut err = None;
    let g = SupportedFunction::from_fn((lo..=hi).collect(), k, |t| {
        let mut left = 0;
        let mut right = 0;
        let vals: Vec<usize> = f
            .support
            .iter()
            .map(|&c| {
                if c < lo {
                    left += 1;
                    above(0, left - 1)
                } else if c > hi {
                    right += 1;
                    above(t[width - 1], right - 1)
                } else {
                    t[(c - lo) as usize]
                }
            })
            .collect();
        match f.lookup(&vals) {
            Ok(v) => v.to_string(),
            Err(e) => {
                err.get_or_insert(e);
                String::new()
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(g),
    }
}

/// Searches every block inside `window`, narrowest first, then leftmost.
/// A diagonal equivalent to `f` gives the empty support.
pub fn min_block_support(
    f: &SupportedFunction,
    target: &Target,
    levels: &LevelSequence,
    window: (i64, i64),
    trunc: Truncation,
) -> Result<BlockSupportReport, TermError> {
    let (wlo, whi) = window;
    if let Some(&c) = f.support.iter().find(|&&c| c < wlo || c > whi) {
        return Err(TermError::WindowTooSmall {
            lo: wlo,
            hi: whi,
            coordinate: c,
        });
    }
    let mut empty = None;
    for value in f.range() {
        if equiv(f, &diagonal(value.clone()), target, levels, trunc)?.truth == Truth::True {
            empty = Some(value);
            break;
        }
    }
    let mut passing = Vec::new();
    let mut undecided = Vec::new();
    for width in 1..=(whi - wlo + 1) {
        for lo in wlo..=(whi - width + 1) {
            let hi = lo + width - 1;
            let g = frozen(f, lo, hi, levels)?;
            match equiv(f, &g, target, levels, trunc)?.truth {
                Truth::True => passing.push((lo, hi)),
                Truth::Undecided => undecided.push((lo, hi)),
                Truth::False => {}
            }
        }
    }
    let minimal = match (empty, passing.first()) {
        (Some(value), _) => BlockSupport::Empty { value },
        (None, Some(&(lo, hi))) => BlockSupport::Block { lo, hi },
        (None, None) => return Err(TermError::Undecided),
    };
    Ok(BlockSupportReport {
        minimal,
        passing,
        undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums() -> Target {
        Target::plain((0..8).map(|v| v.to_string()))
    }

    #[test]
    fn padded_support_shrinks() {
        // Declared on {-1, 0, 1} but only reads coordinate 0.
        let f = SupportedFunction::from_fn(vec![-1, 0, 1], 8, |t| t[1].to_string());
        let r = min_block_support(
            &f,
            &nums(),
            &LevelSequence::trivial(8),
            (-1, 1),
            Truncation::default(),
        )
        .unwrap();
        assert_eq!(r.minimal, BlockSupport::Block { lo: 0, hi: 0 });
        assert!(r.passing.iter().all(|&(lo, hi)| lo <= 0 && 0 <= hi));
    }

    #[test]
    fn constant_has_empty_support() {
        let f = SupportedFunction::from_fn(vec![0, 1], 8, |_| "5".into());
        let r = min_block_support(
            &f,
            &nums(),
            &LevelSequence::trivial(8),
            (0, 1),
            Truncation::default(),
        )
        .unwrap();
        assert_eq!(r.minimal, BlockSupport::Empty { value: "5".into() });
    }

    #[test]
    fn reads_only_the_right_coordinate() {
        let f = SupportedFunction::from_fn(vec![0, 1], 8, |t| t[1].to_string());
        let r = min_block_support(
            &f,
            &nums(),
            &LevelSequence::trivial(8),
            (0, 1),
            Truncation::default(),
        )
        .unwrap();
        assert_eq!(r.minimal, BlockSupport::Block { lo: 1, hi: 1 });
    }

    #[test]
    fn support_outside_window() {
        let f = SupportedFunction::from_fn(vec![3], 8, |t| t[0].to_string());
        let r = min_block_support(
            &f,
            &nums(),
            &LevelSequence::trivial(8),
            (0, 1),
            Truncation::default(),
        );
        assert!(matches!(
            r,
            Err(TermError::WindowTooSmall { coordinate: 3, .. })
        ));
    }
}
