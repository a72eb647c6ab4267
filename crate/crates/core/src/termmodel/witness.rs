//! The functions `H(x) = i(x(0))` and `h(x) = i(S ∩ L_{x(0)})`.

use std::collections::{BTreeMap, BTreeSet};

use super::{SupportedFunction, TermError};
use crate::amodels::{AModelF, StandardPart};

/// Ordinals `o0 .. o{k-1}` with `o_a ∈ o_b` for `a < b`, plus a node `c{θ}`
/// coding `{o_y : y ∈ s, y < θ}` whenever no earlier node already has that
/// extension. Everything is standard, with `i` and `j` identities.
pub fn coding_frame(k: usize, s: &[usize]) -> AModelF {
    let mut nodes: Vec<String> = (0..k).map(|n| format!("o{n}")).collect();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut rank: BTreeMap<String, i64> = BTreeMap::new();
    let mut exts: Vec<BTreeSet<usize>> = Vec::new();
    for b in 0..k {
        for a in 0..b {
            edges.push((format!("o{a}"), format!("o{b}")));
        }
        rank.insert(format!("o{b}"), b as i64);
        exts.push((0..b).collect());
    }
    for theta in 0..=k {
        let ext: BTreeSet<usize> = s.iter().copied().filter(|&y| y < theta && y < k).collect();
        if exts.contains(&ext) {
            continue;
        }
        let name = format!("c{theta}");
        for &y in &ext {
            edges.push((format!("o{y}"), name.clone()));
        }
        rank.insert(name.clone(), (k + theta) as i64);
        nodes.push(name);
        exts.push(ext);
    }
    AModelF::trivial(StandardPart { nodes, edges, rank })
}

/// The first `k` standard nodes in rank order.
fn ordinals(frame: &AModelF, k: usize) -> Result<Vec<String>, TermError> {
    let mut std = frame.standard_part.nodes.clone();
    if std.len() < k {
        return Err(TermError::ShortStandardPart(k));
    }
    std.sort_by_key(|v| {
        (
            frame.standard_part.rank.get(v).copied().unwrap_or(i64::MAX),
            v.clone(),
        )
    });
    std.truncate(k);
    Ok(std)
}

fn image(frame: &AModelF, v: &str) -> Result<String, TermError> {
    frame
        .i
        .get(v)
        .cloned()
        .ok_or_else(|| TermError::UnknownElement(v.to_string()))
}

/// `H`: support `{0}`, `θ ↦ i(θ)`.
pub fn witness_h(frame: &AModelF, k: usize) -> Result<SupportedFunction, TermError> {
    let ords = ordinals(frame, k)?;
    let images = ords
        .iter()
        .map(|o| image(frame, o))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SupportedFunction::from_fn(vec![0], k, |t| {
        images[t[0]].clone()
    }))
}

/// `h`: support `{0}`, `θ` goes to the least node (by name) whose members
/// are exactly the images of the elements of `subset` below `θ`.
pub fn code_subset(
    frame: &AModelF,
    subset: &[String],
    k: usize,
) -> Result<SupportedFunction, TermError> {
    let ords = ordinals(frame, k)?;
    let nodes: BTreeSet<&String> = frame.structure.nodes.iter().collect();
    let mut ext: BTreeMap<&str, BTreeSet<&str>> = nodes
        .iter()
        .map(|v| (v.as_str(), BTreeSet::new()))
        .collect();
    for (x, y) in &frame.structure.edges {
        ext.entry(y.as_str()).or_default().insert(x.as_str());
    }
    let mut codes = Vec::with_capacity(k);
    for theta in 0..k {
        let want = ords[..theta]
            .iter()
            .filter(|o| subset.contains(o))
            .map(|o| image(frame, o))
            .collect::<Result<BTreeSet<String>, _>>()?;
        let hit = ext
            .iter()
            .find(|(_, e)| e.len() == want.len() && e.iter().all(|m| want.contains(*m)))
            .map(|(v, _)| v.to_string())
            .ok_or(TermError::MissingCode(theta))?;
        codes.push(hit);
    }
    Ok(SupportedFunction::from_fn(vec![0], k, |t| {
        codes[t[0]].clone()
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{diagonal, relation_holds, Target, Truth};
    use super::*;
    use crate::ramsey::{LevelSequence, Truncation};

    #[test]
    fn h_codes_the_subset() {
        let k = 8;
        let s = [1usize, 4];
        let frame = coding_frame(k, &s);
        let names: Vec<String> = s.iter().map(|y| format!("o{y}")).collect();
        let h = code_subset(&frame, &names, k).unwrap();
        let target = Target::from_base(&frame.structure);
        let levels = LevelSequence::trivial(k);
        for y in 0..3 {
            let d = relation_holds(
                "in",
                &[&diagonal(format!("o{y}")), &h],
                &target,
                &levels,
                Truncation::default(),
            )
            .unwrap();
            let want = if s.contains(&y) {
                Truth::True
            } else {
                Truth::False
            };
            assert_eq!(d.truth, want, "o{y}");
        }
    }

    #[test]
    fn h_is_not_a_diagonal() {
        let k = 8;
        let frame = coding_frame(k, &[]);
        let big_h = witness_h(&frame, k).unwrap();
        let target = Target::from_base(&frame.structure);
        let levels = LevelSequence::trivial(k);
        for v in big_h.range() {
            let d = super::super::equiv(
                &big_h,
                &diagonal(v.clone()),
                &target,
                &levels,
                Truncation::default(),
            )
            .unwrap();
            // Near the top the disagreeing tail is shorter than the
            // truncation accepts.
            let theta: usize = v[1..].parse().unwrap();
            if theta + Truncation::default().min_tail >= k {
                assert_ne!(d.truth, Truth::True);
            } else {
                assert_eq!(d.truth, Truth::False, "{v}");
            }
        }
    }

    #[test]
    fn missing_code() {
        let mut frame = coding_frame(4, &[0, 2]);
        frame.structure.edges.retain(|(_, y)| y != "c3");
        let r = code_subset(&frame, &["o0".into(), "o2".into()], 4);
        assert_eq!(r, Err(TermError::MissingCode(3)));
    }
}
