//! Seeded generators of valid diagrams.
//!
//! Each stage extends the previous one by fresh `j`-orbits without fixed
//! points, so the maps are embeddings under which both squares commute.
//! Stage labels are shuffled so that map tables are not identities.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{AModelF, Diagram, MapTable, StandardPart};
use crate::qmodel::{BaseStructure, JMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// Fresh orbits of isolated atoms over a standard part of four atoms.
    /// Every stage and map is then elementary to depth 2.
    Atoms,
    /// Fresh orbits of size 2 or 3 with random `j`-invariant edges over a
    /// short ordinal chain. Maps are embeddings, rarely elementary.
    Rich,
}

struct Growing {
    std: usize,
    j: Vec<usize>,
    rank: Vec<i64>,
    edges: BTreeSet<(usize, usize)>,
}

impl Growing {
    fn add_orbit<R: Rng>(&mut self, rng: &mut R, size: usize, kind: Extension) {
        let first = self.j.len();
        let rank = self.std as i64 + rng.gen_range(0..4);
        for k in 0..size {
            self.j.push(first + (k + 1) % size);
            self.rank.push(rank);
        }
        if kind == Extension::Rich {
            for _ in 0..rng.gen_range(0..=3) {
                let x = rng.gen_range(first..first + size);
                let y = rng.gen_range(0..self.j.len());
                let (mut a, mut b) = if rng.gen_bool(0.5) { (x, y) } else { (y, x) };
                loop {
                    if !self.edges.insert((a, b)) {
                        break;
                    }
                    a = self.j[a];
                    b = self.j[b];
                }
            }
        }
    }

    fn stage(&self, names: &[String], sp: &StandardPart) -> AModelF {
        let n = self.j.len();
        AModelF {
            structure: BaseStructure {
                nodes: names[..n].to_vec(),
                edges: self
                    .edges
                    .iter()
                    .map(|&(a, b)| (names[a].clone(), names[b].clone()))
                    .collect(),
                levels: Vec::new(),
                j: (0..n)
                    .map(|x| (names[x].clone(), names[self.j[x]].clone()))
                    .collect(),
                mode: JMode::Automorphism,
            },
            i: sp
                .nodes
                .iter()
                .enumerate()
                .map(|(s, v)| (v.clone(), names[s].clone()))
                .collect(),
            rank: (0..n).map(|x| (names[x].clone(), self.rank[x])).collect(),
            standard_part: sp.clone(),
        }
    }
}

fn standard_part(kind: Extension, size: usize) -> StandardPart {
    let nodes: Vec<String> = (0..size).map(|k| format!("o{k}")).collect();
    let mut edges = Vec::new();
    if kind == Extension::Rich {
        for a in 0..size {
            for b in a + 1..size {
                edges.push((nodes[a].clone(), nodes[b].clone()));
            }
        }
    }
    StandardPart {
        rank: nodes
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), k as i64))
            .collect(),
        nodes,
        edges,
    }
}

/// A diagram of at most `max_stages` stages with at most `max_nodes`
/// nodes each.
pub fn random_diagram<R: Rng>(
    rng: &mut R,
    kind: Extension,
    max_stages: usize,
    max_nodes: usize,
) -> Diagram {
    let std_size = match kind {
        Extension::Atoms => 4,
        Extension::Rich => rng.gen_range(1..=3),
    }
    .min(max_nodes);
    let sp = standard_part(kind, std_size);
    let mut g = Growing {
        std: std_size,
        j: (0..std_size).collect(),
        rank: (0..std_size as i64).collect(),
        edges: sp
            .edges
            .iter()
            .map(|(a, b)| {
                (
                    sp.nodes.iter().position(|v| v == a).unwrap(),
                    sp.nodes.iter().position(|v| v == b).unwrap(),
                )
            })
            .collect(),
    };
    let stages = rng.gen_range(1..=max_stages.max(1));
    let mut diagram = Diagram {
        stages: Vec::new(),
        maps: Vec::new(),
    };
    let mut prev_names: Option<Vec<String>> = None;
    let mut all_names: Vec<Vec<String>> = Vec::new();
    for a in 0..stages {
        let grow = if a == 0 {
            rng.gen_range(0..=1)
        } else {
            rng.gen_range(0..=2)
        };
        for _ in 0..grow {
            let size = match kind {
                Extension::Atoms => 2,
                Extension::Rich => rng.gen_range(2..=3),
            };
            if g.j.len() + size <= max_nodes {
                g.add_orbit(rng, size, kind);
            }
        }
        let n = g.j.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let names: Vec<String> = perm.iter().map(|k| format!("s{a}n{k}")).collect();
        diagram.stages.push(g.stage(&names, &sp));
        if let Some(prev) = &prev_names {
            diagram.maps.push(MapTable {
                from: a - 1,
                to: a,
                table: prev
                    .iter()
                    .enumerate()
                    .map(|(x, v)| (v.clone(), names[x].clone()))
                    .collect(),
            });
        }
        prev_names = Some(names.clone());
        all_names.push(names);
    }
    if stages > 2 && rng.gen_bool(0.5) {
        let last = stages - 1;
        diagram.maps.push(MapTable {
            from: 0,
            to: last,
            table: all_names[0]
                .iter()
                .enumerate()
                .map(|(x, v)| (v.clone(), all_names[last][x].clone()))
                .collect::<BTreeMap<_, _>>(),
        });
    }
    diagram
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodels::{check_diagram, DEFAULT_DEPTH};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_diagrams_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let d = random_diagram(&mut rng, Extension::Rich, 4, 8);
            let r = check_diagram(&d, 0).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(d.stages.iter().all(|s| s.structure.nodes.len() <= 8));
        }
    }

    #[test]
    fn atom_diagrams_are_elementary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let d = random_diagram(&mut rng, Extension::Atoms, 3, 8);
            let r = check_diagram(&d, DEFAULT_DEPTH).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
