//! Direct limits of finite chains of A-models.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{index_diagram, AModelError, AModelF, Chain, Diagram, Model};
use crate::qmodel::{BaseStructure, JMode};

/// A limit model with the maps from each stage into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, schemars::JsonSchema)]
pub struct Limit {
    pub model: AModelF,
    /// `maps[a]` is `π[a][limit]` as a label table.
    pub maps: Vec<BTreeMap<String, String>>,
    /// Groups of originals that the maps identify. Empty when every map
    /// is injective.
    pub merged: Vec<Vec<String>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            c = std::mem::replace(&mut self.0[c], r);
        }
        r
    }

    /// Keeps the smaller root.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.0[hi] = lo;
        }
    }
}

/// Flat numbering of `(stage, node)` pairs.
struct Flat {
    offset: Vec<usize>,
}

impl Flat {
    fn new(chain: &Chain) -> Self {
        let mut offset = vec![0];
        for m in &chain.stages {
            offset.push(offset.last().unwrap() + m.base.len());
        }
        Flat { offset }
    }

    fn id(&self, stage: usize, x: usize) -> usize {
        self.offset[stage] + x
    }

    fn total(&self) -> usize {
        *self.offset.last().unwrap()
    }
}

/// The carrier of a limit: classes of stage elements with a label each.
struct Carrier {
    /// Class of each stage element.
    class_of: Vec<Vec<usize>>,
    labels: Vec<String>,
}

/// Relations on the carrier, decided stage by stage and required to agree.
fn assemble(
    chain: &Chain,
    carrier: &Carrier,
    j_of: impl Fn(usize) -> Result<usize, AModelError>,
) -> Result<AModelF, AModelError> {
    let n = carrier.labels.len();
    let label = |c: usize| carrier.labels[c].clone();
    let mut member: Vec<Vec<Option<bool>>> = vec![vec![None; n]; n];
    let mut below: Vec<Vec<Option<bool>>> = vec![vec![None; n]; n];
    let levels_count = chain
        .stages
        .iter()
        .map(|m| m.base.levels.len())
        .min()
        .unwrap_or(1);
    let mut level: Vec<Vec<Option<bool>>> = vec![vec![None; n]; levels_count];
    let record = |cell: &mut Option<bool>, v: bool, rel: &str, x: usize, y: usize| match *cell {
        Some(old) if old != v => Err(AModelError::Ambiguous {
            relation: rel.to_string(),
            x: label(x),
            y: label(y),
        }),
        _ => {
            *cell = Some(v);
            Ok(())
        }
    };
    for (a, m) in chain.stages.iter().enumerate() {
        let cls = &carrier.class_of[a];
        for x in 0..m.base.len() {
            for y in 0..m.base.len() {
                let (c, d) = (cls[x], cls[y]);
                record(&mut member[c][d], m.base.adj[x][y], "membership", c, d)?;
                record(&mut below[c][d], m.rank[x] <= m.rank[y], "order", c, d)?;
            }
            for (k, lv) in level.iter_mut().enumerate() {
                record(
                    &mut lv[cls[x]],
                    m.base.levels[k][x],
                    "level",
                    cls[x],
                    cls[x],
                )?;
            }
        }
    }
    let decided = |v: Option<bool>| v.unwrap_or(false);
    let mut edges = Vec::new();
    for d in 0..n {
        for c in 0..n {
            if decided(member[c][d]) {
                edges.push((label(c), label(d)));
            }
        }
    }
    let rank: BTreeMap<String, i64> = (0..n)
        .map(|c| {
            let strictly_below = (0..n).filter(|&d| !decided(below[c][d])).count();
            (label(c), strictly_below as i64)
        })
        .collect();
    let j = (0..n)
        .map(|c| Ok((label(c), label(j_of(c)?))))
        .collect::<Result<BTreeMap<_, _>, AModelError>>()?;
    let levels = if levels_count <= 1 {
        Vec::new()
    } else {
        level
            .iter()
            .map(|lv| (0..n).filter(|&c| decided(lv[c])).map(label).collect())
            .collect()
    };
    let m0 = &chain.stages[0];
    let i = m0
        .std_names
        .iter()
        .enumerate()
        .map(|(s, v)| (v.clone(), label(carrier.class_of[0][m0.i[s]])))
        .collect();
    let mode = if chain
        .stages
        .iter()
        .all(|m| m.base.mode == JMode::Automorphism)
    {
        JMode::Automorphism
    } else {
        JMode::Endomorphism
    };
    Ok(AModelF {
        structure: BaseStructure {
            nodes: carrier.labels.clone(),
            edges,
            levels,
            j,
            mode,
        },
        standard_part: standard_part_of(m0),
        i,
        rank,
    })
}

fn standard_part_of(m: &Model) -> super::StandardPart {
    let s = m.std_names.len();
    let mut edges = Vec::new();
    for a in 0..s {
        for b in 0..s {
            if m.std_adj[a][b] {
                edges.push((m.std_names[a].clone(), m.std_names[b].clone()));
            }
        }
    }
    super::StandardPart {
        nodes: m.std_names.clone(),
        edges,
        rank: m
            .std_names
            .iter()
            .zip(&m.std_rank)
            .map(|(v, &r)| (v.clone(), r))
            .collect(),
    }
}

fn tables(chain: &Chain, carrier: &Carrier) -> Vec<BTreeMap<String, String>> {
    chain
        .stages
        .iter()
        .enumerate()
        .map(|(a, m)| {
            (0..m.base.len())
                .map(|x| {
                    (
                        m.base.names[x].clone(),
                        carrier.labels[carrier.class_of[a][x]].clone(),
                    )
                })
                .collect()
        })
        .collect()
}

/// The limit whose elements are the pairs `⟨a, y⟩` with `y` original at
/// stage `a`, i.e. outside the image of every earlier stage. Each stage
/// element is sent to its original preimage. Originals with a common image
/// are identified, keeping the earliest.
pub fn direct_limit(d: &Diagram) -> Result<Limit, AModelError> {
    let chain = index_diagram(d)?;
    let count = chain.stages.len();
    // pi[b][a] for b <= a.
    let pi: Vec<Vec<Vec<usize>>> = (0..count)
        .map(|b| {
            (0..count)
                .map(|a| {
                    if b <= a {
                        chain.compose(b, a)
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    let original: Vec<Vec<bool>> = (0..count)
        .map(|a| {
            let mut hit = vec![false; chain.stages[a].base.len()];
            for b in 0..a {
                for &x in &pi[b][a] {
                    hit[x] = true;
                }
            }
            hit.into_iter().map(|h| !h).collect()
        })
        .collect();
    let flat = Flat::new(&chain);
    // Originals sharing an image somewhere are one limit element.
    let mut uf = UnionFind::new(flat.total());
    let mut preimage: Vec<Vec<Option<usize>>> = (0..count)
        .map(|a| vec![None; chain.stages[a].base.len()])
        .collect();
    for a in 0..count {
        for b in 0..=a {
            for y in 0..chain.stages[b].base.len() {
                if !original[b][y] {
                    continue;
                }
                let x = pi[b][a][y];
                match preimage[a][x] {
                    Some(prev) => uf.union(prev, flat.id(b, y)),
                    None => preimage[a][x] = Some(flat.id(b, y)),
                }
            }
        }
    }
    let mut rep_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for a in 0..count {
        for y in chain.stages[a].base.lex_order() {
            if !original[a][y] {
                continue;
            }
            let label = format!("{a}:{}", chain.stages[a].base.names[y]);
            let root = uf.find(flat.id(a, y));
            groups.entry(root).or_default().push(label.clone());
            rep_index.entry(root).or_insert_with(|| {
                labels.push(label);
                labels.len() - 1
            });
        }
    }
    let class_of: Vec<Vec<usize>> = (0..count)
        .map(|a| {
            preimage[a]
                .iter()
                .map(|p| rep_index[&uf.find(p.expect("every element has an original preimage"))])
                .collect()
        })
        .collect();
    let carrier = Carrier { class_of, labels };
    // j of a limit element ⟨a, y⟩ is ⟨a, j_a(y)⟩, which must be original.
    let mut home = vec![(0usize, 0usize); carrier.labels.len()];
    for a in (0..count).rev() {
        for y in 0..chain.stages[a].base.len() {
            if original[a][y] {
                home[carrier.class_of[a][y]] = (a, y);
            }
        }
    }
    let j_of = |c: usize| {
        let (a, y) = home[c];
        let jy = chain.stages[a].base.j[y];
        if !original[a][jy] {
            return Err(AModelError::JNotOriginal {
                stage: a,
                node: chain.stages[a].base.names[y].clone(),
            });
        }
        Ok(carrier.class_of[a][jy])
    };
    let model = assemble(&chain, &carrier, j_of)?;
    let merged = groups.into_values().filter(|g| g.len() > 1).collect();
    Ok(Limit {
        maps: tables(&chain, &carrier),
        model,
        merged,
    })
}

/// The colimit computed independently: the disjoint union of the stages
/// modulo the equivalence generated by the consecutive maps.
pub fn oracle_limit(d: &Diagram) -> Result<Limit, AModelError> {
    let chain = index_diagram(d)?;
    let flat = Flat::new(&chain);
    let mut uf = UnionFind::new(flat.total());
    for (a, p) in chain.next.iter().enumerate() {
        for (x, &y) in p.iter().enumerate() {
            uf.union(flat.id(a, x), flat.id(a + 1, y));
        }
    }
    let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut class_of = Vec::new();
    for (a, m) in chain.stages.iter().enumerate() {
        let mut row = Vec::with_capacity(m.base.len());
        for x in 0..m.base.len() {
            let root = uf.find(flat.id(a, x));
            let c = *class_index.entry(root).or_insert_with(|| {
                labels.push(format!("c{}", labels.len()));
                labels.len() - 1
            });
            row.push(c);
        }
        class_of.push(row);
    }
    let carrier = Carrier { class_of, labels };
    let n = carrier.labels.len();
    let mut j = vec![None; n];
    for (a, m) in chain.stages.iter().enumerate() {
        for x in 0..m.base.len() {
            let (c, jc) = (carrier.class_of[a][x], carrier.class_of[a][m.base.j[x]]);
            match j[c] {
                Some(prev) if prev != jc => {
                    return Err(AModelError::Ambiguous {
                        relation: "j".into(),
                        x: carrier.labels[c].clone(),
                        y: carrier.labels[c].clone(),
                    })
                }
                _ => j[c] = Some(jc),
            }
        }
    }
    let model = assemble(&chain, &carrier, |c| {
        Ok(j[c].expect("every class has a member"))
    })?;
    Ok(Limit {
        maps: tables(&chain, &carrier),
        model,
        merged: Vec::new(),
    })
}

/// Pointwise failures of `π[b][limit] ∘ π[a][b] = π[a][limit]`, as
/// `(a, b, node)`.
pub fn cocone_violations(
    d: &Diagram,
    limit: &Limit,
) -> Result<Vec<(usize, usize, String)>, AModelError> {
    let chain = index_diagram(d)?;
    let mut out = Vec::new();
    for a in 0..chain.stages.len() {
        for b in a..chain.stages.len() {
            let p = chain.compose(a, b);
            for (x, &y) in p.iter().enumerate() {
                let via = &limit.maps[b][&chain.stages[b].base.names[y]];
                let direct = &limit.maps[a][&chain.stages[a].base.names[x]];
                if via != direct {
                    out.push((a, b, chain.stages[a].base.names[x].clone()));
                }
            }
        }
    }
    Ok(out)
}

/// An isomorphism of A-models: a bijection of carriers preserving
/// membership, order, levels, `j`, and `i`.
pub fn find_isomorphism(
    a: &AModelF,
    b: &AModelF,
) -> Result<Option<BTreeMap<String, String>>, AModelError> {
    let (ma, mb) = (a.index()?, b.index()?);
    if ma.base.len() != mb.base.len()
        || ma.std_names != mb.std_names
        || ma.base.levels.len() != mb.base.levels.len()
    {
        return Ok(None);
    }
    let n = ma.base.len();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // i pins the standard range.
    for s in 0..ma.std_names.len() {
        let (x, y) = (ma.i[s], mb.i[s]);
        if image[x] != usize::MAX && image[x] != y {
            return Ok(None);
        }
        if image[x] == usize::MAX {
            if used[y] {
                return Ok(None);
            }
            image[x] = y;
            used[y] = true;
        }
    }
    let fits = |image: &[usize], x: usize, y: usize| -> bool {
        if ma.base.adj[x][x] != mb.base.adj[y][y]
            || ma
                .base
                .levels
                .iter()
                .zip(&mb.base.levels)
                .any(|(la, lb)| la[x] != lb[y])
        {
            return false;
        }
        for u in 0..n {
            let v = image[u];
            if v == usize::MAX {
                continue;
            }
            if ma.base.adj[u][x] != mb.base.adj[v][y]
                || ma.base.adj[x][u] != mb.base.adj[y][v]
                || (ma.rank[u] <= ma.rank[x]) != (mb.rank[v] <= mb.rank[y])
                || (ma.rank[x] <= ma.rank[u]) != (mb.rank[y] <= mb.rank[v])
            {
                return false;
            }
        }
        let (jx, jy) = (ma.base.j[x], mb.base.j[y]);
        if jx == x {
            return jy == y;
        }
        image[jx] == usize::MAX || image[jx] == jy
    };
    for x in 0..n {
        if image[x] != usize::MAX && !fits(&image, x, image[x]) {
            return Ok(None);
        }
    }
    fn search(
        x: usize,
        n: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        fits: &dyn Fn(&[usize], usize, usize) -> bool,
        ja: &[usize],
        jb: &[usize],
    ) -> bool {
        if x == n {
            return (0..n).all(|u| image[ja[u]] == jb[image[u]]);
        }
        if image[x] != usize::MAX {
            return search(x + 1, n, image, used, fits, ja, jb);
        }
        for y in 0..n {
            if used[y] || !fits(image, x, y) {
                continue;
            }
            // Predecessors under j constrain x as well.
            if (0..n).any(|u| ja[u] == x && image[u] != usize::MAX && jb[image[u]] != y) {
                continue;
            }
            image[x] = y;
            used[y] = true;
            if search(x + 1, n, image, used, fits, ja, jb) {
                return true;
            }
            image[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    let found = search(0, n, &mut image, &mut used, &fits, &ma.base.j, &mb.base.j);
    Ok(found.then(|| {
        (0..n)
            .map(|x| (ma.base.names[x].clone(), mb.base.names[image[x]].clone()))
            .collect()
    }))
}
