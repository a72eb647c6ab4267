//! Shared corpora and oracles for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use nfu_core::formulae::{alpha_rename, Formula};
use nfu_core::ramsey::LevelSequence;
use nfu_core::termmodel::{FilterTriple, SupportedFunction, Target, TermFormula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 4] = ["x", "y", "z", "w"];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn atoms() -> Vec<Formula> {
    let mut out = Vec::new();
    for a in VARS {
        for b in VARS {
            out.push(Formula::member(a, b));
        }
    }
    for (i, a) in VARS.iter().enumerate() {
        for b in &VARS[i + 1..] {
            out.push(Formula::eq(*a, *b));
        }
        out.push(Formula::is_set(*a));
    }
    out.push(Formula::pair("x", "y", "z"));
    out.push(Formula::pair("y", "z", "w"));
    out.push(Formula::pair("x", "x", "y"));
    out.push(Formula::pair("z", "w", "x"));
    out
}

fn connect(rng: &mut ChaCha8Rng, a: Formula, b: Formula) -> Formula {
    let a = if rng.gen_bool(0.2) {
        Formula::not(a)
    } else {
        a
    };
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::implies(a, b),
        _ => Formula::iff(a, b),
    }
}

fn quantify(rng: &mut ChaCha8Rng, mut phi: Formula) -> Formula {
    for v in phi.free_vars().into_iter().rev() {
        match rng.gen_range(0..3) {
            0 => phi = Formula::forall(v, phi),
            1 => phi = Formula::exists(v, phi),
            _ => {}
        }
    }
    phi
}

/// Every combination of up to three atoms over four variables, plus a
/// seeded sample of four to six atoms. Each variable is bound at most once.
pub fn formula_corpus() -> Vec<Formula> {
    let atoms = atoms();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out: Vec<Formula> = atoms.clone();
    let n = atoms.len();
    for i in 0..n {
        for j in i..n {
            out.push(connect(&mut rng, atoms[i].clone(), atoms[j].clone()));
            for k in j..n {
                if (i + j + k) % 3 == 0 {
                    let inner = connect(&mut rng, atoms[j].clone(), atoms[k].clone());
                    let phi = connect(&mut rng, atoms[i].clone(), inner);
                    out.push(quantify(&mut rng, phi));
                }
            }
        }
    }
    for _ in 0..2000 {
        let size = rng.gen_range(4..=6);
        let mut phi = atoms[rng.gen_range(0..n)].clone();
        for _ in 1..size {
            let a = atoms[rng.gen_range(0..n)].clone();
            phi = connect(&mut rng, a, phi);
        }
        out.push(quantify(&mut rng, phi));
    }
    out
}

fn collect_atoms(phi: &Formula, out: &mut Vec<Formula>) {
    match phi {
        Formula::Eq(..) | Formula::In(..) | Formula::IsSet(_) | Formula::Pair(..) => {
            out.push(phi.clone())
        }
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
    }
}

fn satisfied(atoms: &[Formula], t: &BTreeMap<String, i64>) -> bool {
    atoms.iter().all(|a| match a {
        Formula::Eq(v, w) => t[v] == t[w],
        Formula::In(v, w) => t[w] == t[v] + 1,
        Formula::IsSet(_) => true,
        Formula::Pair(u, v, w) => t[u] == t[v] && t[v] == t[w],
        _ => unreachable!(),
    })
}

/// Searches every assignment of types `0..=max_type` to the variables of
/// the renamed formula.
pub fn brute_stratifiable(phi: &Formula, max_type: i64) -> bool {
    let renamed = alpha_rename(phi);
    let mut atoms = Vec::new();
    collect_atoms(&renamed, &mut atoms);
    let vars: Vec<String> = renamed.all_vars().into_iter().collect();
    let mut t: BTreeMap<String, i64> = vars.iter().map(|v| (v.clone(), 0)).collect();
    fn go(
        k: usize,
        vars: &[String],
        t: &mut BTreeMap<String, i64>,
        atoms: &[Formula],
        max: i64,
    ) -> bool {
        if k == vars.len() {
            return satisfied(atoms, t);
        }
        for v in 0..=max {
            t.insert(vars[k].clone(), v);
            if go(k + 1, vars, t, atoms, max) {
                return true;
            }
        }
        false
    }
    go(0, &vars, &mut t, &atoms, max_type)
}

/// Whether an assignment from the stratifier satisfies every atom.
pub fn assignment_ok(phi: &Formula, assignment: &BTreeMap<String, u32>) -> bool {
    let renamed = alpha_rename(phi);
    let mut atoms = Vec::new();
    collect_atoms(&renamed, &mut atoms);
    let t: BTreeMap<String, i64> = assignment
        .iter()
        .map(|(k, &v)| (k.clone(), i64::from(v)))
        .collect();
    renamed.all_vars().iter().all(|v| t.contains_key(v)) && satisfied(&atoms, &t)
}

/// The numbers `0..k` with `<`.
pub fn numbers(k: usize) -> Target {
    let mut t = Target::plain((0..k).map(|v| v.to_string()));
    let less = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| vec![a.to_string(), b.to_string()]))
        .collect();
    t.relations.insert("<".into(), less);
    t.j = Some((0..k).map(|v| (v.to_string(), v.to_string())).collect());
    t
}

/// A function declared on `declared` that really reads only `reads`, with
/// one of a few value shapes.
pub fn padded_function(
    k: usize,
    declared: &[i64],
    reads: &[i64],
    shape: usize,
) -> SupportedFunction {
    let pos: Vec<usize> = reads
        .iter()
        .map(|r| declared.iter().position(|d| d == r).unwrap())
        .collect();
    SupportedFunction::from_fn(declared.to_vec(), k, |t| {
        let vals: Vec<usize> = pos.iter().map(|&p| t[p]).collect();
        let v = match shape % 4 {
            0 => vals.first().copied().unwrap_or(3),
            1 => vals.iter().copied().max().unwrap_or(2),
            2 => vals.first().map_or(1, |v| v / 2),
            _ => vals.iter().sum::<usize>().min(k - 1),
        };
        v.to_string()
    })
}

/// Seeded functions on windows of width at most four, with the window.
pub fn term_corpus(k: usize, count: usize, seed: u64) -> Vec<(SupportedFunction, (i64, i64))> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let width = rng.gen_range(1..=3i64);
            let lo = rng.gen_range(-2..=1i64);
            let declared: Vec<i64> = (lo..lo + width).collect();
            let reads: Vec<i64> = declared
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let f = padded_function(k, &declared, &reads, rng.gen_range(0..4));
            (f, (lo, lo + width - 1))
        })
        .collect()
}

pub fn random_triple(
    rng: &mut ChaCha8Rng,
    window: (i64, i64),
    levels: &LevelSequence,
) -> FilterTriple {
    let s: Vec<i64> = (window.0..=window.1)
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    let k = levels.k;
    FilterTriple {
        s,
        m: rng.gen_range(0..levels.levels.len()),
        g: (0..k)
            .map(|x| (x + rng.gen_range(0..3)).min(k - 1) * usize::from(rng.gen_bool(0.7)))
            .collect(),
    }
}

/// A random boolean combination of `<` and `=` atoms over `n` functions.
pub fn random_term_formula(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> TermFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        let rel = if rng.gen_bool(0.5) { "<" } else { "=" };
        return TermFormula::Atom {
            relation: rel.into(),
            args: vec![rng.gen_range(0..n), rng.gen_range(0..n)],
        };
    }
    match rng.gen_range(0..3) {
        0 => TermFormula::Not {
            arg: Box::new(random_term_formula(rng, n, depth - 1)),
        },
        1 => TermFormula::And {
            args: vec![
                random_term_formula(rng, n, depth - 1),
                random_term_formula(rng, n, depth - 1),
            ],
        },
        _ => TermFormula::Or {
            args: vec![
                random_term_formula(rng, n, depth - 1),
                random_term_formula(rng, n, depth - 1),
            ],
        },
    }
}

/// One invocation per subcommand, on the checked-in fixtures.
pub fn cli_invocations() -> Vec<Vec<String>> {
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let lines: Vec<Vec<String>> = vec![
        vec!["stratify".into(), "not (x in x)".into()],
        vec!["stratify".into(), "x in y and y in z".into()],
        vec![
            "comprehend".into(),
            "v0 in y".into(),
            "--param".into(),
            "y".into(),
        ],
        vec!["set".into(), "validate".into(), f("ord2.json")],
        vec!["set".into(), "collapse".into(), f("ord2.json")],
        vec!["set".into(), "iso".into(), f("ord2.json"), f("ord1.json")],
        vec!["set".into(), "e".into(), f("ord1.json"), f("ord2.json")],
        vec!["set".into(), "t".into(), f("ord2.json")],
        vec!["set".into(), "ord".into(), "3".into()],
        vec!["set".into(), "decode".into(), f("ord2.json")],
        vec!["q".into(), "build".into(), f("v3.json")],
        vec!["q".into(), "audit-ext".into(), f("two_empty.json")],
        vec!["q".into(), "audit-pair".into(), f("v3.json")],
        vec![
            "q".into(),
            "comprehension".into(),
            f("v3.json"),
            "--formula".into(),
            "v0 = v0".into(),
        ],
        vec![
            "q".into(),
            "criterion1".into(),
            f("v3.json"),
            "--chain".into(),
            "{},{{}}".into(),
        ],
        vec![
            "q".into(),
            "code".into(),
            f("v3.json"),
            "--target".into(),
            "{}".into(),
        ],
        vec!["limit".into(), "compute".into(), f("diagram.json")],
        vec!["limit".into(), "check".into(), f("diagram.json")],
        vec!["limit".into(), "oracle".into(), f("diagram.json")],
        vec![
            "limit".into(),
            "sweep".into(),
            "--seed".into(),
            "5".into(),
            "--count".into(),
            "12".into(),
        ],
        vec![
            "ramsey".into(),
            "tree".into(),
            "--family".into(),
            f("family4.json"),
        ],
        vec![
            "ramsey".into(),
            "levels".into(),
            "--families".into(),
            f("families8.json"),
            "--depth".into(),
            "2".into(),
        ],
        vec![
            "ramsey".into(),
            "partition".into(),
            "--coloring".into(),
            f("coloring8.json"),
            "--levels".into(),
            f("levels8.json"),
        ],
        vec![
            "ramsey".into(),
            "measure".into(),
            "--set".into(),
            "5,6,7".into(),
            "--levels".into(),
            f("levels8.json"),
        ],
        vec![
            "ramsey".into(),
            "validate-tree".into(),
            f("binary3.json"),
            "--k".into(),
            "3".into(),
        ],
        vec![
            "term".into(),
            "eval".into(),
            f("padded.json"),
            "--point".into(),
            f("point.json"),
        ],
        vec![
            "term".into(),
            "equiv".into(),
            f("coord0.json"),
            f("coord1.json"),
            "--target".into(),
            f("nums8.json"),
        ],
        vec![
            "term".into(),
            "rel".into(),
            "--relation".into(),
            "<".into(),
            f("coord0.json"),
            f("coord1.json"),
            "--target".into(),
            f("nums8.json"),
        ],
        vec!["term".into(), "shift".into(), f("coord0.json")],
        vec![
            "term".into(),
            "support".into(),
            f("padded.json"),
            "--window=-1,1".into(),
            "--target".into(),
            f("nums8.json"),
        ],
        vec![
            "term".into(),
            "jprime".into(),
            f("coord0.json"),
            "--target".into(),
            f("nums8.json"),
        ],
        vec![
            "term".into(),
            "code".into(),
            "--frame".into(),
            f("frame8.json"),
            "--subset".into(),
            "o1,o4".into(),
        ],
        vec!["schema".into(), "diagram".into()],
    ];
    lines
}
