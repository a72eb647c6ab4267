//! The `nfu` command line. Inputs are JSON files, outputs are pretty JSON
//! on stdout (the assignment tree and collapses print as text).
//!
//! Exit codes: 0 on success, including audits that report a failing
//! property; 1 when a domain precondition fails; 2 on usage errors and
//! unreadable or malformed input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::amodels::random::{random_diagram, Extension};
use crate::amodels::{self, AModelF, Diagram};
use crate::formulae::{self, Formula};
use crate::qmodel::{self, BaseStructure};
use crate::ramsey::{
    self, ColoringFamily, LevelSequence, Thinning, TreePresentation, Truncation, TupleTable,
};
use crate::setcode::{self, PointedGraph};
use crate::termmodel::{self, SupportedFunction, Target, WindowPoint};

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

type Res = Result<String, CliError>;

#[derive(Parser)]
#[command(
    name = "nfu",
    about = "Finite-scale constructions around models of NFU"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide stratifiability; prints an assignment or a cycle certificate.
    Stratify { formula: String },
    /// Print the comprehension axiom for a stratified formula in `v0`.
    Comprehend {
        formula: String,
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Set codes: pointed graphs and their collapses.
    #[command(subcommand)]
    Set(SetCmd),
    /// The Q construction over a base structure.
    #[command(subcommand)]
    Q(QCmd),
    /// A-models and direct limits of diagrams.
    #[command(subcommand)]
    Limit(LimitCmd),
    /// Assignment trees, level sequences and partition certificates.
    #[command(subcommand)]
    Ramsey(RamseyCmd),
    /// Supported functions and the term model.
    #[command(subcommand)]
    Term(TermCmd),
    /// Print the JSON schema of an input or output type.
    Schema { name: String },
}

#[derive(Subcommand)]
enum SetCmd {
    /// Check extensionality, well-foundedness and that every node reaches the top.
    Validate { graph: PathBuf },
    /// Print the coded hereditarily finite set.
    Collapse { graph: PathBuf },
    /// Whether two graphs code the same set.
    Iso { a: PathBuf, b: PathBuf },
    /// Whether the first graph codes a member of the second.
    E {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = setcode::DEFAULT_EMBED_CAP)]
        cap: usize,
    },
    /// The graph coding the set of singletons of members.
    T { graph: PathBuf },
    /// The canonical code of the ordinal `n`.
    Ord {
        n: usize,
        #[arg(long, default_value_t = setcode::DEFAULT_ORDINAL_CAP)]
        cap: usize,
    },
    /// The ordinal a graph codes, or null.
    Decode { graph: PathBuf },
}

#[derive(Subcommand)]
enum QCmd {
    /// Build the Q-model and print its summary.
    Build { base: PathBuf },
    /// Audit extensionality over set-nodes.
    AuditExt { base: PathBuf },
    /// Audit the pairing predicate.
    AuditPair {
        base: PathBuf,
        /// Only judge pairs that have a pair node.
        #[arg(long)]
        representable: bool,
    },
    /// First set-node witnessing a comprehension instance.
    Comprehension {
        base: PathBuf,
        #[arg(long)]
        formula: String,
        /// Parameter bindings `name=node`.
        #[arg(long = "env")]
        env: Vec<String>,
    },
    /// Whether fixing a chain position forces every earlier one fixed.
    Criterion1 {
        base: PathBuf,
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
    },
    /// First node whose fixed members are exactly the target.
    Code {
        base: PathBuf,
        #[arg(long, value_delimiter = ',')]
        target: Vec<String>,
    },
}

#[derive(Subcommand)]
enum LimitCmd {
    /// Direct limit of a diagram.
    Compute { diagram: PathBuf },
    /// Check every stage and map of a diagram.
    Check {
        diagram: PathBuf,
        #[arg(long, default_value_t = amodels::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Colimit computed as a quotient of the disjoint union of stages.
    Oracle { diagram: PathBuf },
    /// Compare direct and oracle limits on seeded random diagrams.
    Sweep {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum RamseyCmd {
    /// Run the basic module and print the assignment tree.
    Tree {
        #[arg(long)]
        family: PathBuf,
        /// Elements to insert, in order; defaults to `0..K`.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// Build a level sequence from coloring families.
    Levels {
        /// A JSON array of coloring families.
        #[arg(long)]
        families: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        thinning: Option<PathBuf>,
    },
    /// Search for a partition certificate.
    Partition {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        levels: Option<PathBuf>,
        #[command(flatten)]
        trunc: TruncArgs,
    },
    /// The measure `nu` of a subset of `0..K`.
    Measure {
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
        #[arg(long)]
        levels: PathBuf,
        #[arg(long, default_value_t = 2)]
        min_tail: usize,
    },
    /// Check a tree presentation.
    ValidateTree {
        tree: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Clone, Copy)]
struct TruncArgs {
    #[arg(long, default_value_t = 2)]
    min_tail: usize,
    #[arg(long, default_value_t = 2)]
    min_support: usize,
}

impl From<TruncArgs> for Truncation {
    fn from(t: TruncArgs) -> Self {
        Truncation {
            min_tail: t.min_tail,
            min_support: t.min_support,
        }
    }
}

#[derive(Args)]
struct Scale {
    #[arg(long)]
    target: PathBuf,
    /// Level sequence; defaults to the single level `0..K`.
    #[arg(long)]
    levels: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[command(flatten)]
    trunc: TruncArgs,
}

#[derive(Subcommand)]
enum TermCmd {
    /// Evaluate a supported function at a window point.
    Eval {
        function: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// Decide equivalence of two supported functions.
    Equiv {
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        scale: Scale,
    },
    /// Decide a relation of the target on supported functions.
    Rel {
        #[arg(long)]
        relation: String,
        args: Vec<PathBuf>,
        #[command(flatten)]
        scale: Scale,
    },
    /// Shift the support by one.
    Shift { function: PathBuf },
    /// Minimal block support inside a window.
    Support {
        function: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        window: Vec<i64>,
        #[command(flatten)]
        scale: Scale,
    },
    /// Shift and apply `j` to every value.
    Jprime {
        function: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// The function `h` coding a subset of the standard part.
    Code {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn out<T: Serialize>(v: &T) -> Res {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    Ok(s)
}

fn parse(text: &str) -> Result<Formula, CliError> {
    formulae::parse_formula(text).map_err(|e| CliError::Usage(e.to_string()))
}

fn levels_or_trivial(path: &Option<PathBuf>, k: usize) -> Result<LevelSequence, CliError> {
    match path {
        Some(p) => read(p),
        None => Ok(LevelSequence::trivial(k)),
    }
}

fn stratify_cmd(formula: &str) -> Res {
    let phi = parse(formula)?;
    match formulae::stratify(&phi) {
        Ok(s) => out(&json!({ "stratified": true, "assignment": s.assignment })),
        Err(f) => {
            out(&json!({ "stratified": false, "cycle": f.cycle, "offset_sum": f.offset_sum() }))
        }
    }
}

fn set_cmd(c: SetCmd) -> Res {
    match c {
        SetCmd::Validate { graph } => out(&setcode::validate(&read(&graph)?).map_err(domain)?),
        SetCmd::Collapse { graph } => Ok(format!(
            "{}\n",
            setcode::collapse(&read(&graph)?).map_err(domain)?
        )),
        SetCmd::Iso { a, b } => {
            let r = setcode::iso_eq(&read(&a)?, &read(&b)?).map_err(domain)?;
            out(&json!({ "isomorphic": r }))
        }
        SetCmd::E { a, b, cap } => {
            out(&setcode::e_rel_with_cap(&read(&a)?, &read(&b)?, cap).map_err(domain)?)
        }
        SetCmd::T { graph } => {
            let g: PointedGraph = read(&graph)?;
            g.validate().map_err(domain)?;
            out(&setcode::usc_t(&g))
        }
        SetCmd::Ord { n, cap } => out(&setcode::ordinal_code_capped(n, cap).map_err(domain)?),
        SetCmd::Decode { graph } => {
            let n = setcode::decode_ordinal(&read(&graph)?).map_err(domain)?;
            out(&json!({ "ordinal": n }))
        }
    }
}

fn q_cmd(c: QCmd) -> Res {
    let build = |p: &Path| -> Result<qmodel::QModel, CliError> {
        qmodel::build_q(&read::<BaseStructure>(p)?).map_err(domain)
    };
    match c {
        QCmd::Build { base } => out(&build(&base)?.summary()),
        QCmd::AuditExt { base } => out(&qmodel::audit_extensionality(&build(&base)?)),
        QCmd::AuditPair {
            base,
            representable,
        } => {
            let r = qmodel::audit_pairing(&build(&base)?);
            out(&if representable {
                r.ignoring_missing_pairs()
            } else {
                r
            })
        }
        QCmd::Comprehension { base, formula, env } => {
            let q = build(&base)?;
            let phi = parse(&formula)?;
            let mut bindings = BTreeMap::new();
            for e in env {
                let (k, v) = e
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("binding {e:?} is not name=node")))?;
                bindings.insert(k.to_string(), v.to_string());
            }
            let w = qmodel::audit_comprehension(&q, &phi, &bindings).map_err(domain)?;
            out(&json!({ "formula": phi.to_string(), "witness": w }))
        }
        QCmd::Criterion1 { base, chain } => {
            let holds = qmodel::criterion1_check(&read(&base)?, &chain).map_err(domain)?;
            out(&json!({ "holds": holds }))
        }
        QCmd::Code { base, target } => {
            let code = qmodel::coded_subsets_report(&read(&base)?, &target).map_err(domain)?;
            out(&json!({ "code": code }))
        }
    }
}

fn limit_cmd(c: LimitCmd) -> Res {
    match c {
        LimitCmd::Compute { diagram } => {
            out(&amodels::direct_limit(&read(&diagram)?).map_err(domain)?)
        }
        LimitCmd::Oracle { diagram } => {
            out(&amodels::oracle_limit(&read(&diagram)?).map_err(domain)?)
        }
        LimitCmd::Check { diagram, depth } => {
            out(&amodels::check_diagram(&read(&diagram)?, depth).map_err(domain)?)
        }
        LimitCmd::Sweep { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut iso, mut cocone) = (0, 0);
            for n in 0..count {
                let kind = if n % 2 == 0 {
                    Extension::Atoms
                } else {
                    Extension::Rich
                };
                let d: Diagram = random_diagram(&mut rng, kind, 4, 8);
                let direct = amodels::direct_limit(&d).map_err(domain)?;
                let oracle = amodels::oracle_limit(&d).map_err(domain)?;
                iso += usize::from(
                    amodels::find_isomorphism(&direct.model, &oracle.model)
                        .map_err(domain)?
                        .is_some(),
                );
                cocone += usize::from(
                    amodels::cocone_violations(&d, &direct)
                        .map_err(domain)?
                        .is_empty(),
                );
            }
            out(&json!({ "seed": seed, "diagrams": count, "isomorphic": iso, "cocone_ok": cocone }))
        }
    }
}

fn ramsey_cmd(c: RamseyCmd) -> Res {
    match c {
        RamseyCmd::Tree { family, set } => {
            let fam: ColoringFamily = read(&family)?;
            fam.validate().map_err(domain)?;
            let b = set.unwrap_or_else(|| (0..fam.k()).collect());
            let o = ramsey::basic_module(&b, &fam).map_err(domain)?;
            let elems: Vec<String> = o.b_prime.iter().map(usize::to_string).collect();
            Ok(format!("{}B' = {{{}}}\n", o.tree.render(), elems.join(",")))
        }
        RamseyCmd::Levels {
            families,
            depth,
            thinning,
        } => {
            let fams: Vec<ColoringFamily> = read(&families)?;
            let k = fams
                .first()
                .map(ColoringFamily::k)
                .ok_or_else(|| CliError::Usage("no families given".into()))?;
            let used = &fams[..depth.unwrap_or(fams.len()).min(fams.len())];
            let th: Option<Thinning> = thinning.map(|p| read(&p)).transpose()?;
            out(&ramsey::length_construction(k, used, th.as_ref()).map_err(domain)?)
        }
        RamseyCmd::Partition {
            coloring,
            levels,
            trunc,
        } => {
            let table: TupleTable = read(&coloring)?;
            let col = ramsey::Coloring::from_table(&table).map_err(domain)?;
            let levels = levels_or_trivial(&levels, col.k())?;
            let outcome = ramsey::partition_find(&col, &levels, trunc.into()).map_err(domain)?;
            let verification = outcome
                .cert()
                .map(|c| ramsey::verify_partition(&col, c, &levels))
                .transpose()
                .map_err(domain)?;
            out(&json!({ "result": outcome, "verification": verification }))
        }
        RamseyCmd::Measure {
            set,
            levels,
            min_tail,
        } => {
            let levels: LevelSequence = read(&levels)?;
            levels.validate().map_err(domain)?;
            out(&ramsey::nu_measure(&set, &levels, min_tail))
        }
        RamseyCmd::ValidateTree { tree, k } => {
            let t: TreePresentation = read(&tree)?;
            out(&ramsey::tree_validators(&t, k).map_err(domain)?)
        }
    }
}

fn term_cmd(c: TermCmd) -> Res {
    let setup = |s: &Scale| -> Result<(Target, LevelSequence, Truncation), CliError> {
        Ok((
            read(&s.target)?,
            levels_or_trivial(&s.levels, s.k)?,
            s.trunc.into(),
        ))
    };
    match c {
        TermCmd::Eval { function, point } => {
            let f: SupportedFunction = read(&function)?;
            let x: WindowPoint = read(&point)?;
            out(&json!({ "value": termmodel::eval_supported(&f, &x).map_err(domain)? }))
        }
        TermCmd::Equiv { f, g, scale } => {
            let (t, l, tr) = setup(&scale)?;
            out(&termmodel::equiv(&read(&f)?, &read(&g)?, &t, &l, tr).map_err(domain)?)
        }
        TermCmd::Rel {
            relation,
            args,
            scale,
        } => {
            let (t, l, tr) = setup(&scale)?;
            let fs: Vec<SupportedFunction> =
                args.iter().map(|p| read(p)).collect::<Result<_, _>>()?;
            let refs: Vec<&SupportedFunction> = fs.iter().collect();
            out(&termmodel::relation_holds(&relation, &refs, &t, &l, tr).map_err(domain)?)
        }
        TermCmd::Shift { function } => out(&termmodel::shift_k(&read(&function)?)),
        TermCmd::Support {
            function,
            window,
            scale,
        } => {
            let (t, l, tr) = setup(&scale)?;
            let &[lo, hi] = window.as_slice() else {
                return Err(CliError::Usage("--window takes lo,hi".into()));
            };
            let w = (lo, hi);
            out(&termmodel::min_block_support(&read(&function)?, &t, &l, w, tr).map_err(domain)?)
        }
        TermCmd::Jprime { function, target } => {
            let t: Target = read(&target)?;
            let j =
                t.j.as_ref()
                    .ok_or_else(|| domain(termmodel::TermError::NoJ))?;
            out(&termmodel::compose_jprime(&read(&function)?, j).map_err(domain)?)
        }
        TermCmd::Code { frame, subset, k } => {
            let frame: AModelF = read(&frame)?;
            out(&termmodel::code_subset(&frame, &subset, k).map_err(domain)?)
        }
    }
}

fn schema_cmd(name: &str) -> Res {
    use schemars::schema_for;
    let s = match name {
        "pointed-graph" => schema_for!(PointedGraph),
        "validity" => schema_for!(setcode::Validity),
        "e-result" => schema_for!(setcode::ERelResult),
        "stratification" => schema_for!(formulae::Stratification),
        "strat-failure" => schema_for!(formulae::StratFailure),
        "base-structure" => schema_for!(BaseStructure),
        "q-summary" => schema_for!(qmodel::QSummary),
        "audit-report" => schema_for!(qmodel::AuditReport),
        "amodel" => schema_for!(AModelF),
        "diagram" => schema_for!(Diagram),
        "diagram-report" => schema_for!(amodels::DiagramReport),
        "limit" => schema_for!(amodels::Limit),
        "coloring-family" => schema_for!(ColoringFamily),
        "level-sequence" => schema_for!(LevelSequence),
        "thinning" => schema_for!(Thinning),
        "tuple-table" => schema_for!(TupleTable),
        "partition-outcome" => schema_for!(ramsey::PartitionOutcome),
        "nu-result" => schema_for!(ramsey::NuResult),
        "tree" => schema_for!(TreePresentation),
        "tree-report" => schema_for!(ramsey::TreeReport),
        "supported-function" => schema_for!(SupportedFunction),
        "target" => schema_for!(Target),
        "window-point" => schema_for!(WindowPoint),
        "decision" => schema_for!(termmodel::Decision),
        "block-support" => schema_for!(termmodel::BlockSupportReport),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown schema {name:?}; try one of {}",
                SCHEMAS.join(", ")
            )))
        }
    };
    out(&s)
}

/// Names accepted by `nfu schema`.
pub const SCHEMAS: &[&str] = &[
    "pointed-graph",
    "validity",
    "e-result",
    "stratification",
    "strat-failure",
    "base-structure",
    "q-summary",
    "audit-report",
    "amodel",
    "diagram",
    "diagram-report",
    "limit",
    "coloring-family",
    "level-sequence",
    "thinning",
    "tuple-table",
    "partition-outcome",
    "nu-result",
    "tree",
    "tree-report",
    "supported-function",
    "target",
    "window-point",
    "decision",
    "block-support",
];

/// Parses `argv` (program name first) and runs one subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let ok = !e.use_stderr();
            let text = e.render().to_string();
            return Outcome {
                code: if ok { 0 } else { 2 },
                stdout: if ok { text.clone() } else { String::new() },
                stderr: if ok { String::new() } else { text },
            };
        }
    };
    let result = match cli.command {
        Command::Stratify { formula } => stratify_cmd(&formula),
        Command::Comprehend { formula, params } => parse(&formula).and_then(|phi| {
            let ax = formulae::comprehension_axiom(&phi, &params).map_err(domain)?;
            out(&json!({ "axiom": ax.to_string() }))
        }),
        Command::Set(c) => set_cmd(c),
        Command::Q(c) => q_cmd(c),
        Command::Limit(c) => limit_cmd(c),
        Command::Ramsey(c) => ramsey_cmd(c),
        Command::Term(c) => term_cmd(c),
        Command::Schema { name } => schema_cmd(&name),
    };
    match result {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: match e {
                CliError::Usage(_) => 2,
                CliError::Domain(_) => 1,
            },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
