use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tracealg::error::Error;
use tracealg::eval::GenericMatrixSpec;
use tracealg::generators::GeneratorTable;
use tracealg::identities::{fundamental_identity_n, nagata_higman};
use tracealg::presentation::hilbert::{default_cutoff, hilbert_prefix, presented_prefix};
use tracealg::presentation::{
    certify_relation_table, derksen_bound, generic_bound, hsop_bound, hsop_consistency, krull_dimension,
    minimal_generators, table_relations, BoundInput, CandidateStatus, CertifyConfig, HsopTable, RelationEngine,
    RelationTable,
};
use tracealg::reduction::{solve_reduction, ColumnOrder, Reducer, ReductionRule};
use tracealg::trace::TracePolynomial;
use tracealg::words::{parse_tuple, MultiDegree, Word};

const EXIT_PARSE: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_CUTOFF: u8 = 5;

#[derive(Parser)]
#[command(name = "tracealg", version, about = "Trace identities, trace reduction and presentations of trace algebras of generic matrices")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (0: all cores).
    #[arg(long, env = "TRACEALG_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    /// Seed for every randomized check.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Progress lines on standard error.
    #[arg(long, global = true)]
    progress: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Order {
    Canonical,
    BreadthFirst,
    Shuffled,
}

#[derive(Args, Clone)]
struct RuleArgs {
    /// Load the reduction rule from a JSON file instead of solving for it.
    #[arg(long)]
    rule: Option<PathBuf>,
    /// Column order used when solving for the rule.
    #[arg(long, value_enum, default_value_t = Order::BreadthFirst)]
    order: Order,
    /// Write the rule as JSON to this file.
    #[arg(long)]
    export_rule: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the fundamental trace identity F(M_1, ..., M_{n+1}).
    Identity {
        #[arg(short)]
        n: usize,
        /// Tuple of words, e.g. "(12,3,4)".
        tuple: String,
    },
    /// Compute (or load) the reduction rule; optionally rewrite traces in the
    /// generators.
    Reduce {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 3)]
        d: usize,
        #[command(flatten)]
        rule: RuleArgs,
        /// Words whose traces are rewritten in the generators, e.g. 1122.
        #[arg(long = "trace")]
        traces: Vec<String>,
        /// Generator table JSON (default: computed, or the built-in table for n = d = 3).
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Minimal generators of the trace algebra.
    Generators {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
        /// Use plain instead of traceless generic matrices.
        #[arg(long)]
        plain: bool,
        /// Largest generator degree (default: N(n)).
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Number of minimal relations per multidegree.
    Relations {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
        #[arg(long)]
        max_degree: u32,
        /// Generator table JSON (default: computed, or the built-in table for n = d = 3).
        #[arg(long)]
        generators: Option<PathBuf>,
        /// Print the relations themselves.
        #[arg(long)]
        list: bool,
    },
    /// Certify a relation table.
    Certify {
        /// Relation table JSON (default: the built-in table for n = d = 3).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Generator table JSON (default: the built-in table).
        #[arg(long)]
        generators: Option<PathBuf>,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        /// Total degree up to which vanishing is checked symbolically.
        #[arg(long, default_value_t = 9)]
        symbolic_degree: u32,
        /// Random points for the vanishing check above the symbolic degree.
        #[arg(long, default_value_t = 5)]
        points: usize,
        /// Fail on header/letter-count mismatches instead of correcting them.
        #[arg(long)]
        strict_headers: bool,
        /// Skip the completeness check.
        #[arg(long)]
        no_completeness: bool,
        #[arg(long, default_value_t = 4000)]
        max_monomials: usize,
        /// Above the symbolic degree, settle unmet rank bounds exactly up to
        /// this many monomials.
        #[arg(long, default_value_t = 400)]
        exact_monomials: usize,
        /// Include reduced forms in the report.
        #[arg(long)]
        forms: bool,
        /// Also fail when a multidegree is provably incomplete.
        #[arg(long)]
        require_complete: bool,
    },
    /// Degree bounds for the relations.
    Bound {
        /// Generator degrees as DEGxCOUNT, e.g. 6x10,5x9.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<String>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        /// Parameter degrees as DEGxCOUNT; switches to the quotient bound.
        #[arg(long, value_delimiter = ',')]
        hsop: Vec<String>,
        /// The generic bound for n x n matrices and d letters, as N,D.
        #[arg(long, value_delimiter = ',')]
        generic: Vec<usize>,
    },
    /// Consistency of the built-in homogeneous system of parameters.
    Hsop,
    /// Hilbert function, directly and from a presentation.
    Hilbert {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: u32,
        /// Also compute it from the generators and relations.
        #[arg(long)]
        presented: bool,
        /// Largest degree allowed (default: none for n <= 2, 7 for n = 3).
        #[arg(long)]
        cutoff: Option<u32>,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::EmptyWord
        | Error::LetterOutOfRange { .. }
        | Error::Arity { .. }
        | Error::UnassignedLetter(_)
        | Error::Json(_)
        | Error::Dimension(_)
        | Error::TooFewDegrees { .. } => EXIT_PARSE,
        Error::Verification(_) | Error::NoSolution => EXIT_VERIFICATION,
        Error::Unsupported(_) | Error::DegreeTooSmall { .. } | Error::RewriteGap(_) => EXIT_UNSUPPORTED,
        Error::CutoffExceeded(_) => EXIT_CUTOFF,
    }
}

type Out = std::result::Result<(String, Value), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.run.threads > 0 {
        set_threads(cli.run.threads);
    }
    let res = run(&cli);
    match res {
        Ok((text, value)) => {
            emit(&cli.run, &text, &value);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(feature = "parallel")]
fn set_threads(k: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: usize) {}

fn emit(run: &RunConfig, text: &str, value: &Value) {
    match run.format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json")),
    }
}

/// Prints the report (for failing checks) before reporting the failure.
fn emit_and_fail(run: &RunConfig, text: &str, value: &Value, msg: String) -> Out {
    emit(run, text, value);
    Err(Failure::Check(msg))
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn progress(run: &RunConfig, msg: impl FnOnce() -> String) {
    if run.progress {
        eprintln!("{}", msg());
    }
}

fn run(cli: &Cli) -> Out {
    let run = &cli.run;
    match &cli.cmd {
        Command::Identity { n, tuple } => cmd_identity(*n, tuple),
        Command::Reduce { n, d, rule, traces, generators } => cmd_reduce(run, *n, *d, rule, traces, generators.as_deref()),
        Command::Generators { n, d, plain, max_degree } => cmd_generators(*n, *d, *plain, *max_degree),
        Command::Relations { n, d, max_degree, generators, list } => {
            cmd_relations(run, *n, *d, *max_degree, generators.as_deref(), *list)
        }
        Command::Certify {
            data,
            generators,
            rule,
            max_degree,
            symbolic_degree,
            points,
            strict_headers,
            no_completeness,
            max_monomials,
            exact_monomials,
            forms,
            require_complete,
        } => {
            let cfg = CertifyConfig {
                symbolic_degree: *symbolic_degree,
                points: *points,
                seed: run.seed,
                max_degree: *max_degree,
                strict_headers: *strict_headers,
                completeness: !no_completeness,
                max_monomials: *max_monomials,
                exact_monomials: *exact_monomials,
                include_forms: *forms,
                progress: run.progress,
            };
            cmd_certify(run, data.as_deref(), generators.as_deref(), rule, cfg, *require_complete)
        }
        Command::Bound { degrees, dim, a, hsop, generic } => cmd_bound(degrees, *dim, *a, hsop, generic),
        Command::Hsop => cmd_hsop(run),
        Command::Hilbert { n, d, k, presented, cutoff } => cmd_hilbert(run, *n, *d, *k, *presented, *cutoff),
    }
}

/// Letters are single digits, so the alphabet is at most 9.
fn parse_words(text: &str) -> tracealg::error::Result<Vec<Word>> {
    parse_tuple(text, 9)
}

fn cmd_identity(n: usize, tuple: &str) -> Out {
    let args = parse_words(tuple)?;
    let f = fundamental_identity_n(n, &args)?;
    let text = f.to_bracket();
    Ok((text.clone(), json!({ "n": n, "tuple": tuple, "bracket": text, "terms": f.to_json_terms() })))
}

fn load_rule(run: &RunConfig, n: usize, args: &RuleArgs) -> std::result::Result<ReductionRule, Failure> {
    let rule = match &args.rule {
        Some(path) => {
            let rule = ReductionRule::from_json_str(&read(path)?)?;
            if rule.n != n {
                return Err(Error::Dimension(format!("rule is for n = {}, asked for n = {n}", rule.n)).into());
            }
            rule.verify(5, run.seed)?;
            rule
        }
        None => {
            let order = match args.order {
                Order::Canonical => ColumnOrder::Canonical,
                Order::BreadthFirst => ColumnOrder::BreadthFirst,
                Order::Shuffled => ColumnOrder::Shuffled(run.seed),
            };
            progress(run, || format!("solving the reduction system for n = {n}"));
            solve_reduction(n, order)?
        }
    };
    if let Some(path) = &args.export_rule {
        let text = serde_json::to_string_pretty(&rule.to_json()).expect("json");
        std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(rule)
}

fn generator_table(n: usize, d: usize, path: Option<&Path>) -> std::result::Result<GeneratorTable, Failure> {
    let table = match path {
        Some(p) => GeneratorTable::from_json_str(&read(p)?)?,
        None if n == 3 && d == 3 => GeneratorTable::c33(),
        None => minimal_generators(n, d, &GenericMatrixSpec::traceless(n, d), nagata_higman(n)? as u32)?,
    };
    if table.n != n || table.d != d {
        return Err(Error::Dimension(format!("generator table is for ({}, {}), asked for ({n}, {d})", table.n, table.d)).into());
    }
    Ok(table)
}

fn cmd_reduce(run: &RunConfig, n: usize, d: usize, args: &RuleArgs, traces: &[String], gens: Option<&Path>) -> Out {
    let rule = load_rule(run, n, args)?;
    let mut text = format!("Tr(X_1...X_{}) = {}", rule.letters, rule.rhs.to_bracket());
    let mut value = json!({ "rule": rule.to_json() });
    if !traces.is_empty() {
        let table = generator_table(n, d, gens)?;
        let labels = table.labels();
        let reducer = Reducer::new(rule, table)?;
        let mut out = Vec::new();
        for t in traces {
            let letters: Vec<u8> = t
                .chars()
                .map(|c| c.to_digit(10).map(|x| x as u8).ok_or_else(|| Error::Parse(format!("bad word {t}"))))
                .collect::<tracealg::error::Result<_>>()?;
            let p = TracePolynomial::trace_of(&letters)?;
            if p.max_letter() as usize > d {
                return Err(Error::LetterOutOfRange { letter: p.max_letter(), d }.into());
            }
            let r = reducer.apply(&p)?;
            text.push_str(&format!("\n[{t}] = {}", r.display(&labels)));
            out.push(json!({ "trace": t, "reduced": r.to_json(&labels) }));
        }
        value["traces"] = Value::Array(out);
    }
    Ok((text, value))
}

fn cmd_generators(n: usize, d: usize, plain: bool, max_degree: Option<u32>) -> Out {
    let spec = if plain { GenericMatrixSpec::plain(n, d) } else { GenericMatrixSpec::traceless(n, d) };
    let max = match max_degree {
        Some(m) => m,
        None => nagata_higman(n)? as u32,
    };
    let table = minimal_generators(n, d, &spec, max)?;
    let mut text = format!("{} generators; multiplicities by degree:", table.len());
    for (deg, k) in table.multiplicities() {
        text.push_str(&format!(" {deg}^{k}"));
    }
    for g in &table.entries {
        text.push_str(&format!("\n{}\t{}\t{}", g.label, g.multidegree, g.describe()));
    }
    Ok((text, table.to_json()))
}

fn cmd_relations(run: &RunConfig, n: usize, d: usize, max_degree: u32, gens: Option<&Path>, list: bool) -> Out {
    let table = generator_table(n, d, gens)?;
    let labels = table.labels();
    let engine = RelationEngine::new(table)?;
    progress(run, || format!("minimal relations up to degree {max_degree}"));
    let rels = engine.minimal_relations(max_degree)?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut by_md = BTreeMap::new();
    for r in &rels {
        *by_md.entry(r.multidegree.clone()).or_insert(0usize) += 1;
    }
    let mut text = format!("{} minimal relations up to degree {max_degree}", rels.len());
    for (md, k) in &by_md {
        text.push_str(&format!("\n{md}\t{k}"));
        counts.insert(md.to_string(), *k);
    }
    let mut value = json!({ "n": n, "d": d, "max_degree": max_degree, "total": rels.len(), "counts": counts });
    if list {
        for r in &rels {
            text.push_str(&format!("\n{}: {}", r.multidegree, r.poly.display(&labels)));
        }
        value["relations"] = Value::Array(
            rels.iter()
                .map(|r| json!({ "multidegree": r.multidegree.0, "terms": r.poly.to_json(&labels) }))
                .collect(),
        );
    }
    Ok((text, value))
}

fn cmd_certify(
    run: &RunConfig,
    data: Option<&Path>,
    gens: Option<&Path>,
    args: &RuleArgs,
    cfg: CertifyConfig,
    require_complete: bool,
) -> Out {
    let table = match data {
        Some(p) => RelationTable::from_json_str(&read(p)?)?,
        None => RelationTable::c33(),
    };
    let generators = generator_table(table.n, table.d, gens)?;
    let rule = load_rule(run, table.n, args)?;
    let reducer = Reducer::new(rule, generators)?;
    let mut candidates = table.candidates()?;
    let report = certify_relation_table(&mut candidates, &reducer, &cfg)?;
    let mut text = String::new();
    for c in &report.candidates {
        let mut line = format!("{}\t{}\t{:?}", c.tuple, format_md(&c.multidegree), c.status);
        if c.header_mismatch {
            line.push_str(&format!("\theader {} corrected", format_md(&c.header)));
        }
        if let Some(dup) = &c.duplicate_of {
            line.push_str(&format!("\tduplicate of {dup}"));
        }
        if let (Some(stage), Some(msg)) = (&c.failed_stage, &c.message) {
            line.push_str(&format!("\t({stage}) {msg}"));
        }
        text.push_str(&line);
        text.push('\n');
    }
    for m in &report.multidegrees {
        text.push_str(&format!(
            "{}\tmonomials {}\tlower {}\twith candidates {}\trelations {}\t{:?} ({})\n",
            format_md(&m.multidegree),
            m.monomials,
            m.lower_rank,
            m.rank_with_candidates,
            match (m.relation_dim, m.relation_dim_upper) {
                (Some(k), _) => k.to_string(),
                (None, Some(u)) => format!("<= {u}"),
                _ => "?".into(),
            },
            m.completeness,
            m.method
        ));
    }
    text.push_str(&format!(
        "certified {}, duplicates {}, failed {}, incomplete multidegrees {}, unverified multidegrees {}",
        report.certified, report.duplicates, report.failed, report.incomplete_multidegrees, report.unverified_multidegrees
    ));
    let value = serde_json::to_value(&report).expect("json");
    if !report.passed {
        let failed = report.candidates.iter().filter(|c| c.status == CandidateStatus::Failed).count();
        return emit_and_fail(run, &text, &value, format!("{failed} candidates failed"));
    }
    if require_complete && report.incomplete_multidegrees > 0 {
        let msg = format!("{} multidegrees are incomplete", report.incomplete_multidegrees);
        return emit_and_fail(run, &text, &value, msg);
    }
    Ok((text, value))
}

fn parse_degree_list(items: &[String]) -> tracealg::error::Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in items {
        let (deg, count) = match item.split_once('x') {
            Some((a, b)) => (a, b),
            None => (item.as_str(), "1"),
        };
        let deg: u32 = deg.trim().parse().map_err(|_| Error::Parse(format!("bad degree in {item}")))?;
        let count: usize = count.trim().parse().map_err(|_| Error::Parse(format!("bad count in {item}")))?;
        out.extend(std::iter::repeat(deg).take(count));
    }
    Ok(out)
}

fn cmd_bound(degrees: &[String], dim: Option<usize>, a: Option<i64>, hsop: &[String], generic: &[usize]) -> Out {
    if !generic.is_empty() {
        let [n, d] = generic else {
            return Err(Error::Parse("--generic takes N,D".into()).into());
        };
        let b = generic_bound(*n, *d);
        return Ok((b.to_string(), json!({ "kind": "generic", "n": n, "d": d, "dim": krull_dimension(*n, *d), "bound": b })));
    }
    let degs = parse_degree_list(degrees)?;
    let a = a.ok_or_else(|| Error::Parse("--a is required".into()))?;
    if !hsop.is_empty() {
        let h = parse_degree_list(hsop)?;
        let b = hsop_bound(&degs, a, &h)?;
        return Ok((b.to_string(), json!({ "kind": "hsop", "degrees": degs, "a": a, "hsop_degrees": h, "bound": b })));
    }
    let dim = dim.ok_or_else(|| Error::Parse("--dim is required".into()))?;
    let b = derksen_bound(&BoundInput { degrees: degs.clone(), dim, a })?;
    Ok((b.to_string(), json!({ "kind": "degrees", "degrees": degs, "dim": dim, "a": a, "bound": b })))
}

fn cmd_hsop(run: &RunConfig) -> Out {
    let report = hsop_consistency(&HsopTable::c33(), &GeneratorTable::c33())?;
    let mut text = format!(
        "{} parameters (expected {}), elimination {}",
        report.count,
        report.expected_count,
        if report.elimination_well_defined { "well defined" } else { "ill defined" }
    );
    for p in &report.elimination_problems {
        text.push_str(&format!("\n  {p}"));
    }
    for e in &report.elements {
        text.push_str(&format!("\n{}\tdegree {}\t{}", e.label, e.degree, if e.eliminated { "eliminated" } else { "NOT eliminated" }));
    }
    for i in &report.identities {
        text.push_str(&format!("\n{} = {}\t{}", i.trace, i.computed, if i.ok { "ok" } else { "MISMATCH" }));
    }
    let value = serde_json::to_value(&report).expect("json");
    if !report.passed {
        return emit_and_fail(run, &text, &value, "parameter system is inconsistent".into());
    }
    Ok((text, value))
}

fn cmd_hilbert(run: &RunConfig, n: usize, d: usize, k: u32, presented: bool, cutoff: Option<u32>) -> Out {
    let cutoff = cutoff.or(default_cutoff(n));
    let spec = GenericMatrixSpec::traceless(n, d);
    progress(run, || format!("Hilbert function of ({n}, {d}) up to {k}"));
    let direct = hilbert_prefix(n, d, &spec, k, cutoff)?;
    let mut text = format!("k\tH(k)\n{}", rows(&direct, None));
    let mut value = json!({ "n": n, "d": d, "k": k, "direct": direct });
    if presented {
        let table = generator_table(n, d, None)?;
        let relations = if n == 3 && d == 3 {
            let reducer = Reducer::new(solve_reduction(3, ColumnOrder::BreadthFirst)?, table.clone())?;
            table_relations(&reducer, &RelationTable::c33(), k)?
        } else {
            RelationEngine::new(table.clone())?.minimal_relations(k)?
        };
        let pres = presented_prefix(&table, &relations, k, cutoff)?;
        text = format!("k\tH(k)\tpresented\n{}", rows(&direct, Some(&pres)));
        value["presented"] = json!(pres);
        value["agree"] = json!(pres == direct);
        if pres != direct {
            return emit_and_fail(run, &text, &value, "the two Hilbert functions differ".into());
        }
    }
    Ok((text, value))
}

fn rows(a: &[u64], b: Option<&[u64]>) -> String {
    a.iter()
        .enumerate()
        .map(|(i, x)| match b {
            Some(b) => format!("{i}\t{x}\t{}", b[i]),
            None => format!("{i}\t{x}"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn format_md(v: &[u32]) -> String {
    MultiDegree(v.to_vec()).to_string()
}
