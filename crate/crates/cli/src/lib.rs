//! The `epskit` command line.
//!
//! Exit codes: 0 on success, 1 when a check fails, a countermodel is found
//! or a search is exhausted, 2 on usage, input or parse errors.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use epskit::calculus::{check_proof, parse_proof, proof_stats, LineInfo, Proof, SystemId};
use epskit::elimination::{extended_herbrand, first_epsilon_theorem, Elimination};
use epskit::semantics::{check_consequence, CheckOptions, ConsequenceKind, Mode, Verdict};
use epskit::sequents::{
    bounded_cutfree_search, check_derivation, default_universe, example_names, is_cut_free, parse_derivation,
    parse_sequent, run_example, SearchLimits, SearchOutcome, SequentSystem,
};
use epskit::syntax::{Expr, Formula, Parser as ExprParser};
use epskit::translation::epsilon_translate_expr;

#[derive(Parser, Debug)]
#[command(name = "epskit", version, about = "Epsilon calculus toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term or formula and print it in normal form.
    Parse(TextInput),
    /// Print the ε-translation of a term or formula.
    Translate(TextInput),
    /// Check a proof file.
    Check(ProofInput),
    /// Print rank, order and degree statistics of a proof.
    Stats(ProofInput),
    /// Eliminate all critical formulas from a proof of an ε-free formula.
    Eliminate {
        #[command(flatten)]
        input: ProofInput,
        /// Allow identity axioms in the input proof.
        #[arg(long)]
        identity: bool,
        /// Print the step log.
        #[arg(long)]
        trace: bool,
        /// Print the final proof.
        #[arg(long)]
        proof: bool,
    },
    /// Extract a Herbrand disjunction from a proof.
    Herbrand {
        #[command(flatten)]
        input: ProofInput,
        /// Print the final proof.
        #[arg(long)]
        proof: bool,
    },
    /// Decide a consequence relation by exhaustive search over small models.
    Validate {
        #[command(flatten)]
        input: TextInput,
        /// Hypothesis; may be repeated.
        #[arg(long = "hyp")]
        hyps: Vec<String>,
        #[arg(long, value_enum, default_value_t = Kind::Local)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        max_domain: usize,
        /// Use intensional choice operators.
        #[arg(long)]
        intensional: bool,
    },
    /// Sequent calculus derivations.
    #[command(subcommand)]
    Sequent(SequentCommand),
    /// Run a built-in example; without a name, list them.
    Demo {
        name: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum SequentCommand {
    /// Check a derivation file.
    Check {
        /// Derivation file, `-` for standard input.
        path: PathBuf,
        #[arg(long, value_parser = parse_sequent_system)]
        system: SequentSystem,
    },
    /// Search for a cut-free derivation.
    Search {
        #[command(flatten)]
        input: TextInput,
        #[arg(long, value_parser = parse_sequent_system)]
        system: SequentSystem,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = SearchLimits::default().max_nodes)]
        max_nodes: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Local,
    Truth,
    Generic,
    GenericValidity,
}

impl From<Kind> for ConsequenceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Local => ConsequenceKind::Local,
            Kind::Truth => ConsequenceKind::Truth,
            Kind::Generic => ConsequenceKind::Generic,
            Kind::GenericValidity => ConsequenceKind::GenericValidity,
        }
    }
}

#[derive(Args, Debug)]
struct TextInput {
    /// The input text.
    text: Option<String>,
    /// Read the input from a file instead, `-` for standard input.
    #[arg(long, short = 'f', conflicts_with = "text")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProofInput {
    /// Proof file, `-` for standard input.
    path: PathBuf,
    /// Proof system, overriding a `#system` line.
    #[arg(long, value_parser = parse_system)]
    system: Option<SystemId>,
}

fn parse_system(s: &str) -> Result<SystemId, String> {
    s.parse()
}

fn parse_sequent_system(s: &str) -> Result<SequentSystem, String> {
    s.parse()
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Report text (or JSON) and exit code of a successful run.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: String, json: Value) -> Self {
        Report { code, text, json }
    }
}

/// Runs the command line `args` (program name first), writing the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
                    s.push('\n');
                    s
                }
            };
            let _ = out.write_all(body.as_bytes());
            report.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_path(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
}

fn read_text(input: &TextInput) -> Result<String, Failure> {
    match (&input.text, &input.file) {
        (Some(t), None) => Ok(t.clone()),
        (None, Some(p)) => read_path(p),
        _ => Err(usage("expected input text or --file")),
    }
}

fn read_proof(input: &ProofInput) -> Result<Proof, Failure> {
    let src = read_path(&input.path)?;
    let mut p = parse_proof(&src).map_err(|e| usage(e.to_string()))?;
    if let Some(sys) = input.system {
        p.system = sys;
    }
    Ok(p)
}

fn parse_expr(src: &str) -> Result<Expr, Failure> {
    ExprParser::new().expr(src).map_err(|e| usage(e.to_string()))
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Parse(input) => {
            let e = parse_expr(&read_text(input)?)?;
            let kind = if matches!(e, Expr::Term(_)) { "term" } else { "formula" };
            Ok(Report::new(0, format!("{e}\n"), json!({ "kind": kind, "expr": e.to_string() })))
        }
        Command::Translate(input) => {
            let e = epsilon_translate_expr(&parse_expr(&read_text(input)?)?);
            Ok(Report::new(0, format!("{e}\n"), json!({ "translation": e.to_string() })))
        }
        Command::Check(input) => check(&read_proof(input)?),
        Command::Stats(input) => stats(&read_proof(input)?),
        Command::Eliminate {
            input,
            identity,
            trace,
            proof,
        } => {
            let p = read_proof(input)?;
            match first_epsilon_theorem(&p, *identity || p.system.identity) {
                Ok(el) => Ok(eliminated(&el, *trace, *proof)),
                Err(e) => Ok(Report::new(1, format!("elimination failed: {e}\n"), json!({ "ok": false, "error": e.to_string() }))),
            }
        }
        Command::Herbrand { input, proof } => {
            let p = read_proof(input)?;
            match extended_herbrand(&p) {
                Ok(h) => {
                    let mut text = format!("{} disjunct(s) of {}\n", h.count(), h.skeleton);
                    for (d, w) in h.disjuncts.iter().zip(&h.witnesses) {
                        let ws: Vec<String> = h
                            .pattern_vars
                            .iter()
                            .zip(w)
                            .map(|(v, t)| format!("{v} := {t}"))
                            .collect();
                        if ws.is_empty() {
                            let _ = writeln!(text, "  {d}");
                        } else {
                            let _ = writeln!(text, "  {d}    [{}]", ws.join(", "));
                        }
                    }
                    if *proof {
                        let _ = write!(text, "{}", h.proof);
                    }
                    let json = json!({
                        "ok": true,
                        "skeleton": h.skeleton.to_string(),
                        "disjuncts": h.disjuncts.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                        "witnesses": h.witnesses.iter()
                            .map(|w| w.iter().map(|t| t.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "steps": h.steps.len(),
                    });
                    Ok(Report::new(0, text, json))
                }
                Err(e) => Ok(Report::new(1, format!("extraction failed: {e}\n"), json!({ "ok": false, "error": e.to_string() }))),
            }
        }
        Command::Validate {
            input,
            hyps,
            kind,
            max_domain,
            intensional,
        } => validate(&read_text(input)?, hyps, *kind, *max_domain, *intensional),
        Command::Sequent(SequentCommand::Check { path, system }) => {
            let src = read_path(path)?;
            let d = parse_derivation(&src).map_err(|e| usage(e.to_string()))?;
            let cut_free = is_cut_free(&d);
            Ok(match check_derivation(&d, *system) {
                Ok(()) => Report::new(
                    0,
                    format!(
                        "ok: {} in {system}, {} node(s), {}\n",
                        d.sequent,
                        d.size(),
                        if cut_free { "cut-free" } else { "uses cut" }
                    ),
                    json!({ "ok": true, "sequent": d.sequent.to_string(), "nodes": d.size(), "cut_free": cut_free }),
                ),
                Err(e) => Report::new(
                    1,
                    format!("rejected: {e}\n"),
                    json!({ "ok": false, "path": e.path, "reason": e.reason }),
                ),
            })
        }
        Command::Sequent(SequentCommand::Search {
            input,
            system,
            depth,
            max_nodes,
        }) => {
            let s = parse_sequent(&read_text(input)?).map_err(|e| usage(e.to_string()))?;
            let limits = SearchLimits { max_nodes: *max_nodes };
            Ok(match bounded_cutfree_search(&s, *system, *depth, &default_universe(&s), limits) {
                SearchOutcome::Found(d) => Report::new(
                    0,
                    format!("found:\n{d}\n"),
                    json!({ "outcome": "found", "derivation": d.to_string(), "nodes": d.size() }),
                ),
                SearchOutcome::Exhausted { depth, nodes } => Report::new(
                    1,
                    format!("exhausted: no cut-free derivation of depth <= {depth} ({nodes} goal(s) visited)\n"),
                    json!({ "outcome": "exhausted", "depth": depth, "visited": nodes }),
                ),
                SearchOutcome::ResourceExceeded { nodes } => Report::new(
                    1,
                    format!("resource bound exceeded after {nodes} goal(s)\n"),
                    json!({ "outcome": "resource-exceeded", "visited": nodes }),
                ),
            })
        }
        Command::Demo { name: None } => {
            let names = example_names();
            let text: String = names.iter().map(|n| format!("{n}\n")).collect();
            Ok(Report::new(0, text, json!({ "examples": names })))
        }
        Command::Demo { name: Some(name) } => {
            let report = run_example(name).ok_or_else(|| {
                usage(format!("unknown example `{name}`; known: {}", example_names().join(", ")))
            })?;
            let json = json!({
                "name": report.name,
                "ok": report.ok(),
                "checks": report.checks.iter().map(|(c, ok)| json!({ "claim": c, "ok": ok })).collect::<Vec<_>>(),
            });
            Ok(Report::new(if report.ok() { 0 } else { 1 }, format!("{report}\n"), json))
        }
    }
}

fn check(p: &Proof) -> Result<Report, Failure> {
    Ok(match check_proof(p) {
        Ok(report) => {
            let crit = report.critical().len();
            let text = format!("ok: {} line(s) in {}, {crit} critical formula(s)\n", p.len(), p.system);
            let lines: Vec<Value> = report
                .lines
                .iter()
                .map(|l| match l {
                    LineInfo::Plain => json!("plain"),
                    LineInfo::Critical(c) => json!({ "critical": c.term.to_string(), "witness": c.witness.to_string() }),
                    LineInfo::Eigen(x) => json!({ "eigenvariable": x.to_string() }),
                })
                .collect();
            Report::new(0, text, json!({ "ok": true, "system": p.system.to_string(), "lines": lines }))
        }
        Err(e) => Report::new(
            1,
            format!("rejected: {e}\n"),
            json!({ "ok": false, "line": e.line, "reason": e.kind.to_string() }),
        ),
    })
}

fn stats(p: &Proof) -> Result<Report, Failure> {
    let s = match proof_stats(p) {
        Ok(s) => s,
        Err(e) => {
            return Ok(Report::new(
                1,
                format!("rejected: {e}\n"),
                json!({ "ok": false, "line": e.line, "reason": e.kind.to_string() }),
            ))
        }
    };
    let mut text = format!("rank {}\n", s.rank);
    for (r, rs) in &s.by_rank {
        let _ = writeln!(text, "rank {r}: order {}, degree {}", rs.order, rs.degree);
    }
    for t in &s.critical_terms {
        let _ = writeln!(text, "critical {t}");
    }
    let by_rank: Vec<Value> = s
        .by_rank
        .iter()
        .map(|(r, rs)| json!({ "rank": r, "order": rs.order, "degree": rs.degree }))
        .collect();
    let json = json!({
        "ok": true,
        "rank": s.rank,
        "by_rank": by_rank,
        "critical_terms": s.critical_terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    });
    Ok(Report::new(0, text, json))
}

fn eliminated(el: &Elimination, trace: bool, proof: bool) -> Report {
    let mut text = format!(
        "ok: {} step(s), ε-free proof of {} with {} line(s)\n",
        el.steps.len(),
        el.proof.conclusion().map(|c| c.to_string()).unwrap_or_default(),
        el.proof.len()
    );
    if trace {
        text.push_str(&el.trace());
    }
    if proof {
        let _ = write!(text, "{}", el.proof);
    }
    let steps: Vec<Value> = el
        .steps
        .iter()
        .map(|s| {
            json!({
                "term": s.term.to_string(),
                "kind": format!("{:?}", s.kind).to_lowercase(),
                "rank_before": s.before.rank,
                "rank_after": s.after.rank,
                "lines_after": s.lines_after,
            })
        })
        .collect();
    Report::new(
        0,
        text,
        json!({
            "ok": true,
            "conclusion": el.proof.conclusion().map(|c| c.to_string()),
            "lines": el.proof.len(),
            "steps": steps,
        }),
    )
}

fn validate(src: &str, hyps: &[String], kind: Kind, max_domain: usize, intensional: bool) -> Result<Report, Failure> {
    let mut parser = ExprParser::new();
    let mut gamma: Vec<Formula> = Vec::new();
    for h in hyps {
        gamma.push(parser.formula_with_header(h).map_err(|e| usage(e.to_string()))?);
    }
    let a = parser.formula_with_header(src).map_err(|e| usage(e.to_string()))?;
    let opts = CheckOptions {
        max_domain,
        mode: if intensional { Mode::Intensional } else { Mode::Extensional },
    };
    let verdict = check_consequence(kind.into(), &gamma, &a, opts).map_err(|e| usage(e.to_string()))?;
    Ok(match verdict {
        Verdict::Holds => Report::new(
            0,
            format!("holds on all structures of size <= {max_domain}\n"),
            json!({ "holds": true, "max_domain": max_domain }),
        ),
        Verdict::Countermodel(c) => Report::new(
            1,
            format!("countermodel:\n{c}\n"),
            json!({
                "holds": false,
                "max_domain": max_domain,
                "domain_size": c.structure.size,
                "structure": c.structure.to_string(),
                "choices": c.choice.to_string(),
                "assignment": c.assignment.to_string(),
            }),
        ),
    })
}
