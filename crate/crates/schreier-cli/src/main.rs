//! Command line front end for the subgroup rewriting pipeline.
//!
//! Exit status: 0 on success, 1 when a verification fails or a word
//! problem answers no, 2 on usage errors, 3 when a resource cap is hit.
//! Identical invocations produce byte-identical output.

use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use schreier::catalog::{family_named, recipe_named};
use schreier::classify::classify_membership;
use schreier::coset::CosetError;
use schreier::graph::LabelledDigraph;
use schreier::parse::{parse_presentation, parse_word, ParseError};
use schreier::present::PresentationError;
use schreier::tietze;
use schreier::wordprob::{monoid_words_equal, raag_is_identity, MonoidOptions, WordProblemError};
use schreier::{
    build_family, subgroup_presentation, verify, verify_all, Alphabet, CatalogError, FamilySpec,
    Presentation, RewriteOptions, VerifyOptions, Word,
};

#[derive(Parser)]
#[command(
    name = "schreier",
    about = "Subgroup presentations of finitely presented groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print machine-readable JSON; errors become JSON on the diagnostic
    /// stream.
    #[arg(long, global = true)]
    json: bool,
    /// Write a full JSON transcript of the run to this path.
    #[arg(long, global = true, value_name = "PATH")]
    emit_trace: Option<PathBuf>,
    /// Cap on cosets defined during enumeration.
    #[arg(long, global = true, default_value_t = 100_000, value_name = "N")]
    max_cosets: usize,
    /// Step budget for simplification and isomorphism search.
    #[arg(long, global = true, default_value_t = 10_000, value_name = "N")]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named family presentation.
    Present {
        /// One of: torus_knot, inflated_torus, moldavanskii, bs,
        /// inflated_bs, newman, h_group, bob.
        family: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
    },
    /// Rewrite a finite-index subgroup of an ambient presentation.
    Subgroup {
        /// Presentation file, or - for standard input.
        presentation: String,
        /// Comma-separated subgroup generator words.
        #[arg(long, value_name = "WORDS")]
        gens: String,
    },
    /// Replay a worked subgroup computation and check every pinned fact.
    Verify {
        /// One of: TORUS, MT, STARBS, GAMMA1, CHORDAL, SQTORUS, NEWMAN.
        #[arg(conflicts_with = "all")]
        recipe: Option<String>,
        #[arg(allow_negative_numbers = true, conflicts_with = "all")]
        params: Vec<i64>,
        /// Verify the whole standard grid.
        #[arg(long)]
        all: bool,
    },
    /// Classify membership problems for a labelled graph group.
    ClassifyGraph {
        /// Graph file in the JSON format, or - for standard input.
        graph: String,
    },
    /// Decide word problems over labelled graph groups.
    Wordproblem {
        /// Plain-commutation case: a graph file and one word; decides
        /// whether the word is the identity.
        #[arg(long, num_args = 2, value_names = ["GRAPH", "WORD"], conflicts_with = "monoid")]
        raag: Option<Vec<String>>,
        /// Positive-word case: a graph file and two positive words;
        /// decides whether they are equal.
        #[arg(long, num_args = 3, value_names = ["GRAPH", "U", "V"])]
        monoid: Option<Vec<String>>,
    },
    /// Print the abelian invariants of a presentation.
    Abelianize {
        /// Presentation file, or - for standard input.
        presentation: String,
    },
    /// Greedy bounded Tietze simplification of a presentation.
    Simplify {
        /// Presentation file, or - for standard input.
        presentation: String,
    },
}

enum CliError {
    /// Bad arguments or unreadable/unparseable input; exit 2.
    Usage(String),
    /// A resource cap was hit before an answer; exit 3.
    Overflow(String),
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match &e {
            CatalogError::Coset(CosetError::Overflow { .. }) => CliError::Overflow(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CosetError> for CliError {
    fn from(e: CosetError) -> Self {
        match &e {
            CosetError::Overflow { .. } => CliError::Overflow(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<WordProblemError> for CliError {
    fn from(e: WordProblemError) -> Self {
        match &e {
            WordProblemError::StateCapExceeded { .. } => CliError::Overflow(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let (code, message) = match &e {
                CliError::Usage(m) => (2, m),
                CliError::Overflow(m) => (3, m),
            };
            if json {
                eprintln!("{}", json!({ "error": message }));
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("reading {path}: {e}")))
    }
}

fn read_presentation(path: &str) -> Result<Presentation, CliError> {
    Ok(parse_presentation(&read_input(path)?)?)
}

fn read_graph(path: &str) -> Result<LabelledDigraph, CliError> {
    LabelledDigraph::from_json(&read_input(path)?)
        .map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json serializes")
}

/// Writes to stdout, exiting quietly if the reader closed the pipe.
fn emit_raw(text: &str) {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn emit_line(text: &str) {
    emit_raw(&format!("{text}\n"));
}

fn write_trace(path: &Option<PathBuf>, value: &Value) -> Result<(), CliError> {
    if let Some(path) = path {
        let mut text = pretty(value);
        text.push('\n');
        fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let Cli { command, json, emit_trace, max_cosets, budget } = cli;
    match command {
        Command::Present { family, params } => {
            let family = family_named(&family)?;
            let p = build_family(&FamilySpec::new(family, params))?;
            if json {
                emit_line(&pretty(&p.to_json_value()));
            } else {
                emit_line(&p.to_string());
            }
            write_trace(&emit_trace, &p.to_json_value())?;
            Ok(true)
        }
        Command::Subgroup { presentation, gens } => {
            let ambient = read_presentation(&presentation)?;
            let words = parse_word_list(&gens, ambient.alphabet())?;
            let options = RewriteOptions { max_cosets, parallel: true };
            let sp = subgroup_presentation(&ambient, &words, options)?;
            if json {
                emit_line(&pretty(&sp.to_json_value()));
            } else {
                emit_line(&sp.presentation.to_string());
            }
            write_trace(&emit_trace, &sp.to_json_value())?;
            Ok(true)
        }
        Command::Verify { recipe, params, all } => {
            let options = VerifyOptions { max_cosets, budget, parallel: true };
            if all {
                return verify_grid(&options, json, &emit_trace);
            }
            let Some(name) = recipe else {
                return Err(CliError::Usage(
                    "a recipe name or --all is required".to_string(),
                ));
            };
            let id = recipe_named(&name)?;
            let report = verify(id, &params, &options)?;
            if json {
                emit_line(&pretty(&report.to_json_value()));
            } else {
                emit_line(&report.to_string());
            }
            write_trace(&emit_trace, &report.trace_json_value())?;
            Ok(report.verified)
        }
        Command::ClassifyGraph { graph } => {
            let g = read_graph(&graph)?;
            let report = classify_membership(&g);
            if json {
                emit_line(&pretty(&report.to_json_value()));
            } else {
                emit_raw(&report.to_string());
            }
            write_trace(&emit_trace, &report.to_json_value())?;
            Ok(true)
        }
        Command::Wordproblem { raag, monoid } => match (raag, monoid) {
            (Some(args), None) => {
                let g = read_graph(&args[0])?;
                let alphabet = graph_alphabet(&g);
                let w = parse_word(&args[1], &alphabet)?;
                let identity = raag_is_identity(&g, &w)?;
                if json {
                    emit_line(&pretty(&json!({ "identity": identity })));
                } else {
                    emit_line(&format!("identity: {}", if identity { "yes" } else { "no" }));
                }
                write_trace(&emit_trace, &json!({ "identity": identity }))?;
                Ok(identity)
            }
            (None, Some(args)) => {
                let g = read_graph(&args[0])?;
                let alphabet = graph_alphabet(&g);
                let u = parse_word(&args[1], &alphabet)?;
                let v = parse_word(&args[2], &alphabet)?;
                let equal = monoid_words_equal(&g, &u, &v, MonoidOptions::default())?;
                if json {
                    emit_line(&pretty(&json!({ "equal": equal })));
                } else {
                    emit_line(&format!("equal: {}", if equal { "yes" } else { "no" }));
                }
                write_trace(&emit_trace, &json!({ "equal": equal }))?;
                Ok(equal)
            }
            _ => Err(CliError::Usage("pass exactly one of --raag or --monoid".to_string())),
        },
        Command::Abelianize { presentation } => {
            let p = read_presentation(&presentation)?;
            let inv = p.abelianization();
            let payload = json!({
                "free_rank": inv.free_rank,
                "torsion": inv.torsion,
                "display": inv.to_string(),
            });
            if json {
                emit_line(&pretty(&payload));
            } else {
                emit_line(&inv.to_string());
            }
            write_trace(&emit_trace, &payload)?;
            Ok(true)
        }
        Command::Simplify { presentation } => {
            let p = read_presentation(&presentation)?;
            let outcome = tietze::simplify(&p, budget);
            let payload = json!({
                "presentation": outcome.presentation.to_string(),
                "steps": outcome.steps,
                "reached_fixpoint": outcome.reached_fixpoint,
                "log": outcome.log,
            });
            if json {
                emit_line(&pretty(&payload));
            } else {
                emit_line(&outcome.presentation.to_string());
                if !outcome.reached_fixpoint {
                    eprintln!("note: step budget exhausted before a fixpoint");
                }
            }
            write_trace(&emit_trace, &payload)?;
            Ok(true)
        }
    }
}

fn parse_word_list(text: &str, alphabet: &Alphabet) -> Result<Vec<Word>, CliError> {
    let mut words = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(CliError::Usage("empty word in generator list".to_string()));
        }
        words.push(parse_word(part, alphabet)?);
    }
    Ok(words)
}

fn graph_alphabet(g: &LabelledDigraph) -> Alphabet {
    Alphabet::new(g.vertices().to_vec()).expect("vertex names are valid generator names")
}

fn verify_grid(
    options: &VerifyOptions,
    json: bool,
    emit_trace: &Option<PathBuf>,
) -> Result<bool, CliError> {
    let results = verify_all(options);
    // Surface an overflow (exit 3) before reporting anything else; other
    // recipe errors cannot happen on the fixed grid.
    for (label, result) in &results {
        if let Err(e) = result {
            return Err(match e {
                CatalogError::Coset(CosetError::Overflow { .. }) => {
                    CliError::Overflow(format!("{label}: {e}"))
                }
                _ => CliError::Usage(format!("{label}: {e}")),
            });
        }
    }
    let reports: Vec<_> = results
        .iter()
        .map(|(label, r)| (label, r.as_ref().expect("errors handled above")))
        .collect();
    let verified = reports.iter().filter(|(_, r)| r.verified).count();
    if json {
        let payload: Vec<Value> = reports.iter().map(|(_, r)| r.to_json_value()).collect();
        emit_line(&pretty(&Value::Array(payload)));
    } else {
        let mut out = String::new();
        for (label, report) in &reports {
            out.push_str(&format!("{label}: {}\n", report.verdict()));
        }
        out.push_str(&format!("verified {verified}/{}\n", reports.len()));
        for (_, report) in reports.iter().filter(|(_, r)| !r.verified) {
            out.push_str(&format!("\n{report}\n"));
        }
        emit_raw(&out);
    }
    if emit_trace.is_some() {
        let traces: Vec<Value> = reports.iter().map(|(_, r)| r.trace_json_value()).collect();
        write_trace(emit_trace, &Value::Array(traces))?;
    }
    Ok(verified == reports.len())
}
