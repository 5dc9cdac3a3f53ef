//! Command-line front end for event-description files: validate, query,
//! traverse, diff, and canonicalize.
//!
//! Exit codes: 0 conformant/ok, 1 validation errors found (warnings count
//! only under `--strict`), 2 parse/load failure, 3 usage error.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fmodel::graph::{EntityRef, Kind, Snapshot, Store};
use fmodel::interchange;
use fmodel::patterns::{pattern_kind_of, view_of, PatternDetail, PatternKind};
use fmodel::reasoning::{
    causal_chain, diff_interpretations, find_events, infer_correlations, parts_closure,
    ChainDirection, EventQuery, PartsDirection, Scope,
};
use fmodel::spacetime::{check_constraint, TimeInterval};
use fmodel::validation::validate_store;
use fmodel::Property;

#[derive(Parser)]
#[command(name = "fmodel", version, about = "Event-description tooling: validate, query, and exchange event knowledge graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate files (merged into one store) and print findings.
    Validate {
        /// Input files; multiple files merge into one store.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Treat warnings as failures.
        #[arg(long)]
        strict: bool,
    },
    /// List events matching exactly one query.
    Query {
        file: PathBuf,
        /// Events a given object participates in.
        #[arg(long, value_name = "IRI")]
        participant: Option<String>,
        /// Events classified by a given interpretant concept.
        #[arg(long, value_name = "IRI")]
        interpretant: Option<String>,
        /// Events documented by a given object or event.
        #[arg(long, value_name = "IRI")]
        documenter: Option<String>,
        /// Events whose time quality overlaps the interval.
        #[arg(long, value_name = "ISO/ISO")]
        time_overlap: Option<String>,
    },
    /// Transitive components of an event.
    Parts {
        file: PathBuf,
        #[arg(long, value_name = "IRI")]
        event: String,
        /// Restrict to the situations relevant in one interpretation.
        #[arg(long, value_name = "IRI")]
        interpretation: Option<String>,
    },
    /// Causal chain reachable from an event, as `cause -> effect` edges.
    Causes {
        file: PathBuf,
        #[arg(long, value_name = "IRI")]
        event: String,
        #[arg(long, value_enum, default_value_t = Direction::Ancestors)]
        direction: Direction,
        /// Restrict to the situations relevant in one interpretation.
        #[arg(long, value_name = "IRI")]
        interpretation: Option<String>,
    },
    /// Derive correlation candidates from common causes.
    InferCorrelations { file: PathBuf },
    /// Compare two interpretations of the same event.
    Diff {
        file: PathBuf,
        #[arg(long, value_name = "IRI")]
        a: String,
        #[arg(long, value_name = "IRI")]
        b: String,
    },
    /// Rewrite a file to canonical form, in place.
    Fmt { file: PathBuf },
    /// Evaluate every constraint of one composition situation.
    CheckConstraints {
        file: PathBuf,
        #[arg(long, value_name = "IRI")]
        composition: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Ancestors,
    Descendants,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 3,
        }
    }

    fn load(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn load_files(paths: &[PathBuf]) -> Result<Store, CliError> {
    let mut store = Store::new();
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::load(format!("{}: {e}", path.display())))?;
        interchange::parse_into(&mut store, &text)
            .map_err(|e| CliError::load(format!("{}: {e}", path.display())))?;
    }
    Ok(store)
}

fn load_file(path: &Path) -> Result<Store, CliError> {
    load_files(std::slice::from_ref(&path.to_path_buf()))
}

fn resolve(snapshot: &Snapshot, qname: &str) -> Result<EntityRef, CliError> {
    snapshot
        .resolve(qname)
        .map_err(|e| CliError::usage(e.to_string()))
}

/// Accepts either an interpretation situation or its interpretant concept
/// and returns the situation.
fn resolve_interpretation(snapshot: &Snapshot, qname: &str) -> Result<EntityRef, CliError> {
    let entity = resolve(snapshot, qname)?;
    match snapshot.kind_of(&entity) {
        Some(Kind::Situation) => match pattern_kind_of(snapshot, &entity) {
            Some((PatternKind::Interpretation, _)) => Ok(entity),
            _ => Err(CliError::usage(format!(
                "`{qname}` is not an interpretation situation"
            ))),
        },
        Some(Kind::Concept(_)) => {
            let situations: Vec<EntityRef> = snapshot
                .subjects_of(Property::Defines, &entity)
                .iter()
                .flat_map(|d| snapshot.subjects_of(Property::Satisfies, d))
                .filter(|sit| {
                    matches!(
                        pattern_kind_of(snapshot, sit),
                        Some((PatternKind::Interpretation, _))
                    )
                })
                .collect();
            match situations.as_slice() {
                [one] => Ok(one.clone()),
                [] => Err(CliError::usage(format!(
                    "`{qname}` names no interpretation situation"
                ))),
                _ => Err(CliError::usage(format!(
                    "`{qname}` is ambiguous between several interpretation situations"
                ))),
            }
        }
        _ => Err(CliError::usage(format!(
            "`{qname}` is neither an interpretation situation nor an interpretant"
        ))),
    }
}

fn scope_for(snapshot: &Snapshot, interpretation: &Option<String>) -> Result<Scope, CliError> {
    match interpretation {
        None => Ok(Scope::unbounded()),
        Some(qname) => Ok(Scope::within(resolve_interpretation(snapshot, qname)?)),
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate { files, strict } => {
            let store = load_files(&files)?;
            let snapshot = store.snapshot();
            let report = validate_store(&snapshot);
            print!("{}", report.render(&snapshot));
            let failed = report.has_errors() || (strict && !report.is_conformant());
            Ok(if failed { 1 } else { 0 })
        }
        Command::Query {
            file,
            participant,
            interpretant,
            documenter,
            time_overlap,
        } => {
            let store = load_file(&file)?;
            let snapshot = store.snapshot();
            let selected = [
                participant.is_some(),
                interpretant.is_some(),
                documenter.is_some(),
                time_overlap.is_some(),
            ]
            .iter()
            .filter(|x| **x)
            .count();
            if selected != 1 {
                return Err(CliError::usage(
                    "pass exactly one of --participant, --interpretant, --documenter, --time-overlap",
                ));
            }
            let query = if let Some(q) = participant {
                EventQuery::ByParticipant(resolve(&snapshot, &q)?)
            } else if let Some(q) = interpretant {
                EventQuery::ByInterpretant(resolve(&snapshot, &q)?)
            } else if let Some(q) = documenter {
                EventQuery::ByDocumenter(resolve(&snapshot, &q)?)
            } else {
                let lex = time_overlap.expect("checked above");
                let interval = TimeInterval::parse(&lex)
                    .map_err(|e| CliError::usage(format!("--time-overlap: {e}")))?;
                EventQuery::ByTimeOverlap(interval)
            };
            for event in find_events(&snapshot, &query) {
                println!("{}", snapshot.compact(&event));
            }
            Ok(0)
        }
        Command::Parts {
            file,
            event,
            interpretation,
        } => {
            let store = load_file(&file)?;
            let snapshot = store.snapshot();
            let seed = resolve(&snapshot, &event)?;
            let scope = scope_for(&snapshot, &interpretation)?;
            let parts = parts_closure(&snapshot, &seed, &scope, PartsDirection::Parts)
                .map_err(|e| CliError::usage(e.to_string()))?;
            for part in parts {
                println!("{}", snapshot.compact(&part));
            }
            Ok(0)
        }
        Command::Causes {
            file,
            event,
            direction,
            interpretation,
        } => {
            let store = load_file(&file)?;
            let snapshot = store.snapshot();
            let seed = resolve(&snapshot, &event)?;
            let scope = scope_for(&snapshot, &interpretation)?;
            let chain_direction = match direction {
                Direction::Ancestors => ChainDirection::Ancestors,
                Direction::Descendants => ChainDirection::Descendants,
            };
            let graph = causal_chain(&snapshot, &seed, &scope, chain_direction)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let mut lines = BTreeSet::new();
            for edge in &graph.edges {
                let justification = edge
                    .justification
                    .as_ref()
                    .map(|j| {
                        snapshot
                            .label(j)
                            .map(str::to_string)
                            .unwrap_or_else(|| snapshot.compact(j))
                    })
                    .unwrap_or_else(|| "unjustified".to_string());
                lines.insert(format!(
                    "{} -> {} [{}]",
                    snapshot.compact(&edge.cause),
                    snapshot.compact(&edge.effect),
                    justification
                ));
            }
            for line in lines {
                println!("{line}");
            }
            if graph.has_cycle {
                println!("# cycle detected");
            }
            Ok(0)
        }
        Command::InferCorrelations { file } => {
            let store = load_file(&file)?;
            let snapshot = store.snapshot();
            for finding in infer_correlations(&snapshot, &Scope::unbounded()) {
                let causes: Vec<String> = finding
                    .common_causes
                    .iter()
                    .map(|c| snapshot.compact(c))
                    .collect();
                let suffix = if finding.already_asserted {
                    " (asserted)"
                } else {
                    ""
                };
                println!(
                    "{} ~ {} [common cause: {}]{}",
                    snapshot.compact(&finding.events.0),
                    snapshot.compact(&finding.events.1),
                    causes.join(", "),
                    suffix
                );
            }
            Ok(0)
        }
        Command::Diff { file, a, b } => {
            let store = load_file(&file)?;
            let snapshot = store.snapshot();
            let sit_a = resolve_interpretation(&snapshot, &a)?;
            let sit_b = resolve_interpretation(&snapshot, &b)?;
            let diff = diff_interpretations(&snapshot, &sit_a, &sit_b)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let section = |name: &str, items: &BTreeSet<EntityRef>| {
                println!("{name}:");
                for item in items {
                    println!("  {}", snapshot.compact(item));
                }
            };
            section("shared", &diff.shared);
            section("only-a", &diff.only_a);
            section("only-b", &diff.only_b);
            println!("conflicts:");
            for conflict in &diff.conflicts {
                println!(
                    "  effect {}: {} (a) vs {} (b)",
                    snapshot.compact(&conflict.effect),
                    snapshot.compact(&conflict.cause_a),
                    snapshot.compact(&conflict.cause_b)
                );
            }
            Ok(0)
        }
        Command::Fmt { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::load(format!("{}: {e}", file.display())))?;
            let store = interchange::parse(&text)
                .map_err(|e| CliError::load(format!("{}: {e}", file.display())))?;
            let canonical = interchange::serialize(&store.snapshot());
            std::fs::write(&file, canonical)
                .map_err(|e| CliError::load(format!("{}: {e}", file.display())))?;
            Ok(0)
        }
        Command::CheckConstraints { file, composition } => {
            let store = load_file(&file)?;
            let snapshot = store.snapshot();
            let situation = resolve(&snapshot, &composition)?;
            let view = view_of(&snapshot, &situation)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let PatternDetail::Composition(c) = &view.detail else {
                return Err(CliError::usage(format!(
                    "`{composition}` is not a composition situation"
                )));
            };
            let mut violated = false;
            for constraint in &c.constraints {
                for component in &c.components {
                    let result = check_constraint(&snapshot, &view, component, constraint)
                        .map_err(|e| CliError::usage(e.to_string()))?;
                    violated |= result.is_violated();
                    println!(
                        "{} | {}: {}",
                        snapshot.compact(component),
                        constraint.describe(&snapshot),
                        result
                    );
                }
            }
            Ok(if violated { 1 } else { 0 })
        }
    }
}
