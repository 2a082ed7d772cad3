//! The `argdial` command line.

use std::ffi::{OsStr, OsString};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use argdial::dialogue::{
    run_simulation, shift_report, Act, CompliantProver, ExhaustiveSceptic, Policy, ScriptLine,
    ScriptPolicy, Side, Status,
};
use argdial::formats::{
    evaluation_report, export_graph, export_graph_machine, parse_graph, parse_scheme_dsl,
    parse_script, parse_transcript, render_transcript, serialize_scheme, verify_transcript,
    Diagnostic,
};
use argdial::library::{SchemeRegistry, TermMap};
use argdial::scheme::{instantiate_scheme, ArgumentInstance, Qualifier, Substitution};
use clap::{Parser, Subcommand, ValueEnum};

pub const SCHEME_PATH_VAR: &str = "ARGDIAL_SCHEME_PATH";

#[derive(Parser, Debug)]
#[command(name = "argdial", about = "Argumentation schemes and dialogues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or print registered schemes.
    Schemes {
        #[command(subcommand)]
        action: SchemesAction,
    },
    /// Check scheme, graph, script and transcript files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Apply a scheme to bindings and print the argument.
    Instantiate {
        scheme: String,
        #[arg(long = "bind", value_name = "VAR=TEXT", value_parser = pair)]
        bindings: Vec<(String, String)>,
        #[arg(long, default_value = "arg")]
        id: String,
        #[arg(long)]
        qualifier: Option<Qualifier>,
    },
    /// Label an argument graph.
    Evaluate {
        graph: PathBuf,
        /// Per-argument report instead of the annotated graph.
        #[arg(long, conflicts_with = "format")]
        report: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a dialogue script and print the transcript.
    Simulate {
        script: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_turns: usize,
        #[arg(long, value_enum, default_value_t = PolicyKind::Script)]
        policy_proponent: PolicyKind,
        #[arg(long, value_enum, default_value_t = PolicyKind::Script)]
        policy_respondent: PolicyKind,
    },
    /// Replay a transcript and print its shifts.
    ShiftReport { transcript: PathBuf },
    /// Rename domain words in a scheme.
    Localize {
        scheme: String,
        #[arg(long = "map", value_name = "SRC=DST", value_parser = pair, required = true)]
        map: Vec<(String, String)>,
        #[arg(long = "as", value_name = "ID")]
        new_id: String,
    },
}

#[derive(Subcommand, Debug)]
enum SchemesAction {
    List,
    Show { id: String },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Machine,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PolicyKind {
    Script,
    Sceptic,
    Prover,
}

fn pair(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("expected KEY=VALUE, found {s:?}")),
    }
}

/// Text written to stdout and stderr plus an exit status.
#[derive(Debug, Default)]
struct Output {
    out: String,
    err: String,
    code: i32,
}

impl Output {
    fn fail(mut self, msg: impl std::fmt::Display) -> Self {
        let _ = writeln!(self.err, "error: {msg}");
        self.code = 1;
        self
    }
}

/// Runs the command line with the scheme search path taken from the
/// environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let path = std::env::var_os(SCHEME_PATH_VAR);
    run_with(args, path.as_deref(), out, err)
}

/// Runs the command line. `scheme_path` lists extra directories of
/// `.scheme` files, separated as in `PATH`.
pub fn run_with<I, T>(
    args: I,
    scheme_path: Option<&OsStr>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut result = Output::default();
    let registry = load_registry(scheme_path, &mut result.err);
    let result = dispatch(cli.command, &registry, result);
    let _ = out.write_all(result.out.as_bytes());
    let _ = err.write_all(result.err.as_bytes());
    result.code
}

/// Built-ins plus every `.scheme` file found on the search path. Files
/// with problems are reported and their clean schemes still load.
fn load_registry(path: Option<&OsStr>, err: &mut String) -> SchemeRegistry {
    let mut registry = SchemeRegistry::with_builtins();
    let Some(path) = path else {
        return registry;
    };
    for dir in std::env::split_paths(path) {
        let Ok(entries) = std::fs::read_dir(&dir) else {
            let _ = writeln!(
                err,
                "warning: cannot read scheme directory {}",
                dir.display()
            );
            continue;
        };
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension() == Some(OsStr::new("scheme")))
            .collect();
        files.sort();
        for file in files {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    let _ = writeln!(err, "warning: {}: {e}", file.display());
                    continue;
                }
            };
            let doc = parse_scheme_dsl(&text);
            for d in &doc.diagnostics {
                let _ = writeln!(err, "warning: {}:{d}", file.display());
            }
            for s in doc.schemes {
                if let Err(e) = registry.register(s) {
                    let _ = writeln!(err, "warning: {}: {e}", file.display());
                }
            }
        }
    }
    registry
}

fn dispatch(command: Command, registry: &SchemeRegistry, mut o: Output) -> Output {
    match command {
        Command::Schemes { action } => match action {
            SchemesAction::List => {
                for s in registry.iter() {
                    let _ = writeln!(o.out, "{:<36} {}", s.id, s.name);
                }
                o
            }
            SchemesAction::Show { id } => match registry.lookup(&id) {
                Ok(s) => {
                    o.out.push_str(&serialize_scheme(s));
                    o
                }
                Err(e) => o.fail(e),
            },
        },
        Command::Validate { files } => validate(&files, registry, o),
        Command::Instantiate {
            scheme,
            bindings,
            id,
            qualifier,
        } => {
            let made = registry
                .lookup(&scheme)
                .map_err(|e| e.to_string())
                .and_then(|s| {
                    let sub = Substitution::from_pairs(bindings).map_err(|e| e.to_string())?;
                    let inst =
                        instantiate_scheme(s, id.as_str(), sub).map_err(|e| e.to_string())?;
                    match qualifier {
                        Some(q) => inst.with_qualifier(q).map_err(|e| e.to_string()),
                        None => Ok(inst),
                    }
                });
            match made {
                Ok(inst) => {
                    o.out.push_str(&describe_instance(&inst));
                    o
                }
                Err(e) => o.fail(e),
            }
        }
        Command::Evaluate {
            graph,
            report,
            format,
        } => {
            let text = match read(&graph) {
                Ok(t) => t,
                Err(e) => return o.fail(e),
            };
            let doc = parse_graph(&text, registry);
            if !doc.diagnostics.is_empty() {
                report_diagnostics(&mut o, &graph, &doc.diagnostics);
                return o;
            }
            o.out = if report {
                evaluation_report(&doc.graph)
            } else if format == Format::Machine {
                export_graph_machine(&doc.graph)
            } else {
                export_graph(&doc.graph)
            };
            o
        }
        Command::Simulate {
            script,
            max_turns,
            policy_proponent,
            policy_respondent,
        } => simulate(
            &script,
            max_turns,
            [policy_proponent, policy_respondent],
            registry,
            o,
        ),
        Command::ShiftReport { transcript } => {
            let text = match read(&transcript) {
                Ok(t) => t,
                Err(e) => return o.fail(e),
            };
            let doc = parse_transcript(&text, registry);
            if !doc.diagnostics.is_empty() {
                report_diagnostics(&mut o, &transcript, &doc.diagnostics);
                return o;
            }
            match verify_transcript(&doc) {
                Ok(t) => {
                    for e in shift_report(&t) {
                        let _ = write!(o.out, "{} {} {} -> {}", e.turn, e.mode, e.from, e.to);
                        if e.degraded {
                            o.out.push_str(" degraded");
                        }
                        o.out.push('\n');
                    }
                    o
                }
                Err(e) => o.fail(format!("{}: {e}", transcript.display())),
            }
        }
        Command::Localize {
            scheme,
            map,
            new_id,
        } => {
            let localized = TermMap::new(map).and_then(|m| registry.localize(&scheme, &m, &new_id));
            match localized {
                Ok(l) => {
                    for w in &l.warnings {
                        let _ = writeln!(o.err, "warning: {w}");
                    }
                    o.out.push_str(&serialize_scheme(&l.scheme));
                    o
                }
                Err(e) => o.fail(e),
            }
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn report_diagnostics(o: &mut Output, path: &Path, diags: &[Diagnostic]) {
    for d in diags {
        let _ = writeln!(o.err, "{}:{d}", path.display());
    }
    o.code = 1;
}

fn describe_instance(inst: &ArgumentInstance) -> String {
    let scheme = inst.scheme();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "argument {} [{}] {}",
        inst.id, scheme.id, inst.qualifier
    );
    for p in &inst.premises {
        let _ = writeln!(out, "  {}: {}", p.role, p.text);
    }
    let ind = scheme
        .indicator
        .as_deref()
        .map(|i| format!("{i}, "))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "  {}: {ind}{}",
        inst.conclusion.role, inst.conclusion.text
    );
    for cq in &scheme.cqs {
        let text = inst.cq_text(cq.index).unwrap_or_default();
        let _ = writeln!(out, "  cq{} {}: {text}", cq.index, cq.kind);
    }
    out
}

/// Checks one file by extension. Returns the lines to print and whether
/// the file was clean.
fn check_file(path: &Path, registry: &SchemeRegistry) -> (String, bool) {
    let name = path.display();
    let text = match read(path) {
        Ok(t) => t,
        Err(e) => return (format!("error: {e}\n"), false),
    };
    let ext = path.extension().and_then(OsStr::to_str).unwrap_or_default();
    let (diags, summary) = match ext {
        "scheme" => {
            let doc = parse_scheme_dsl(&text);
            let n = doc.schemes.len();
            (doc.diagnostics, format!("{n} scheme(s)"))
        }
        "arg" => {
            let doc = parse_graph(&text, registry);
            let n = doc.graph.arguments().count();
            (doc.diagnostics, format!("{n} argument(s)"))
        }
        "dlg" => {
            let doc = parse_script(&text, registry);
            let n = doc.lines.len();
            (doc.diagnostics, format!("{n} move line(s)"))
        }
        "transcript" => {
            let doc = parse_transcript(&text, registry);
            let mut diags = doc.diagnostics.clone();
            if diags.is_empty() {
                if let Err(e) = verify_transcript(&doc) {
                    diags.push(Diagnostic::new(1, 1, e));
                }
            }
            (diags, format!("{} move(s)", doc.moves.len()))
        }
        _ => return (
            format!(
                "error: {name}: unknown file type (expected .scheme, .arg, .dlg or .transcript)\n"
            ),
            false,
        ),
    };
    if diags.is_empty() {
        (format!("{name}: ok, {summary}\n"), true)
    } else {
        let mut out = String::new();
        for d in &diags {
            let _ = writeln!(out, "{name}:{d}");
        }
        (out, false)
    }
}

/// Files are checked in parallel; output keeps the input order.
fn validate(files: &[PathBuf], registry: &SchemeRegistry, mut o: Output) -> Output {
    let results: Vec<(String, bool)> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| s.spawn(move || check_file(f, registry)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| ("error: checker crashed\n".into(), false))
            })
            .collect()
    });
    for (text, ok) in results {
        if ok {
            o.out.push_str(&text);
        } else {
            o.err.push_str(&text);
            o.code = 1;
        }
    }
    o
}

fn policy(
    kind: PolicyKind,
    side: Side,
    lines: &[ScriptLine],
    who: &argdial::dialogue::Participant,
) -> Box<dyn Policy> {
    match kind {
        PolicyKind::Script => Box::new(ScriptPolicy::solo(lines.to_vec(), who)),
        PolicyKind::Sceptic => Box::new(ExhaustiveSceptic),
        PolicyKind::Prover => {
            let agenda = lines
                .iter()
                .filter(|l| {
                    l.speaker
                        .as_ref()
                        .map_or(side == Side::Proponent, |s| s == who)
                })
                .filter(|l| matches!(l.act, Act::Assert(_) | Act::Argue(_) | Act::Offer { .. }))
                .map(|l| l.act.clone());
            Box::new(CompliantProver::new(agenda))
        }
    }
}

fn simulate(
    script: &Path,
    max_turns: usize,
    kinds: [PolicyKind; 2],
    registry: &SchemeRegistry,
    mut o: Output,
) -> Output {
    let text = match read(script) {
        Ok(t) => t,
        Err(e) => return o.fail(e),
    };
    let doc = parse_script(&text, registry);
    if !doc.diagnostics.is_empty() {
        report_diagnostics(&mut o, script, &doc.diagnostics);
        return o;
    }
    let Some(header) = doc.header else {
        return o.fail(format!("{}: script has no header", script.display()));
    };
    let initial = match header.initial_state() {
        Ok(s) => s,
        Err(e) => return o.fail(format!("{}: {e}", script.display())),
    };
    let (mut a, mut b): (Box<dyn Policy>, Box<dyn Policy>) = if kinds == [PolicyKind::Script; 2] {
        let (a, b) = ScriptPolicy::pair(doc.lines);
        (Box::new(a), Box::new(b))
    } else {
        let p = initial.participant(Side::Proponent);
        let r = initial.participant(Side::Respondent);
        (
            policy(kinds[0], Side::Proponent, &doc.lines, p),
            policy(kinds[1], Side::Respondent, &doc.lines, r),
        )
    };
    match run_simulation(&initial, a.as_mut(), b.as_mut(), max_turns) {
        Ok(t) => {
            o.out = render_transcript(&t);
            if let Status::Violation(e) = &t.status {
                let _ = writeln!(o.err, "error: {}: {e}", script.display());
                o.code = 1;
            }
            o
        }
        Err(e) => o.fail(e),
    }
}
