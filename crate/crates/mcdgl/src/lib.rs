//! Command-line front end for `mcdgl-core`: the problem-file format, JSON
//! artifacts, the verbs and the bundled examples.

pub mod artifacts;
pub mod cli;
pub mod commands;
pub mod pipelines;
pub mod problem;
pub mod syntax;

use std::io::Read;
use std::path::Path;

use clap::Parser;

use cli::{BasisArgs, CheckArgs, Cli, Command, Format, HomologyArgs, McArgs};
use commands::Outcome;
use problem::{Problem, Task, WindowOverride};
use syntax::{ParseError, Pos};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("in `{0}`: {msg}", msg = .1.message)]
    Argument(String, ParseError),
    #[error("task at line {}: {message}", pos.line)]
    Task { pos: Pos, message: String },
    #[error(transparent)]
    Core(#[from] mcdgl_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Exit status: 0 when every check held, 1 when one was verified false.
pub fn exit_code(outcomes: &[Outcome]) -> i32 {
    if outcomes.iter().all(|o| o.verified) {
        0
    } else {
        1
    }
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
            Ok(s)
        }
    }
}

fn task_args<T: Parser>(t: &Task) -> Result<T, CliError> {
    let a = T::try_parse_from(std::iter::once(t.verb.clone()).chain(t.args.iter().cloned()))
        .map_err(|e| CliError::Task {
            pos: t.pos,
            message: e.to_string().lines().next().unwrap_or("").to_string(),
        })?;
    Ok(a)
}

/// With no verb options on the command line, runs every matching task of
/// the file in order; otherwise runs the command line alone.
fn each<T: Parser + Clone>(
    p: &Problem,
    verb: &str,
    cli: &T,
    bare: fn(&T) -> bool,
    input: fn(&T) -> bool,
    f: fn(&Problem, &T) -> Result<Outcome, CliError>,
) -> Result<Vec<Outcome>, CliError> {
    let tasks: Vec<&Task> = p.tasks.iter().filter(|t| t.verb == verb).collect();
    if !bare(cli) || tasks.is_empty() {
        return Ok(vec![f(p, cli)?]);
    }
    let mut out = Vec::new();
    for t in tasks {
        let a: T = task_args(t)?;
        if input(&a) {
            return Err(CliError::Task {
                pos: t.pos,
                message: "tasks cannot name an input file".into(),
            });
        }
        out.push(f(p, &a)?);
    }
    Ok(out)
}

pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Result<Vec<Outcome>, CliError> {
    let over = match &cli.window {
        Some(w) => WindowOverride::parse(w).map_err(CliError::Usage)?,
        None => WindowOverride::default(),
    };
    let load = |path: &Option<std::path::PathBuf>, stdin: &mut dyn Read| {
        Problem::parse(&read_input(path.as_deref(), stdin)?, over)
    };
    match &cli.command {
        Command::Basis(a) => {
            let p = load(&a.input, stdin)?;
            each(&p, "basis", a, BasisArgs::is_bare, |a| a.input.is_some(), commands::basis)
        }
        Command::Mc(a) => {
            let p = load(&a.input, stdin)?;
            each(&p, "mc", a, McArgs::is_bare, |a| a.input.is_some(), commands::mc)
        }
        Command::Check(a) => {
            let p = load(&a.input, stdin)?;
            each(&p, "check", a, CheckArgs::is_bare, |a| a.input.is_some(), commands::check)
        }
        Command::Homology(a) => {
            let p = load(&a.input, stdin)?;
            each(
                &p,
                "homology",
                a,
                HomologyArgs::is_bare,
                |a| a.input.is_some(),
                commands::homology,
            )
        }
        Command::Bigraded(a) => Ok(vec![commands::bigraded(&load(&a.input, stdin)?)?]),
        Command::Quillen(a) => Ok(vec![commands::quillen(&load(&a.input, stdin)?)?]),
        Command::Examples(a) => {
            let r = pipelines::run(&a.name, a.reduced)?;
            Ok(vec![Outcome {
                text: r.to_text(),
                json: serde_json::to_value(&r).expect("report serializes"),
                verified: r.passed(),
            }])
        }
    }
}

pub fn render(outcomes: &[Outcome], format: Format) -> String {
    match format {
        Format::Text => outcomes
            .iter()
            .map(|o| o.text.as_str())
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => {
            let v = match outcomes {
                [one] => one.json.clone(),
                many => serde_json::Value::Array(many.iter().map(|o| o.json.clone()).collect()),
            };
            let mut s = serde_json::to_string_pretty(&v).expect("json");
            s.push('\n');
            s
        }
    }
}
