mod document;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use document::{ProblemDocument, REPORT_SCHEMA, SCHEMA};
use tasks::{run_task, CliError, Overrides};

/// Exact computations on truncated graded modules, driven by a JSON problem document.
#[derive(Debug, Parser)]
#[command(name = "dquot", version)]
struct Args {
    /// Problem document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Task to run instead of the one named in the document.
    #[arg(long)]
    task: Option<String>,
    /// Truncation degree of the polynomial algebra.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Arity cap for `ract`; cohomological cap for the other tasks.
    #[arg(long)]
    arity: Option<usize>,
    /// Worker threads (default: all cores). Does not affect the report.
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn load(bytes: &[u8]) -> Result<(Value, ProblemDocument), CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::Parse(format!("input is not UTF-8: {e}")))?;
    let raw: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let doc: ProblemDocument = serde_json::from_value(raw.clone()).map_err(|e| CliError::Validation(e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(CliError::Validation(format!("unsupported schema `{}`, expected `{SCHEMA}`", doc.schema)));
    }
    Ok((raw, doc))
}

fn run(args: &Args) -> Result<(String, bool), CliError> {
    let bytes = std::fs::read(&args.input).map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.input.display())))?;
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let (raw, doc) = load(&bytes)?;
    let task = args.task.clone().unwrap_or_else(|| doc.task.clone());
    let ov = Overrides { max_degree: args.max_degree, arity: args.arity };
    let outcome = run_task(&doc, &task, ov)?;
    let report = json!({
        "schema": REPORT_SCHEMA,
        "input": { "sha256": digest, "document": raw },
        "task": task,
        "overrides": { "max_degree": args.max_degree, "arity": args.arity },
        "result": outcome.result,
        "verdict": if outcome.pass { "pass" } else { "fail" },
    });
    let mut text = serde_json::to_string_pretty(&report).expect("reports are plain JSON");
    text.push('\n');
    Ok((text, outcome.pass))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (text, pass) = match run(&args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &args.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(if pass { 0 } else { 2 })
}
