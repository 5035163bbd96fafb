mod args;
mod fixtures;
mod reproduce;
mod sweep;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use args::{Cli, Command, Format, MergeArgs, ReproduceArgs, RunConfig, SweepArgs, Target};
use bellccp::sweep::SweepReport;

/// Exit status: the result matched its expectation.
const EXIT_PASS: u8 = 0;
/// The computation finished but the result is outside tolerance.
const EXIT_MISMATCH: u8 = 1;
/// Invalid input or a failed computation.
const EXIT_ERROR: u8 = 2;
/// A sweep stopped early; rerun with the same checkpoint to resume.
const EXIT_INCOMPLETE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Reproduce(a) => reproduce(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Merge(a) => merge(&a),
        Command::Run { config } => run_config(&config),
        Command::List => {
            let fixtures = fixtures::load();
            for t in Target::value_variants() {
                let name = t.name();
                let desc = fixtures.target(&name).map(|f| f.description.as_str()).unwrap_or("");
                println!("{name:<20} {desc}");
            }
            Ok(EXIT_PASS)
        }
    };
    ExitCode::from(status.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    }))
}

type Status = Result<u8, String>;

fn threads(n: Option<usize>) -> Result<(), String> {
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn emit(output: Option<&Path>, body: &str) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_config(path: &Path) -> Status {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg: RunConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    match cfg {
        RunConfig::Reproduce(a) => reproduce(&a),
        RunConfig::Sweep(a) => sweep(&a),
        RunConfig::Merge(a) => merge(&a),
    }
}

fn reproduce(a: &ReproduceArgs) -> Status {
    threads(a.threads)?;
    let report = reproduce::run(a).map_err(|e| e.to_string())?;
    let body = match a.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(a.output.as_deref(), &body)?;
    for c in report.mismatches() {
        eprintln!("mismatch: {} = {} (expected {})", c.quantity, c.value, c.expected);
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_MISMATCH })
}

fn sweep(a: &SweepArgs) -> Status {
    threads(a.threads)?;
    let resolved = sweep::resolve(a);
    let report = sweep::run(&resolved).map_err(|e| e.to_string())?;
    finish("sweep", &resolved, &report, resolved.output.as_deref(), resolved.format)
}

fn merge(a: &MergeArgs) -> Status {
    threads(a.threads)?;
    let report = sweep::merge(a).map_err(|e| e.to_string())?;
    finish("merge", a, &report, a.output.as_deref(), a.format)
}

fn finish<C: serde::Serialize>(
    command: &'static str,
    config: &C,
    report: &SweepReport,
    output: Option<&Path>,
    format: Format,
) -> Status {
    let body = match format {
        Format::Json => sweep::envelope(command, config, report).to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(output, &body)?;
    if !report.complete {
        eprintln!("incomplete: rerun with the same checkpoint to resume");
        return Ok(EXIT_INCOMPLETE);
    }
    if report.passed() {
        return Ok(EXIT_PASS);
    }
    if let Some(a) = &report.argmin {
        eprintln!(
            "violation: strategy {} (encoder {:?}, decoder {:?}) has v* = {}",
            a.mu, a.encoder, a.decoder, a.v_star
        );
    }
    for f in &report.failures {
        eprintln!("lp failure: strategy {}: {}", f.mu, f.message.as_deref().unwrap_or(""));
    }
    Ok(EXIT_MISMATCH)
}
