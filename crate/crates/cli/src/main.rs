mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use commands::{parse_relation, render_text, run, Command, Outcome, Overrides};
use config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Text,
}

/// Verification kernel for twisted quantum affinizations at level one.
#[derive(Debug, Parser)]
#[command(name = "taffin", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file.
    #[arg(short, long)]
    config: PathBuf,
    /// Comma-separated relation ids, e.g. Q7,Q8,Q4p.
    #[arg(long, value_delimiter = ',', value_parser = parse_relation)]
    relations: Option<Vec<taffin_core::relcat::RelId>>,
    #[arg(long)]
    coeff_order: Option<usize>,
    /// Mode window D in natural units.
    #[arg(long)]
    mode_window: Option<u32>,
    #[arg(long)]
    basis_degree: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    emit: Emit,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut cfg = match Config::from_path(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ov = Overrides {
        relations: cli.relations.clone(),
        coeff_order: cli.coeff_order,
        mode_window: cli.mode_window,
        basis_degree: cli.basis_degree,
    };
    let report = match run(cli.command, &mut cfg, &ov) {
        Outcome::Done(r) => r,
        Outcome::ConfigError(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.emit {
        Emit::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Emit::Text => render_text(&report, &cfg),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if report.passed { 0 } else { 1 })
}
