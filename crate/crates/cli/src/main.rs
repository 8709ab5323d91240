//! `lame`: batch reports on Lamé covers and curves in characteristic 2.
//!
//! Exit status: 0 when every embedded check holds, 1 when one fails, 2 on usage errors.

mod reports;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use reports::{Outcome, Report, MAX_ORDER};

#[derive(Parser, Debug)]
#[command(name = "lame", version, about = "Exact reports on Lamé covers in characteristic 2")]
struct Cli {
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON (the default)
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV
    #[arg(long, global = true)]
    csv: bool,
    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classes of points of exact order n up to automorphism
    Classify {
        #[arg(long, value_parser = odd_order)]
        order: u64,
    },
    /// Branch data of the canonical cover of a point of order n
    Ramify {
        #[arg(long, value_parser = odd_order)]
        order: u64,
        /// Parameter t (hex) of Y² + XY = X³ + tX; selects the ordinary model
        #[arg(long, requires = "field", value_parser = nonzero_hex)]
        ordinary: Option<String>,
        /// Degree of the field of t
        #[arg(long, requires = "ordinary", value_parser = clap::value_parser!(u32).range(1..=16))]
        field: Option<u32>,
    },
    /// Class counts of order dividing n against the closed formulas
    Counts {
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..=999))]
        max_n: u64,
    },
    /// Primitive cyclic triples of an odd degree
    Triples {
        #[arg(long, value_parser = odd_degree)]
        degree: u64,
    },
    /// Every ρ-value in F_2^d with a representative point
    Moduli {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=8))]
        d: u32,
    },
    /// L-polynomial, supersingularity and point-pair classes of Y² + Y = X^(2g+1)
    Hyper {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
        genus: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        field: u32,
    },
    /// Discriminant and j formulas against the standard formulary
    Jcheck {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=100_000))]
        samples: u64,
    },
}

fn odd_order(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if n.is_multiple_of(2) || !(3..=MAX_ORDER).contains(&n) {
        return Err(format!("order must be odd with 3 ≤ n ≤ {MAX_ORDER}"));
    }
    Ok(n)
}

fn nonzero_hex(s: &str) -> Result<String, String> {
    match u128::from_str_radix(s, 16) {
        Ok(0) => Err("t must be nonzero".into()),
        Ok(_) => Ok(s.to_string()),
        Err(e) => Err(format!("{e}")),
    }
}

fn odd_degree(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if n.is_multiple_of(2) || n < 3 {
        return Err("degree must be odd and at least 3; even degrees are not classified".into());
    }
    Ok(n)
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Ramify { .. } => "ramify",
            Command::Counts { .. } => "counts",
            Command::Triples { .. } => "triples",
            Command::Moduli { .. } => "moduli",
            Command::Hyper { .. } => "hyper",
            Command::Jcheck { .. } => "jcheck",
        }
    }

    fn run(&self, seed: u64) -> Outcome {
        match self {
            Command::Classify { order } => reports::classify(*order, seed),
            Command::Ramify { order, ordinary, field } => {
                reports::ramify(*order, ordinary.clone().zip(*field))
            }
            Command::Counts { max_n } => reports::counts(*max_n, seed),
            Command::Triples { degree } => reports::triples(*degree),
            Command::Moduli { d } => reports::moduli(*d),
            Command::Hyper { genus, field } => reports::hyper(*genus as usize, *field),
            Command::Jcheck { samples } => reports::jcheck(*samples as usize, seed),
        }
    }
}

fn render_json(cli: &Cli, report: &Report) -> String {
    let doc = json!({
        "schema": 1,
        "command": cli.command.name(),
        "seed": cli.seed,
        "passed": report.passed,
        "result": report.body,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
    s.push('\n');
    s
}

fn render_csv(report: &Report) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&report.header).map_err(|e| e.to_string())?;
    for row in &report.rows {
        w.write_record(row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match cli.command.run(cli.seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = if cli.csv {
        match render_csv(&report) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    } else {
        render_json(&cli, &report)
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if !report.passed {
        eprintln!("{}: check failed", cli.command.name());
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
