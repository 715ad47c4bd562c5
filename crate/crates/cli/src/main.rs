use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use uur_core::repro::{self, scenario::DEFAULT_SEED, Scenario, ThetaGrid};

/// Curves and acceptance checks for unitary uncertainty bounds.
#[derive(Parser, Debug)]
#[command(name = "uur", version)]
struct Cli {
    /// Seed for randomized suites and the heuristic permutation search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a scenario over its theta grid.
    Run {
        /// Builtin scenario name (see `list`).
        #[arg(required_unless_present = "config", conflicts_with = "config")]
        scenario: Option<String>,
        /// JSON scenario file instead of a builtin.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid override, `start:stop:count` (angles accept `pi`, e.g. `0:2pi:721`).
        #[arg(long)]
        grid: Option<ThetaGrid>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the builtin scenario catalog.
    List,
    /// Run the acceptance suite; exit status 1 if any criterion fails.
    Check {
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Csv,
    Json,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn open_out(path: Option<&PathBuf>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("cannot create {}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_scenario(name: Option<&str>, config: Option<&PathBuf>) -> Result<Scenario, String> {
    if let Some(path) = config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        return Scenario::from_json(&text).map_err(|e| e.to_string());
    }
    let name = name.ok_or("no scenario given")?;
    repro::builtin(name).ok_or_else(|| {
        format!(
            "unknown scenario `{name}`; available: {}",
            repro::BUILTIN_NAMES.join(", ")
        )
    })
}

fn execute(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run {
            scenario,
            config,
            grid,
            out,
            format,
        } => {
            let mut s = load_scenario(scenario.as_deref(), config.as_ref())?;
            if let Some(g) = grid {
                s.grid = g;
            }
            if let Some(seed) = cli.seed {
                s.seed = seed;
            }
            let points = repro::run_scenario(&s).map_err(|e| e.to_string())?;
            let mut w = open_out(out.as_ref())?;
            match format {
                Format::Csv => repro::write_csv(&points, &s.bounds, &mut w),
                Format::Json => repro::write_json(&points, &mut w),
            }
            .map_err(|e| e.to_string())?;
            if matches!(format, Format::Json) {
                writeln!(w).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::List => {
            for s in repro::catalog() {
                let ids: Vec<String> = s.bounds.iter().map(ToString::to_string).collect();
                println!("{:<16} {}", s.name, s.description);
                println!("{:<16} bounds: {}", "", ids.join(","));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { report } => {
            let results = repro::check_all(cli.seed.unwrap_or(DEFAULT_SEED));
            for r in &results {
                println!("{}", r.line());
            }
            if let Some(path) = report {
                let mut w = open_out(Some(&path))?;
                serde_json::to_writer_pretty(&mut w, &results).map_err(|e| e.to_string())?;
                writeln!(w)
                    .and_then(|_| w.flush())
                    .map_err(|e| e.to_string())?;
            }
            let passed = results.iter().filter(|r| r.pass).count();
            println!("{passed}/{} criteria passed", results.len());
            Ok(if repro::all_pass(&results) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            })
        }
    }
}
