//! `twocopy` — runs scenario files and checks their embedded expectations.
//!
//! Exit status: 0 when every expectation holds, 1 when one is violated,
//! 2 on a configuration or usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Parser, ValueEnum};
use twocopy::scenario::{emit_report, parse_config, run, ReportFormat, ScenarioKind, ScenarioReport};

const EXPECTATION_FAILED: u8 = 1;
const CONFIG_ERROR: u8 = 2;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "twocopy", version, about = "Evaluate two-copy entanglement-estimation scenarios")]
struct Args {
    /// Scenario files (TOML).
    #[arg(required_unless_present = "list_scenarios")]
    files: Vec<PathBuf>,

    /// Sample this many joint measurement shots (overrides the file).
    #[arg(long)]
    shots: Option<u64>,

    /// Sampling seed (overrides the file).
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_enum, default_value = "table")]
    format: Format,

    /// Discretize phase-averaged scenarios with N points (at least 3).
    #[arg(long, value_name = "N")]
    phase_points: Option<usize>,

    /// Print the scenario kinds and exit.
    #[arg(long)]
    list_scenarios: bool,

    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn load(path: &Path, args: &Args) -> Result<ScenarioReport, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read: {e}"))?;
    let mut config = parse_config(&text).map_err(|e| e.to_string())?;
    if let Some(n) = args.shots {
        config.shots = Some(n);
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let (Some(n), ScenarioKind::PhaseAveraged) = (args.phase_points, config.scenario) {
        config.set_phase_points(n);
    }
    run(&config).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_scenarios {
        let width = ScenarioKind::ALL.iter().map(|k| k.name().len()).max().unwrap_or(0);
        for k in ScenarioKind::ALL {
            println!("{:<width$}  {}", k.name(), k.summary());
        }
        return ExitCode::SUCCESS;
    }
    if args.shots == Some(0) {
        eprintln!("error: --shots must be positive");
        return ExitCode::from(CONFIG_ERROR);
    }

    // files are independent; run them side by side, report in argument order
    let results: Vec<Result<ScenarioReport, String>> = thread::scope(|s| {
        let handles: Vec<_> = args.files.iter().map(|p| s.spawn(|| load(p, &args))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("evaluation panicked".into())))
            .collect()
    });

    let mut failed_config = false;
    let mut reports = Vec::new();
    for (path, r) in args.files.iter().zip(results) {
        match r {
            Ok(report) => reports.push((path, report)),
            Err(e) => {
                failed_config = true;
                eprintln!("{}: {e}", path.display());
            }
        }
    }
    if failed_config {
        return ExitCode::from(CONFIG_ERROR);
    }

    let out = match args.format {
        Format::Json if reports.len() == 1 => emit_report(&reports[0].1, ReportFormat::Json),
        Format::Json => {
            let all: Vec<&ScenarioReport> = reports.iter().map(|(_, r)| r).collect();
            let mut s = json_array(&all);
            s.push('\n');
            s
        }
        Format::Table => reports
            .iter()
            .map(|(path, r)| format!("# {}\n{}", path.display(), emit_report(r, ReportFormat::Table)))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    let written = match &args.output {
        Some(path) => fs::write(path, &out),
        None => std::io::stdout().lock().write_all(out.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(CONFIG_ERROR);
    }

    for (path, r) in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!(
                "{}: expectation {} failed: expected {} ± {}, got {}",
                path.display(),
                c.quantity,
                c.expected,
                c.tolerance,
                c.actual.map_or_else(|| "nothing".into(), |a| a.to_string())
            );
        }
    }
    if reports.iter().all(|(_, r)| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXPECTATION_FAILED)
    }
}

/// Pretty JSON array of the individual reports, each in its own emitted form.
fn json_array(reports: &[&ScenarioReport]) -> String {
    let items: Vec<String> = reports
        .iter()
        .map(|r| {
            emit_report(r, ReportFormat::Json)
                .trim_end()
                .lines()
                .map(|l| format!("  {l}"))
                .collect::<Vec<_>>()
                .join("\n")
        })
        .collect();
    format!("[\n{}\n]", items.join(",\n"))
}
