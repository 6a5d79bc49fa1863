mod analyze;
mod gallery;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zerodim_core::flows::FlowSystem;
use zerodim_core::harness::{self, render_markdown, Config, Outcome, RunReport};
use zerodim_core::Error;

/// Exit codes: 0 computed, 1 error, 2 inconclusive, 3 violation, 64 usage, 66 missing input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Error = 1,
    Inconclusive = 2,
    Violation = 3,
    Usage = 64,
    NoInput = 66,
}

#[derive(Debug)]
pub struct Failure {
    pub code: Exit,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: Exit::Usage, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) => Exit::Error,
            _ => Exit::Usage,
        };
        Failure { code, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(name = "zerodim", version, about = "Finite-horizon analysis of flows on zero-dimensional spaces")]
struct Cli {
    /// Config file supplying caps, seed and system definitions.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (analyze, gallery) or directory (verify).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List registered systems, analyzers and theorem checks.
    List {
        /// Only the theorem checks.
        #[arg(long)]
        theorems: bool,
    },
    /// Run one analyzer on one system.
    Analyze(analyze::AnalyzeArgs),
    /// Run every check of a config and write the reports.
    Verify {
        /// Config path; `--config` is used when omitted.
        path: Option<PathBuf>,
    },
    /// Run the worked examples end to end and render a markdown dossier.
    Gallery,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("zerodim: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<Exit> {
    match &cli.command {
        Command::List { theorems } => {
            print!("{}", list(*theorems, cli.json));
            Ok(Exit::Ok)
        }
        Command::Analyze(args) => {
            let config = load_optional(cli.config.as_deref())?;
            analyze::run(args, &config, cli.out.as_deref(), cli.json)
        }
        Command::Verify { path } => {
            let path = path.as_deref().or(cli.config.as_deref()).ok_or_else(|| Failure::usage("verify needs a config path"))?;
            let mut config = load(path)?;
            if let Some(s) = cli.seed {
                config.seed = s;
            }
            verify(&config, cli.out.as_deref(), cli.json)
        }
        Command::Gallery => {
            let config = load_optional(cli.config.as_deref())?;
            let text = gallery::render(&config.caps, cli.seed.unwrap_or(config.seed))?;
            emit(cli.out.as_deref(), &text)?;
            Ok(Exit::Ok)
        }
    }
}

fn load(path: &Path) -> CliResult<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: Exit::NoInput,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Ok(Config::from_json(&text)?)
}

fn load_optional(path: Option<&Path>) -> CliResult<Config> {
    match path {
        Some(p) => load(p),
        None => Ok(Config::empty()),
    }
}

/// Write to a file when `out` is given, else to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure {
            code: Exit::Error,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

const ANALYZERS: &[(&str, &str)] = &[
    ("return-times", "elements of the horizon ball bringing the point into U"),
    ("ap", "almost periodicity: syndetic returns to U"),
    ("regular-ap", "returns to U contain a finite-index subgroup"),
    ("recurrent-type1", "two-sided returns to the depth-d cylinder"),
    ("recurrent-type2", "bounded cone witnesses along a length-growing schedule"),
    ("usc", "upper semicontinuity of the orbit-closure map at the point"),
    ("orbit-cylinders", "depth-d cylinders met by the orbit segment"),
    ("invariant-core", "inner and outer approximations of U^inf"),
    ("escape", "least |t| with tx outside U"),
    ("equicontinuity", "uniform modulus d' over the horizon"),
    ("proximal", "some element brings two points within 2^-d"),
    ("regional-proximal", "check the built-in regional-proximality witness"),
    ("weak-rigidity", "one iterate returning every listed point"),
    ("period", "least p with f^p x = x, searched up to the horizon"),
    ("translate-cover", "minimal K with GU = KU"),
    ("complexity", "number of admissible words of each length up to depth"),
    ("minimality", "uniform recurrence of the language up to word length depth"),
];

fn list(theorems_only: bool, json: bool) -> String {
    let systems = FlowSystem::registry();
    let checks: Vec<(&str, &str)> = harness::registry().iter().map(|c| (c.id, c.statement)).collect();
    if json {
        let obj = if theorems_only {
            serde_json::json!({ "theorems": pairs(&checks) })
        } else {
            serde_json::json!({ "systems": pairs(&systems), "analyzers": pairs(ANALYZERS), "theorems": pairs(&checks) })
        };
        return serde_json::to_string_pretty(&obj).expect("json") + "\n";
    }
    let mut out = String::new();
    let mut section = |title: &str, rows: &[(&str, &str)]| {
        out.push_str(title);
        out.push_str(":\n");
        for (id, text) in rows {
            out.push_str(&format!("  {id:<20} {text}\n"));
        }
    };
    if !theorems_only {
        section("systems", &systems);
        section("analyzers", ANALYZERS);
    }
    section("theorems", &checks);
    out
}

fn pairs(rows: &[(&str, &str)]) -> Vec<serde_json::Value> {
    rows.iter().map(|(id, d)| serde_json::json!({ "id": id, "description": d })).collect()
}

fn verify(config: &Config, out: Option<&Path>, json: bool) -> CliResult<Exit> {
    let reports = harness::run_all(config)?;
    let run = RunReport::new(config, reports);
    let text = serde_json::to_string_pretty(&run).expect("reports serialize") + "\n";
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("zerodim-out"));
    std::fs::create_dir_all(&dir).map_err(|e| Failure { code: Exit::Error, message: format!("cannot create {}: {e}", dir.display()) })?;
    emit(Some(&dir.join("report.json")), &text)?;
    if config.markdown {
        emit(Some(&dir.join("report.md")), &render_markdown(&run))?;
    }
    if json {
        print!("{text}");
    } else {
        for r in &run.reports {
            println!("{:<20} {:<13} {}", r.theorem, r.outcome.to_string(), r.systems.join(", "));
        }
        let s = &run.summary;
        println!(
            "{} checks: {} consistent, {} violation, {} inconclusive ({} errors)",
            s.checks, s.consistent, s.violation, s.inconclusive, s.errors
        );
    }
    let any = |o: Outcome| run.reports.iter().any(|r| r.outcome == o);
    Ok(if any(Outcome::Violation) {
        Exit::Violation
    } else if any(Outcome::Inconclusive) {
        Exit::Inconclusive
    } else {
        Exit::Ok
    })
}
