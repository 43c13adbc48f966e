//! `prokit` command line.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use prokit::harness::report::{emit_report, Report};
use prokit::harness::run::{as_profile_task, run_axioms, run_task};
use prokit::harness::task::{parse_spec, Analysis, Format, TaskSpec};

const USAGE_ERROR: u8 = 64;

#[derive(Parser)]
#[command(name = "prokit", version, about = "Proregularity profiles and checks over finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; overrides the task file.
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// Seed for randomized suites; overrides the task file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search bound for witnesses; overrides the task file.
    #[arg(long = "m-max", global = true)]
    m_max: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the task and report its checks.
    Check { taskfile: PathBuf },
    /// Lipman, Greenlees-May and weak profiles of the task's module and sequence.
    Profile { taskfile: PathBuf },
    /// Run a family sweep task.
    Sweep { taskfile: PathBuf },
    /// Ring and module axioms for everything the task declares.
    Axioms { taskfile: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
            OutFormat::Text => Format::Text,
        }
    }
}

fn load(path: &PathBuf, cli: &Cli) -> Result<TaskSpec, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut t = parse_spec(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(s) = cli.seed {
        t.seed = Some(s);
    }
    if let Some(m) = cli.m_max {
        t.bounds.m_max = Some(m);
        t.validate().map_err(|e| format!("--m-max: {e}"))?;
    }
    Ok(t)
}

fn execute(cli: &Cli) -> Result<(Report, Format), String> {
    let (path, cmd) = match &cli.command {
        Command::Check { taskfile } => (taskfile, "check"),
        Command::Profile { taskfile } => (taskfile, "profile"),
        Command::Sweep { taskfile } => (taskfile, "sweep"),
        Command::Axioms { taskfile } => (taskfile, "axioms"),
    };
    let t = load(path, cli)?;
    let format = cli.format.map_or(t.output.format, Format::from);
    let report = match cmd {
        "check" => run_task(&t),
        "profile" => match as_profile_task(&t) {
            Ok(p) => run_task(&p),
            Err(e) => return Err(format!("{}: {e}", path.display())),
        },
        "sweep" => {
            if !matches!(t.analysis, Analysis::Sweep { .. }) {
                return Err(format!("{}: not a sweep task", path.display()));
            }
            run_task(&t)
        }
        _ => run_axioms(&t),
    };
    Ok((report, format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 || rayon::ThreadPoolBuilder::new().num_threads(j).build_global().is_err() {
            eprintln!("prokit: --jobs must be a positive thread count");
            return ExitCode::from(USAGE_ERROR);
        }
    }
    match execute(&cli) {
        Ok((mut report, format)) => {
            if !cli.timing {
                report = report.body();
            }
            let mut out = std::io::stdout().lock();
            if out.write_all(&emit_report(&report, format)).is_err() {
                return ExitCode::from(USAGE_ERROR);
            }
            for e in &report.errors {
                eprintln!("prokit: {}: {}", e.context, e.message);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(msg) => {
            eprintln!("prokit: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

