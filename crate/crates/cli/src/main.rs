//! `yangian`: run verification scenarios and dump image tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use yangian_core::gklo::GkloContext;
use yangian_core::scenario::{self, OrientationChoice, RunOptions, Scenario};

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "yangian", version, about = "Exact verification of GKLO images of shifted Yangians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orientation {
    Default,
    Reversed,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpWhat {
    Images,
    Rseries,
    ReportSchema,
}

#[derive(Subcommand)]
enum Command {
    /// Run every suite selected by a scenario file.
    Verify {
        scenario: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        orientation: Option<Orientation>,
        /// Worker threads; 0 uses all cores.
        #[arg(long, env = "YANGIAN_JOBS", default_value_t = 0)]
        jobs: usize,
        /// Directory for report.json, summary.txt and timings.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print structured data for a scenario.
    Dump {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        what: DumpWhat,
    },
}

fn load(path: &Path, opts: &RunOptions) -> Result<scenario::Resolved, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let s = Scenario::from_toml(&text).map_err(|e| e.to_string())?;
    scenario::apply_overrides(&s, opts).resolve().map_err(|e| e.to_string())
}

/// Write to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {}", dir.display(), e))?;
    for (name, body) in files {
        let p = dir.join(name);
        fs::write(&p, body).map_err(|e| format!("cannot write {}: {}", p.display(), e))?;
    }
    Ok(())
}

fn verify(path: &Path, opts: RunOptions, jobs: usize, out: Option<PathBuf>) -> ExitCode {
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let r = match load(path, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let (report, timings) = scenario::run(&r);
    let summary = scenario::summary_text(&report, &timings);
    emit(&summary);
    let dir = out.unwrap_or_else(|| PathBuf::from("yangian-out").join(&report.scenario));
    let files = [
        ("report.json", serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
        ("timings.json", serde_json::to_string_pretty(&timings).expect("timings serialize") + "\n"),
        ("summary.txt", summary),
    ];
    if let Err(e) = write_outputs(&dir, &files) {
        eprintln!("error: {}", e);
        return ExitCode::from(EXIT_INVALID);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn dump(path: &Path, what: DumpWhat) -> ExitCode {
    let value = match what {
        DumpWhat::ReportSchema => scenario::report_schema(),
        DumpWhat::Images | DumpWhat::Rseries => {
            let r = match load(path, &RunOptions::default()) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(EXIT_INVALID);
                }
            };
            let ctx = match GkloContext::build(&r.cd, &r.lambda, &r.mu, r.c_mode.clone(), r.scenario.order) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(EXIT_FAIL);
                }
            };
            match what {
                DumpWhat::Images => scenario::dump_images(&ctx),
                _ => scenario::dump_rseries(&ctx),
            }
        }
    };
    emit(&(serde_json::to_string_pretty(&value).expect("json") + "\n"));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Verify { scenario, order, seed, orientation, jobs, out } => {
            let orientation = orientation.map(|o| match o {
                Orientation::Default => OrientationChoice::Default,
                Orientation::Reversed => OrientationChoice::Reversed,
            });
            verify(&scenario, RunOptions { order, seed, orientation }, jobs, out)
        }
        Command::Dump { scenario, what } => dump(&scenario, what),
    }
}
