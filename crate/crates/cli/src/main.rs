mod config;

use std::fs;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use config::{ensure_writable, Flags, RunConfig};
use semiorbit::algebra::ProjectivePointQ;
use semiorbit::analytics::{write_csv, AnalysisOptions, AnalysisReport};
use semiorbit::dynamics::{load_system, SemigroupSystem};
use semiorbit::hypothesis::{verify, Route, VerifyOptions, VerifyReport};
use semiorbit::modp::{cache_file, cached_records, sweep, ModpError, SweepConfig};

const EXIT_OK: u8 = 0;
const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NO_ROUTE: u8 = 3;
const EXIT_ABEL: u8 = 4;
const EXIT_CACHE: u8 = 5;
const EXIT_INTERRUPTED: u8 = 130;

#[derive(Parser)]
#[command(name = "semiorbit", version, about = "Semigroup orbits of rational maps modulo primes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the map hypotheses and report which theorem route applies
    Verify(Flags),
    /// Compute orbit sizes for all primes up to X into the cache
    Sweep(Flags),
    /// Aggregate cached orbit sizes into sums, densities and growth tables
    Analyze(Flags),
    /// Verification verdicts and analysis bundled into one document
    Report(Flags),
}

/// A command that could not produce its normal output.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl From<ModpError> for Failure {
    fn from(e: ModpError) -> Self {
        let code = match e {
            ModpError::Interrupted { .. } => EXIT_INTERRUPTED,
            ModpError::CacheIncomplete { .. } => EXIT_CACHE,
            ModpError::Io(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        let mut message = e.to_string();
        if code == EXIT_CACHE {
            message.push_str(" (semiorbit sweep --primes-up-to X)");
        }
        Self { code, message }
    }
}

struct Outcome {
    code: u8,
    name: &'static str,
    document: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cancel = Arc::new(AtomicBool::new(false));
    {
        let cancel = Arc::clone(&cancel);
        let _ = ctrlc::set_handler(move || cancel.store(true, Ordering::SeqCst));
    }
    let (name, result) = match cli.command {
        Command::Verify(f) => ("verify", RunConfig::resolve(f).and_then(|c| cmd_verify(&c))),
        Command::Sweep(f) => ("sweep", RunConfig::resolve(f).and_then(|c| cmd_sweep(&c, &cancel))),
        Command::Analyze(f) => ("analyze", RunConfig::resolve(f).and_then(|c| cmd_analyze(&c))),
        Command::Report(f) => ("report", RunConfig::resolve(f).and_then(|c| cmd_report(&c))),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome.code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            let doc = json!({ "command": name, "status": "error", "code": failure.code, "message": failure.message });
            println!("{}", serde_json::to_string_pretty(&doc).expect("plain JSON"));
            ExitCode::from(failure.code)
        }
    }
}

fn load(config: &RunConfig) -> Result<(SemigroupSystem, ProjectivePointQ), Failure> {
    load_system(&config.system).map_err(|e| Failure::input(format!("{}: {e}", config.system.display())))
}

/// Prints the document and writes `<out>/<name>.json` when an output directory is set.
fn emit(config: &RunConfig, outcome: Outcome) -> Result<Outcome, Failure> {
    let text = serde_json::to_string_pretty(&outcome.document).map_err(|e| Failure::internal(e.to_string()))?;
    if let Some(dir) = &config.out {
        fs::write(dir.join(format!("{}.json", outcome.name)), format!("{text}\n"))
            .map_err(|e| Failure::internal(format!("cannot write report: {e}")))?;
    }
    println!("{text}");
    Ok(outcome)
}

fn prepare_out(config: &RunConfig) -> Result<(), Failure> {
    match &config.out {
        Some(dir) => ensure_writable(dir),
        None => Ok(()),
    }
}

fn run_verify(config: &RunConfig, system: &SemigroupSystem, point: &ProjectivePointQ) -> Result<VerifyReport, Failure> {
    let options = VerifyOptions { depth: config.depth, ..VerifyOptions::default() };
    verify(system, point, &options).map_err(|e| Failure::internal(e.to_string()))
}

fn cmd_verify(config: &RunConfig) -> Result<Outcome, Failure> {
    prepare_out(config)?;
    let (system, point) = load(config)?;
    let report = run_verify(config, &system, &point)?;
    let code = if report.route == Route::None { EXIT_NO_ROUTE } else { EXIT_OK };
    emit(config, Outcome { code, name: "verify", document: document("verify", config, &report) })
}

fn document(name: &str, config: &RunConfig, report: &impl Serialize) -> Value {
    json!({ "command": name, "config": config, "report": report })
}

fn cmd_sweep(config: &RunConfig, cancel: &AtomicBool) -> Result<Outcome, Failure> {
    prepare_out(config)?;
    let bound = config.prime_bound()?;
    let (system, point) = load(config)?;
    ensure_writable(&config.cache)?;
    let sweep_config = SweepConfig::new(bound).workers(config.workers).cache_dir(&config.cache);
    let total = semiorbit::modp::primes_up_to(bound).len();
    let step = (total / 10).max(1);
    let mut seen = 0usize;
    let outcome = sweep(&system, &point, &sweep_config, cancel, |rec, _| {
        seen += 1;
        if seen.is_multiple_of(step) || seen == total {
            eprintln!("sweep: {seen}/{total} primes (p = {})", rec.p);
        }
    })?;
    let bad: Vec<u64> = outcome.records.iter().filter(|r| !r.good).map(|r| r.p).collect();
    let summary = json!({
        "prime_bound": bound,
        "primes": outcome.records.len(),
        "cache_file": cache_file(&config.cache, &system, &point),
        "bad_primes": bad,
        "max_m": outcome.records.iter().filter_map(|r| r.m_finite()).max(),
    });
    eprintln!("sweep: {} from cache, {} computed", outcome.cache_hits, outcome.computed);
    emit(config, Outcome { code: EXIT_OK, name: "sweep", document: document("sweep", config, &summary) })
}

fn analysis(config: &RunConfig, system: &SemigroupSystem, point: &ProjectivePointQ) -> Result<AnalysisReport, Failure> {
    let bound = config.prime_bound()?;
    let records = cached_records(&config.cache, system, point, bound)?;
    let options = AnalysisOptions {
        epsilons: config.epsilon.clone(),
        gammas: config.gamma.clone(),
        m_list: config.m.clone(),
        ..AnalysisOptions::default()
    };
    let report = AnalysisReport::build(system, point, &records, bound, &options)
        .map_err(|e| Failure::input(e.to_string()))?;
    if let Some(dir) = &config.out {
        for table in report.tables() {
            write_csv(dir, &table, bound).map_err(|e| Failure::internal(format!("cannot write table: {e}")))?;
        }
    }
    Ok(report)
}

fn cmd_analyze(config: &RunConfig) -> Result<Outcome, Failure> {
    prepare_out(config)?;
    let (system, point) = load(config)?;
    let report = analysis(config, &system, &point)?;
    let code = if report.abel_ok { EXIT_OK } else { EXIT_ABEL };
    emit(config, Outcome { code, name: "analyze", document: document("analyze", config, &report) })
}

fn cmd_report(config: &RunConfig) -> Result<Outcome, Failure> {
    prepare_out(config)?;
    let (system, point) = load(config)?;
    let verdicts = run_verify(config, &system, &point)?;
    let report = analysis(config, &system, &point)?;
    let code = if report.abel_ok { EXIT_OK } else { EXIT_ABEL };
    let bundle = json!({ "verify": verdicts, "analysis": report });
    emit(config, Outcome { code, name: "report", document: document("report", config, &bundle) })
}
