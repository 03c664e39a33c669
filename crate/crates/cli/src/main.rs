//! `charplab`: run algebra jobs from JSON files and emit CSV or JSON reports.
//!
//! Exit status: 0 success, 1 input or parse error, 2 resource limit hit,
//! 3 internal invariant violated or a checked property failed.

mod job;
mod report;
mod suite;
mod tasks;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charplab_core::Error;
use clap::{Args, Parser, Subcommand};

use job::{Job, Overrides, Task};
use report::{Document, Format};

#[derive(Parser)]
#[command(name = "charplab", version, about = "Characteristic-p invariants from job files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Gröbner basis of the defining ideal
    Gb(JobArgs),
    /// Colength of a zero-dimensional ideal
    Length(JobArgs),
    /// Krull dimension, and a parameter check of any targets
    Dim(JobArgs),
    /// Hilbert-Kunz lengths and multiplicity estimate
    Hk(JobArgs),
    /// Splitting numbers and F-signature estimate
    Fsig(JobArgs),
    /// ν_e series and F-pure threshold interval
    Fpt(JobArgs),
    /// Hilbert-Samuel multiplicity after cutting by the targets
    Mult(JobArgs),
    /// Trace-form discriminant of A[z]/(f)
    Disc(JobArgs),
    /// Presentation of a subalgebra
    Present(JobArgs),
    /// m-adic perturbation experiment
    Perturb(JobArgs),
    /// Run every job file in a directory and check its expectations
    RunSuite(SuiteArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Job file (JSON)
    #[arg(long)]
    job: PathBuf,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// grevlex, lex or block:<k>
    #[arg(long)]
    order: Option<String>,
    /// Largest Frobenius level e
    #[arg(long)]
    emax: Option<u32>,
    /// Perturbations are drawn from m^N
    #[arg(long)]
    neighborhood: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Give up once a Gröbner basis grows past this many elements
    #[arg(long)]
    limit_basis: Option<usize>,
    /// Give up once a polynomial in a Gröbner computation exceeds this degree
    #[arg(long)]
    limit_degree: Option<u64>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Directory of job files
    #[arg(long, default_value = "paper-suite")]
    dir: PathBuf,
    /// Directory receiving one CSV and one JSON artifact per job
    #[arg(long, default_value = "suite-out")]
    out: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Input(_) | Error::Arithmetic(_) => 1,
        Error::Limit(_) => 2,
        Error::Invariant(_) => 3,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Input(_) => "input",
        Error::Arithmetic(_) => "arithmetic",
        Error::Limit(_) => "limit",
        Error::Invariant(_) => "invariant",
    }
}

fn fail(e: &Error) -> ExitCode {
    let msg = serde_json::to_string(&e.to_string()).expect("strings serialize");
    eprintln!("charplab: error kind={} message={msg}", kind(e));
    ExitCode::from(exit_code(e))
}

/// Runs `job` (with `overrides` applied) and assembles its report.
pub(crate) fn run_document(mut job: Job, requested: Option<Task>, overrides: &Overrides) -> Result<Document, Error> {
    job.apply(overrides);
    let task = job.resolve_task(requested)?;
    job.task = Some(task);
    let outcome = tasks::run(task, &job)?;
    let exit = if outcome.ok { 0 } else { 3 };
    Ok(Document {
        job,
        task: task.name(),
        outcome,
        exit,
    })
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::Input(format!("cannot write report: {e}"));
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(io),
        None => std::io::stdout().write_all(bytes).map_err(io),
    }
}

fn run_job(task: Task, args: &JobArgs) -> ExitCode {
    let overrides = Overrides {
        order: args.order.clone(),
        e_max: args.emax,
        neighborhood: args.neighborhood,
        samples: args.samples,
        seed: args.seed,
        limit_basis: args.limit_basis,
        limit_degree: args.limit_degree,
    };
    let doc = match Job::load(&args.job).and_then(|job| run_document(job, Some(task), &overrides)) {
        Ok(doc) => doc,
        Err(e) => return fail(&e),
    };
    if let Err(e) = write_out(args.out.as_deref(), &doc.emit(args.format)) {
        return fail(&e);
    }
    if doc.exit != 0 {
        eprintln!("charplab: error kind=property message=\"a checked property failed\"");
    }
    ExitCode::from(doc.exit as u8)
}

fn run_suite(args: &SuiteArgs) -> ExitCode {
    let files = match suite::job_files(&args.dir) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    if let Err(e) = std::fs::create_dir_all(&args.out) {
        return fail(&Error::Input(format!("cannot create {}: {e}", args.out.display())));
    }
    let mut failed = 0;
    for path in &files {
        let r = suite::run_one(path, &args.out);
        if r.failures.is_empty() {
            println!("PASS {}", r.name);
        } else {
            failed += 1;
            println!("FAIL {}: {}", r.name, r.failures.join("; "));
        }
    }
    println!("suite: {}/{} passed", files.len() - failed, files.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("CHARPLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Input(format!("CHARPLAB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    let (task, args) = match &cli.command {
        Command::RunSuite(a) => return run_suite(a),
        Command::Gb(a) => (Task::Gb, a),
        Command::Length(a) => (Task::Length, a),
        Command::Dim(a) => (Task::Dim, a),
        Command::Hk(a) => (Task::Hk, a),
        Command::Fsig(a) => (Task::Fsig, a),
        Command::Fpt(a) => (Task::Fpt, a),
        Command::Mult(a) => (Task::Mult, a),
        Command::Disc(a) => (Task::Disc, a),
        Command::Present(a) => (Task::Present, a),
        Command::Perturb(a) => (Task::Perturb, a),
    };
    run_job(task, args)
}
