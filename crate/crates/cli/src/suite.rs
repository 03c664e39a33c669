//! `run-suite`: every job file in a directory, checked against the
//! expectations it carries.

use std::fs;
use std::path::{Path, PathBuf};

use charplab_core::Error;
use serde_json::Value;

use crate::job::{Expectation, Job, Overrides};
use crate::report::{emit_csv, Format};
use crate::run_document;

pub struct JobResult {
    pub name: String,
    pub failures: Vec<String>,
}

/// Job files (`*.json`) of `dir`, sorted by file name.
pub fn job_files(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Input(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Input(format!("no job files in {}", dir.display())));
    }
    Ok(files)
}

fn number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::Object(m) => {
            let num = m.get("num")?.as_f64()?;
            let den = m.get("den")?.as_f64()?;
            Some(num / den)
        }
        _ => None,
    }
}

fn check(result: &Value, x: &Expectation) -> Option<String> {
    let Some(found) = result.pointer(&x.path) else {
        return Some(format!("{}: missing", x.path));
    };
    if let Some(want) = &x.equals {
        return (found != want).then(|| format!("{}: expected {want}, got {found}", x.path));
    }
    let Some(v) = number(found) else {
        return Some(format!("{}: {found} is not a number", x.path));
    };
    if let (Some(near), Some(tol)) = (x.near, x.tol) {
        return ((v - near).abs() > tol).then(|| format!("{}: {v} not within {tol} of {near}", x.path));
    }
    if let Some(b) = x.below {
        return (v >= b).then(|| format!("{}: {v} is not below {b}", x.path));
    }
    if let Some(a) = x.above {
        return (v <= a).then(|| format!("{}: {v} is not above {a}", x.path));
    }
    None
}

/// Runs one job file, writes `<stem>.csv` and `<stem>.json` into `out`, and
/// checks its expectations.
pub fn run_one(path: &Path, out: &Path) -> JobResult {
    let name = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let mut failures = Vec::new();
    let doc = Job::load(path).and_then(|job| run_document(job, None, &Overrides::default()));
    match doc {
        Ok(doc) => {
            let write = |ext: &str, bytes: &[u8]| fs::write(out.join(format!("{name}.{ext}")), bytes);
            if let Err(e) =
                write("csv", &emit_csv(&doc.outcome.table)).and_then(|_| write("json", &doc.emit(Format::Json)))
            {
                failures.push(format!("cannot write artifacts: {e}"));
            }
            if !doc.outcome.ok {
                failures.push("a checked property failed".into());
            }
            failures.extend(doc.job.expect.iter().filter_map(|x| check(&doc.outcome.result, x)));
        }
        Err(e) => failures.push(e.to_string()),
    }
    JobResult { name, failures }
}
