//! Report documents and their CSV / JSON encodings.

use charplab_core::invariants::Rational;
use charplab_core::Error;
use serde_json::{json, Map, Value};

use crate::job::Job;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A header and string cells, emitted as CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a task hands back: the JSON payload, its tabular view, and whether
/// every property the task checks held.
pub struct Outcome {
    pub result: Value,
    pub table: Table,
    pub ok: bool,
}

pub struct Document {
    pub job: Job,
    pub task: &'static str,
    pub outcome: Outcome,
    pub exit: i32,
}

impl Document {
    pub fn to_json(&self) -> Value {
        let seed = self.job.params.seed;
        json!({
            "job": serde_json::to_value(&self.job).expect("jobs serialize"),
            "task": self.task,
            "result": self.outcome.result,
            "provenance": {
                "artifact": "charplab",
                "version": env!("CARGO_PKG_VERSION"),
                "seed": seed,
                "prng": charplab_core::perturb::PRNG_NAME,
            },
            "status": {"exit": self.exit},
        })
    }

    pub fn emit(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => emit_csv(&self.outcome.table),
            Format::Json => {
                let mut out = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
                out.push('\n');
                out.into_bytes()
            }
        }
    }
}

/// RFC 4180 quoting, LF line endings.
pub fn emit_csv(table: &Table) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn int(v: i128) -> Result<Value, Error> {
    if let Ok(v) = i64::try_from(v) {
        Ok(Value::from(v))
    } else if let Ok(v) = u64::try_from(v) {
        Ok(Value::from(v))
    } else {
        Err(Error::Limit(format!("{v} does not fit a 64-bit JSON integer")))
    }
}

pub fn rat(r: &Rational) -> Result<Value, Error> {
    let mut m = Map::new();
    m.insert("num".into(), int(*r.numer())?);
    m.insert("den".into(), int(*r.denom())?);
    Ok(Value::Object(m))
}

pub fn rat_cells(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}
