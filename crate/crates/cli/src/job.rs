//! Job files: one JSON document naming a field, a ring, an ideal and a task.

use std::path::Path;

use charplab_core::groebner::subalgebra_presentation;
use charplab_core::invariants::{QuotientPresentation, Rational};
use charplab_core::{parse_poly, Error, Field, FieldSpec, Ideal, Limits, MonomialOrder, Polynomial, Ring, RingSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Gb,
    Length,
    Dim,
    Hk,
    Fsig,
    Fpt,
    Mult,
    Disc,
    Present,
    Perturb,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Gb => "gb",
            Task::Length => "length",
            Task::Dim => "dim",
            Task::Hk => "hk",
            Task::Fsig => "fsig",
            Task::Fpt => "fpt",
            Task::Mult => "mult",
            Task::Disc => "disc",
            Task::Present => "present",
            Task::Perturb => "perturb",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJob {
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Defining polynomial coefficients, constant term first, without the
    /// leading 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalJob {
    pub num: i64,
    pub den: i64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_range: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub neighborhood: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_target: Option<u64>,
    /// Fixed perturbations for `perturb`, one list per sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<Vec<String>>>,
    /// Single perturbation for `disc`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<RationalJob>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsJob {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_basis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_seconds: Option<f64>,
}

/// A check on the result payload, addressed by JSON pointer. Exactly one of
/// `equals`, `near`, `below` or `above` is set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equals: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub below: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub above: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub field: FieldJob,
    pub variables: Vec<String>,
    /// Generators of the defining ideal `J`.
    #[serde(default)]
    pub ideal: Vec<String>,
    /// When present the ring becomes the presentation of the subalgebra these
    /// polynomials generate, with variables `a1, a2, ...`, and `ideal` is read
    /// in that ring.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subalgebra: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub limits: LimitsJob,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Expectation>,
}

/// Command-line values that replace the job file's own.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub order: Option<String>,
    pub e_max: Option<u32>,
    pub neighborhood: Option<u32>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub limit_basis: Option<usize>,
    pub limit_degree: Option<u64>,
}

impl Job {
    pub fn load(path: &Path) -> Result<Job, Error> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Job::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Job, Error> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("job file: {e}")))
    }

    pub fn apply(&mut self, o: &Overrides) {
        let p = &mut self.params;
        if o.order.is_some() {
            p.order.clone_from(&o.order);
        }
        if let Some(e) = o.e_max {
            p.e_max = Some(e);
            if p.e_range.is_some() {
                p.e_range = Some((1..=e).collect());
            }
        }
        p.neighborhood = o.neighborhood.or(p.neighborhood);
        p.samples = o.samples.or(p.samples);
        p.seed = o.seed.or(p.seed);
        self.limits.max_basis = o.limit_basis.or(self.limits.max_basis);
        self.limits.max_degree = o.limit_degree.or(self.limits.max_degree);
    }

    /// The task to run: the subcommand's, which must agree with the file's.
    pub fn resolve_task(&self, requested: Option<Task>) -> Result<Task, Error> {
        match (requested, self.task) {
            (Some(r), Some(t)) if r != t => Err(Error::Input(format!(
                "job file declares task '{}' but '{}' was requested",
                t.name(),
                r.name()
            ))),
            (Some(t), _) | (None, Some(t)) => Ok(t),
            (None, None) => Err(Error::Input("job file names no task".into())),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if let Some(order) = &self.params.order {
            MonomialOrder::parse(order)?;
        }
        if self.params.e_max == Some(0) {
            return Err(Error::Input("e_max must be at least 1".into()));
        }
        if let Some(t) = self.params.tolerance {
            if t.den <= 0 || t.num < 0 {
                return Err(Error::Input(
                    "tolerance must be a nonnegative rational with positive denominator".into(),
                ));
            }
        }
        if let Some(s) = self.limits.max_seconds {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Input("max_seconds must be positive".into()));
            }
        }
        for x in &self.expect {
            let kinds = [
                x.equals.is_some(),
                x.near.is_some(),
                x.below.is_some(),
                x.above.is_some(),
            ];
            if kinds.iter().filter(|&&k| k).count() != 1 {
                return Err(Error::Input(format!(
                    "expectation on {} needs exactly one check",
                    x.path
                )));
            }
            if x.near.is_some() != x.tol.is_some() {
                return Err(Error::Input(format!(
                    "expectation on {}: near and tol go together",
                    x.path
                )));
            }
        }
        Ok(())
    }
}

/// The parsed algebraic data of a job.
pub struct Context {
    pub ring: Ring,
    pub presentation: QuotientPresentation,
    /// Variables of the ring before a subalgebra presentation replaced it.
    pub source_ring: Option<Ring>,
    pub order: MonomialOrder,
}

impl Context {
    pub fn build(job: &Job) -> Result<Context, Error> {
        job.validate()?;
        let spec = match (job.field.m.unwrap_or(1), &job.field.modulus) {
            (1, None) => FieldSpec::prime(job.field.p),
            (m, Some(modulus)) => FieldSpec::extension(job.field.p, m, modulus.clone()),
            (m, None) => FieldSpec::with_default_modulus(job.field.p, m)?,
        };
        let field = Field::new(spec)?;
        let mut limits = Limits::default();
        if let Some(b) = job.limits.max_basis {
            limits.max_basis = b;
        }
        if let Some(d) = job.limits.max_degree {
            limits.max_degree = d;
        }
        if let Some(s) = job.limits.max_seconds {
            limits = limits.with_timeout(s);
        }
        let base = RingSpec::with_limits(field, job.variables.clone(), limits)?;
        let (ring, source_ring, mut gens) = match &job.subalgebra {
            Some(sub) => {
                let polys = parse_all(&base, sub)?;
                let pres = subalgebra_presentation(&polys)?;
                (pres.ring().clone(), Some(base), pres.generators().to_vec())
            }
            None => (base, None, Vec::new()),
        };
        gens.extend(parse_all(&ring, &job.ideal)?);
        let presentation = QuotientPresentation::new(Ideal::new(&ring, gens)?)?;
        let order = match &job.params.order {
            Some(o) => MonomialOrder::parse(o)?,
            None => MonomialOrder::Grevlex,
        };
        Ok(Context {
            ring,
            presentation,
            source_ring,
            order,
        })
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, Error> {
        parse_poly(text, &self.ring)
    }

    pub fn targets(&self, job: &Job) -> Result<Vec<Polynomial>, Error> {
        parse_all(&self.ring, job.params.targets.as_deref().unwrap_or_default())
    }
}

pub fn parse_all(ring: &Ring, texts: &[String]) -> Result<Vec<Polynomial>, Error> {
    texts.iter().map(|t| parse_poly(t, ring)).collect()
}

pub fn rational(r: RationalJob) -> Rational {
    Rational::new(r.num as i128, r.den as i128)
}
