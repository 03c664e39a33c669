//! `m`-adic perturbation experiments: compare invariants of `R/(f)` with
//! those of `R/(f + ε)` for `ε` drawn from `m^N`.
//!
//! # Sampling
//!
//! Sample `k` uses a SplitMix64 generator whose state is
//! `seed + (k + 1) * 0x9E3779B97F4A7C15` (wrapping). For each target, in
//! target order, the draws are: number of terms `1 + r % 5`; then per term
//! the degree `N + r % (cap - N + 1)`, the monomial index `r % count` among
//! the degree's monomials in [`monomials_of_degree`] order, and (for the
//! discriminant mode only) the power of `z` as `r % n`, and finally the
//! coefficient code `1 + r % (q - 1)`.

use std::fmt;

use num_traits::Signed;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::discriminant::{disc_congruence_check, FiniteExtension};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::groebner::{is_squarefree_hypersurface, Ideal};
use crate::invariants::{
    ehk_estimate, fsig_estimate, hk_series, parameter_check, pow_u64, splitting_number, splitting_series, Estimate,
    QuotientPresentation, Rational,
};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::ensure_same;

pub use crate::groebner::monomials_of_degree;

pub const PRNG_NAME: &str = "SplitMix64";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    HkContinuity,
    FsigContinuity,
    SplittingConstancy,
    SplittingMonotonicity,
    SopStability,
    OpenQuestionProbe,
    DisCongruence,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::HkContinuity,
        Mode::FsigContinuity,
        Mode::SplittingConstancy,
        Mode::SplittingMonotonicity,
        Mode::SopStability,
        Mode::OpenQuestionProbe,
        Mode::DisCongruence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::HkContinuity => "hk-continuity",
            Mode::FsigContinuity => "fsig-continuity",
            Mode::SplittingConstancy => "splitting-constancy",
            Mode::SplittingMonotonicity => "splitting-monotonicity",
            Mode::SopStability => "sop-stability",
            Mode::OpenQuestionProbe => "open-question-probe",
            Mode::DisCongruence => "dis-congruence",
        }
    }

    pub fn parse(text: &str) -> Result<Mode> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == text)
            .ok_or_else(|| Error::input(format!("unknown perturbation mode '{text}'")))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct PerturbationPlan {
    pub presentation: QuotientPresentation,
    pub targets: Vec<Polynomial>,
    /// `ε ∈ m^N`
    pub neighborhood: u32,
    pub degree_cap: u32,
    pub samples: usize,
    pub seed: u64,
    pub e_range: Vec<u32>,
    pub mode: Mode,
    /// Fixed perturbations (one list per sample, one entry per target) used
    /// instead of sampling.
    pub epsilons: Option<Vec<Vec<Polynomial>>>,
    /// Continuity tolerance; defaults to four times the estimator spread.
    pub tolerance: Option<Rational>,
    /// Required congruence order in the discriminant mode; defaults to `N`.
    pub n_target: Option<u64>,
}

impl PerturbationPlan {
    pub fn new(presentation: QuotientPresentation, targets: Vec<Polynomial>, mode: Mode) -> Self {
        PerturbationPlan {
            presentation,
            targets,
            neighborhood: 2,
            degree_cap: 4,
            samples: 10,
            seed: 0,
            e_range: vec![1],
            mode,
            epsilons: None,
            tolerance: None,
            n_target: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.neighborhood < 1 {
            return Err(Error::input("neighborhood exponent N must be at least 1"));
        }
        if self.degree_cap < self.neighborhood {
            return Err(Error::input("degree_cap must be at least N"));
        }
        if self.samples < 1 {
            return Err(Error::input("samples must be at least 1"));
        }
        if self.e_range.is_empty() || self.e_range.windows(2).any(|w| w[0] >= w[1]) || self.e_range[0] == 0 {
            return Err(Error::input(
                "e_range must be a nonempty increasing list of positive integers",
            ));
        }
        if self.targets.is_empty() {
            return Err(Error::input("at least one target is required"));
        }
        for t in &self.targets {
            ensure_same(self.presentation.ring(), t.ring())?;
        }
        if let Some(eps) = &self.epsilons {
            if eps.is_empty() || eps.iter().any(|e| e.len() != self.targets.len()) {
                return Err(Error::input("each explicit perturbation needs one entry per target"));
            }
            for e in eps.iter().flatten() {
                ensure_same(self.presentation.ring(), e.ring())?;
            }
        }
        if self.mode == Mode::DisCongruence && self.targets.len() != 1 {
            return Err(Error::input("dis-congruence takes exactly one target"));
        }
        Ok(())
    }
}

fn sample_rng(seed: u64, index: usize) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed.wrapping_add((index as u64 + 1).wrapping_mul(GOLDEN)))
}

/// One perturbation per target for every sample (or the explicit ones).
pub fn sample_epsilons(plan: &PerturbationPlan) -> Result<Vec<Vec<Polynomial>>> {
    plan.validate()?;
    if let Some(eps) = &plan.epsilons {
        return Ok(eps.clone());
    }
    let ring = plan.presentation.ring();
    let n = ring.nvars();
    let q = ring.field().q() as u64;
    // in the discriminant mode ε lives in A[z] with z-degree below the rank
    let (base_vars, z_rank) = match plan.mode {
        Mode::DisCongruence => (n - 1, Some(FiniteExtension::new(&plan.targets[0])?.degree())),
        _ => (n, None),
    };
    if base_vars == 0 {
        return Err(Error::input("no monomials of positive degree are available"));
    }
    let low = plan.neighborhood as u64;
    let span = (plan.degree_cap - plan.neighborhood) as u64 + 1;
    let mut by_degree: Vec<Vec<Monomial>> = Vec::with_capacity(span as usize);
    for d in low..low + span {
        by_degree.push(monomials_of_degree(base_vars, d, 1_000_000)?);
    }
    let mut out = Vec::with_capacity(plan.samples);
    for k in 0..plan.samples {
        let mut rng = sample_rng(plan.seed, k);
        let mut per_target = Vec::with_capacity(plan.targets.len());
        for _ in &plan.targets {
            let nterms = 1 + rng.next_u64() % 5;
            let mut terms = Vec::with_capacity(nterms as usize);
            for _ in 0..nterms {
                let di = (rng.next_u64() % span) as usize;
                let monos = &by_degree[di];
                let m = &monos[(rng.next_u64() % monos.len() as u64) as usize];
                let mut exps = m.exps().to_vec();
                if let Some(rank) = z_rank {
                    exps.push((rng.next_u64() % rank as u64) as u32);
                }
                let c = 1 + rng.next_u64() % (q - 1);
                terms.push((Monomial::new(&exps), Fq::from_code(c as u32)));
            }
            per_target.push(Polynomial::from_terms(ring, terms));
        }
        out.push(per_target);
    }
    Ok(out)
}

/// Certified `N*`: perturbing `fs` inside `m^{N*}` leaves
/// `K = J + (fs) + m^[p^e]` unchanged.
///
/// With `m^s ⊆ K` and `ε ∈ m^{s+1} = m · m^s ⊆ mK`, the perturbed ideal `K'`
/// satisfies `K ⊆ K' + mK`, and Nakayama gives `K = K'`. Perturbing inside
/// `m^s` alone is not enough: `f = x^2` in `F_p[x]` has `s = 2`, and
/// `ε = -x^2` kills it. So `N* = s + 1`.
pub fn stability_threshold(r: &QuotientPresentation, fs: &[Polynomial], e: u32) -> Result<u64> {
    let box_ideal = Ideal::maximal_frobenius(r.ring(), e)?;
    let s = r
        .defining()
        .with_generators(fs.iter().cloned())?
        .sum(&box_ideal)?
        .m_power_in()?;
    Ok(s + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    Observed,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Observed => "observed",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One `(sample, e)` comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRow {
    pub sample: usize,
    pub epsilon: String,
    /// 0 for modes without a Frobenius level.
    pub e: u32,
    pub base: String,
    pub perturbed: String,
    pub delta: Option<Rational>,
    /// `(property, verdict)` pairs checked on this row.
    pub checks: Vec<(String, Verdict)>,
    pub error: Option<String>,
}

impl SampleRow {
    /// `property=verdict` pairs joined by `;`, or `error`.
    pub fn verdict_text(&self) -> String {
        if self.error.is_some() {
            return "error".into();
        }
        self.checks
            .iter()
            .map(|(p, v)| format!("{p}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub property: String,
    pub verdict: Verdict,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationReport {
    pub mode: Mode,
    pub seed: u64,
    pub prng: &'static str,
    pub neighborhood: u32,
    pub degree_cap: u32,
    pub samples: usize,
    pub e_range: Vec<u32>,
    pub rows: Vec<SampleRow>,
    pub verdicts: Vec<PropertyVerdict>,
    /// Certified `(e, N*)` pairs.
    pub thresholds: Vec<(u32, u64)>,
    pub hypotheses: Vec<String>,
    /// Outcomes contradicting a conjectured inequality (open-question probes).
    pub observations: Vec<String>,
}

impl PerturbationReport {
    pub fn verdict(&self, property: &str) -> Option<Verdict> {
        self.verdicts.iter().find(|v| v.property == property).map(|v| v.verdict)
    }

    /// No property failed and no sample errored.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict != Verdict::Fail) && self.rows.iter().all(|r| r.error.is_none())
    }
}

fn eps_text(eps: &[Polynomial]) -> String {
    eps.iter()
        .map(|e| e.to_text(MonomialOrder::Grevlex))
        .collect::<Vec<_>>()
        .join("; ")
}

fn perturbed_targets(targets: &[Polynomial], eps: &[Polynomial]) -> Result<Vec<Polynomial>> {
    targets.iter().zip(eps).map(|(f, e)| f.add(e)).collect()
}

fn rat_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Series values per `e` plus the estimator output over `e_range`.
struct Profile {
    values: Vec<Rational>,
    estimate: Option<Estimate>,
}

fn hk_profile(r: &QuotientPresentation, e_range: &[u32]) -> Result<Profile> {
    let max = *e_range.last().expect("validated");
    let series = hk_series(r, max)?;
    let values = e_range
        .iter()
        .map(|&e| series.rows[e as usize - 1].normalized)
        .collect();
    let estimate = if series.rows.len() >= 2 {
        Some(ehk_estimate(&series)?)
    } else {
        None
    };
    Ok(Profile { values, estimate })
}

fn fsig_profile(r: &QuotientPresentation, e_range: &[u32]) -> Result<Profile> {
    let max = *e_range.last().expect("validated");
    let series = splitting_series(r, max)?;
    let values = e_range
        .iter()
        .map(|&e| series.rows[e as usize - 1].normalized)
        .collect();
    let estimate = if series.rows.len() >= 2 {
        Some(fsig_estimate(&series)?)
    } else {
        None
    };
    Ok(Profile { values, estimate })
}

fn hypersurface_note(plan: &PerturbationPlan, label: &str, f: &Polynomial) -> String {
    if !plan.presentation.defining().is_zero() || plan.targets.len() != 1 {
        return format!("{label}: hypothesis unchecked (not a hypersurface in a polynomial ring)");
    }
    match is_squarefree_hypersurface(f) {
        Ok(true) => format!("{label}: squarefree hypersurface"),
        Ok(false) => format!("{label}: NOT squarefree, continuity hypothesis fails"),
        Err(e) => format!("{label}: hypothesis unchecked ({e})"),
    }
}

/// Runs every sample of the plan; samples run in parallel and the report is
/// assembled in `(sample, e)` order.
pub fn run_experiment(plan: &PerturbationPlan) -> Result<PerturbationReport> {
    plan.validate()?;
    let eps_all = sample_epsilons(plan)?;
    let r = &plan.presentation;
    let p = r.p() as u64;
    let n = r.ring().nvars() as u64;
    let mut thresholds = Vec::new();
    let mut hypotheses = Vec::new();
    let needs_thresholds = matches!(
        plan.mode,
        Mode::HkContinuity | Mode::FsigContinuity | Mode::SplittingConstancy | Mode::SplittingMonotonicity
    );
    if needs_thresholds {
        for &e in &plan.e_range {
            thresholds.push((e, stability_threshold(r, &plan.targets, e)?));
        }
    }
    if matches!(
        plan.mode,
        Mode::HkContinuity | Mode::FsigContinuity | Mode::OpenQuestionProbe
    ) {
        hypotheses.push(hypersurface_note(plan, "base", &plan.targets[0]));
    }
    let base_quot = if plan.mode == Mode::DisCongruence {
        None
    } else {
        Some(r.quotient_by(&plan.targets)?)
    };
    let ctx = Context {
        plan,
        base_quot: base_quot.as_ref(),
        thresholds: &thresholds,
        p,
        n,
    };
    let base = ctx.base_values()?;
    let per_sample: Vec<(Vec<SampleRow>, Vec<String>, Vec<String>)> = eps_all
        .par_iter()
        .enumerate()
        .map(|(k, eps)| ctx.run_sample(k, eps, &base))
        .collect();
    let mut rows = Vec::new();
    let mut observations = Vec::new();
    for (k, (r, obs, hyp)) in per_sample.into_iter().enumerate() {
        rows.extend(r);
        observations.extend(obs);
        for h in hyp {
            hypotheses.push(format!("sample {k}: {h}"));
        }
    }
    let verdicts = aggregate(&rows, plan.mode);
    Ok(PerturbationReport {
        mode: plan.mode,
        seed: plan.seed,
        prng: PRNG_NAME,
        neighborhood: plan.neighborhood,
        degree_cap: plan.degree_cap,
        samples: eps_all.len(),
        e_range: plan.e_range.clone(),
        rows,
        verdicts,
        thresholds,
        hypotheses,
        observations,
    })
}

fn aggregate(rows: &[SampleRow], mode: Mode) -> Vec<PropertyVerdict> {
    let mut names: Vec<String> = Vec::new();
    for row in rows {
        for (name, _) in &row.checks {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    let mut out = Vec::new();
    for name in names {
        let verdicts: Vec<Verdict> = rows
            .iter()
            .flat_map(|r| r.checks.iter().filter(|(n, _)| *n == name).map(|(_, v)| *v))
            .collect();
        let checked = verdicts
            .iter()
            .filter(|v| matches!(v, Verdict::Pass | Verdict::Fail))
            .count();
        let failed = verdicts.iter().filter(|v| **v == Verdict::Fail).count();
        let verdict = if mode == Mode::OpenQuestionProbe {
            Verdict::Observed
        } else if failed > 0 {
            Verdict::Fail
        } else if checked > 0 {
            Verdict::Pass
        } else {
            Verdict::Indeterminate
        };
        out.push(PropertyVerdict {
            property: name,
            verdict,
            checked,
            failed,
        });
    }
    out
}

enum BaseValues {
    Profile(Profile),
    Probe(Profile, Profile),
    Splitting(Vec<u64>),
    Sop(bool),
    Disc(FiniteExtension),
}

struct Context<'a> {
    plan: &'a PerturbationPlan,
    base_quot: Option<&'a QuotientPresentation>,
    thresholds: &'a [(u32, u64)],
    p: u64,
    n: u64,
}

impl Context<'_> {
    fn base_values(&self) -> Result<BaseValues> {
        let plan = self.plan;
        let e_range = &plan.e_range;
        Ok(match plan.mode {
            Mode::HkContinuity => BaseValues::Profile(hk_profile(self.quot(), e_range)?),
            Mode::FsigContinuity => BaseValues::Profile(fsig_profile(self.quot(), e_range)?),
            Mode::OpenQuestionProbe => {
                BaseValues::Probe(hk_profile(self.quot(), e_range)?, fsig_profile(self.quot(), e_range)?)
            }
            Mode::SplittingConstancy | Mode::SplittingMonotonicity => BaseValues::Splitting(
                e_range
                    .iter()
                    .map(|&e| splitting_number(self.quot(), e))
                    .collect::<Result<_>>()?,
            ),
            Mode::SopStability => BaseValues::Sop(parameter_check(&plan.presentation, &plan.targets)?),
            Mode::DisCongruence => BaseValues::Disc(FiniteExtension::new(&plan.targets[0])?),
        })
    }

    fn quot(&self) -> &QuotientPresentation {
        self.base_quot.expect("quotient present outside the discriminant mode")
    }

    fn row(&self, k: usize, eps: &str, e: u32) -> SampleRow {
        SampleRow {
            sample: k,
            epsilon: eps.to_string(),
            e,
            base: String::new(),
            perturbed: String::new(),
            delta: None,
            checks: Vec::new(),
            error: None,
        }
    }

    fn run_sample(
        &self,
        k: usize,
        eps: &[Polynomial],
        base: &BaseValues,
    ) -> (Vec<SampleRow>, Vec<String>, Vec<String>) {
        let text = eps_text(eps);
        let mut observations = Vec::new();
        let mut hypotheses = Vec::new();
        match self.sample_rows(k, eps, &text, base, &mut observations, &mut hypotheses) {
            Ok(rows) => (rows, observations, hypotheses),
            Err(err) => {
                let es: Vec<u32> = match self.plan.mode {
                    Mode::SopStability | Mode::DisCongruence => vec![0],
                    _ => self.plan.e_range.clone(),
                };
                let rows = es
                    .into_iter()
                    .map(|e| SampleRow {
                        error: Some(err.to_string()),
                        ..self.row(k, &text, e)
                    })
                    .collect();
                (rows, observations, hypotheses)
            }
        }
    }

    /// The bracket-power ideal is unchanged when `N >= N*(e)`.
    fn stability_check(&self, fs: &[Polynomial], e: u32, idx: usize) -> Result<Verdict> {
        let nstar = self.thresholds[idx].1;
        if (self.plan.neighborhood as u64) < nstar {
            return Ok(Verdict::Indeterminate);
        }
        let r = &self.plan.presentation;
        let box_ideal = Ideal::maximal_frobenius(r.ring(), e)?;
        let a = r
            .defining()
            .with_generators(self.plan.targets.iter().cloned())?
            .sum(&box_ideal)?;
        let b = r.defining().with_generators(fs.iter().cloned())?.sum(&box_ideal)?;
        let same = a.equals(&b, MonomialOrder::Grevlex)?;
        Ok(if same { Verdict::Pass } else { Verdict::Fail })
    }

    fn sample_rows(
        &self,
        k: usize,
        eps: &[Polynomial],
        text: &str,
        base: &BaseValues,
        observations: &mut Vec<String>,
        hypotheses: &mut Vec<String>,
    ) -> Result<Vec<SampleRow>> {
        let plan = self.plan;
        let e_range = &plan.e_range;
        let mut rows = Vec::new();
        match base {
            BaseValues::Profile(bp) => {
                let fs = perturbed_targets(&plan.targets, eps)?;
                hypotheses.push(hypersurface_note(plan, "perturbed", &fs[0]));
                let quot = plan.presentation.quotient_by(&fs)?;
                let pp = match plan.mode {
                    Mode::HkContinuity => hk_profile(&quot, e_range)?,
                    _ => fsig_profile(&quot, e_range)?,
                };
                let tol = plan.tolerance.or_else(|| {
                    let (a, b) = (bp.estimate.as_ref()?, pp.estimate.as_ref()?);
                    Some(Rational::from_integer(4) * a.spread.max(b.spread))
                });
                let name = match plan.mode {
                    Mode::HkContinuity => "hk-continuity",
                    _ => "fsig-continuity",
                };
                for (i, &e) in e_range.iter().enumerate() {
                    let mut row = self.row(k, text, e);
                    let delta = pp.values[i] - bp.values[i];
                    row.base = rat_text(&bp.values[i]);
                    row.perturbed = rat_text(&pp.values[i]);
                    row.delta = Some(delta);
                    if i + 1 == e_range.len() {
                        let v = match tol {
                            Some(t) if delta.abs() <= t => Verdict::Pass,
                            Some(_) => Verdict::Fail,
                            None => Verdict::Indeterminate,
                        };
                        row.checks.push((name.into(), v));
                    }
                    row.checks.push(("stability".into(), self.stability_check(&fs, e, i)?));
                    rows.push(row);
                }
            }
            BaseValues::Probe(bh, bs) => {
                let fs = perturbed_targets(&plan.targets, eps)?;
                let quot = plan.presentation.quotient_by(&fs)?;
                let ph = hk_profile(&quot, e_range)?;
                let ps = fsig_profile(&quot, e_range)?;
                for (i, &e) in e_range.iter().enumerate() {
                    for (label, b, pv, conj_holds) in [
                        ("ehk", bh.values[i], ph.values[i], bh.values[i] >= ph.values[i]),
                        ("fsig", bs.values[i], ps.values[i], bs.values[i] <= ps.values[i]),
                    ] {
                        let mut row = self.row(k, text, e);
                        row.base = rat_text(&b);
                        row.perturbed = rat_text(&pv);
                        row.delta = Some(pv - b);
                        row.checks.push((format!("{label}-probe"), Verdict::Observed));
                        if !conj_holds {
                            observations.push(format!(
                                "observation contradicting the conjectured inequality: sample {k}, e = {e}, {label} base {} vs perturbed {}",
                                rat_text(&b),
                                rat_text(&pv)
                            ));
                        }
                        rows.push(row);
                    }
                }
            }
            BaseValues::Splitting(base_a) => {
                let fs = perturbed_targets(&plan.targets, eps)?;
                let quot = plan.presentation.quotient_by(&fs)?;
                for (i, &e) in e_range.iter().enumerate() {
                    let a = splitting_number(&quot, e)?;
                    let b = base_a[i];
                    let mut row = self.row(k, text, e);
                    row.base = b.to_string();
                    row.perturbed = a.to_string();
                    row.delta = Some(Rational::from_integer(a as i128 - b as i128));
                    match plan.mode {
                        Mode::SplittingConstancy => {
                            // certified once ε ∈ m^[q]: then (f + ε)^{q-1} ≡ f^{q-1}
                            let q = pow_u64(self.p, e as u64)?;
                            let bound = self.thresholds[i].1.max(self.n * (q - 1) + 1);
                            let v = if (plan.neighborhood as u64) < bound {
                                Verdict::Indeterminate
                            } else if a == b {
                                Verdict::Pass
                            } else {
                                Verdict::Fail
                            };
                            row.checks.push(("constancy".into(), v));
                            row.checks.push(("stability".into(), self.stability_check(&fs, e, i)?));
                        }
                        _ => {
                            let v = if a <= b { Verdict::Pass } else { Verdict::Fail };
                            row.checks.push(("monotonicity".into(), v));
                            row.checks.push(("stability".into(), self.stability_check(&fs, e, i)?));
                        }
                    }
                    rows.push(row);
                }
            }
            BaseValues::Sop(base_ok) => {
                let fs = perturbed_targets(&plan.targets, eps)?;
                let ok = parameter_check(&plan.presentation, &fs)?;
                let mut row = self.row(k, text, 0);
                row.base = base_ok.to_string();
                row.perturbed = ok.to_string();
                row.delta = Some(Rational::from_integer((ok as i128) - (*base_ok as i128)));
                let v = match (base_ok, ok) {
                    (false, _) => Verdict::Indeterminate,
                    (true, true) => Verdict::Pass,
                    (true, false) => Verdict::Fail,
                };
                row.checks.push(("sop-stability".into(), v));
                rows.push(row);
            }
            BaseValues::Disc(ext) => {
                let target = plan.n_target.unwrap_or(plan.neighborhood as u64);
                let rep = disc_congruence_check(ext, &eps[0], target)?;
                let mut row = self.row(k, text, 0);
                row.base = rep.base.to_string();
                row.perturbed = rep.perturbed.to_string();
                row.delta = rep.order.map(|o| Rational::from_integer(o as i128));
                row.checks.push((
                    "dis-congruence".into(),
                    if rep.pass { Verdict::Pass } else { Verdict::Fail },
                ));
                rows.push(row);
            }
        }
        Ok(rows)
    }
}
