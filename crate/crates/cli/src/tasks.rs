//! One runner per task. Each returns the JSON payload and its CSV view.

use charplab_core::discriminant::{disc_congruence_check, FiniteExtension, Matrix};
use charplab_core::invariants::{
    ehk_estimate, fpt_estimate, fsig_estimate, hk_series, hs_multiplicity, nu_series, parameter_check,
    splitting_series, ConvergenceDiagnostic, Estimate,
};
use charplab_core::perturb::{run_experiment, Mode, PerturbationPlan, PerturbationReport};
use charplab_core::{Error, Fq, MonomialOrder, Polynomial};
use serde_json::{json, Value};

use crate::job::{rational, Context, Job, Task};
use crate::report::{int, rat, rat_cells, Outcome, Table};

type Result<T> = std::result::Result<T, Error>;

pub fn run(task: Task, job: &Job) -> Result<Outcome> {
    let cx = Context::build(job)?;
    match task {
        Task::Gb => gb(&cx, job),
        Task::Length => length(&cx),
        Task::Dim => dim(&cx, job),
        Task::Hk => hk(&cx, job),
        Task::Fsig => fsig(&cx, job),
        Task::Fpt => fpt(&cx, job),
        Task::Mult => mult(&cx, job),
        Task::Disc => disc(&cx, job),
        Task::Present => present(&cx),
        Task::Perturb => perturb(&cx, job),
    }
}

fn ok(result: Value, table: Table) -> Result<Outcome> {
    Ok(Outcome {
        result,
        table,
        ok: true,
    })
}

fn text(f: &Polynomial, order: MonomialOrder) -> String {
    f.to_text(order)
}

fn e_max(job: &Job, default: u32) -> u32 {
    job.params.e_max.unwrap_or(default)
}

fn gb(cx: &Context, job: &Job) -> Result<Outcome> {
    let ideal = cx.presentation.defining();
    let basis = ideal.groebner_basis(cx.order)?;
    let polys = basis.polynomials();
    let leads: Vec<String> = basis
        .leading_monomials()
        .into_iter()
        .map(|m| text(&Polynomial::from_terms(&cx.ring, [(m, Fq::ONE)]), cx.order))
        .collect();
    let mut table = Table::new(&["index", "polynomial"]);
    for (i, f) in polys.iter().enumerate() {
        table.push(vec![i.to_string(), text(f, cx.order)]);
    }
    let mut normal_forms = Vec::new();
    for t in cx.targets(job)? {
        normal_forms.push(json!({
            "polynomial": text(&t, cx.order),
            "normal_form": text(&basis.normal_form(&t)?, cx.order),
        }));
    }
    ok(
        json!({
            "order": cx.order.name(),
            "size": polys.len(),
            "basis": basis.to_strings(),
            "leading_monomials": leads,
            "normal_forms": normal_forms,
        }),
        table,
    )
}

fn length(cx: &Context) -> Result<Outcome> {
    let ideal = cx.presentation.defining();
    let length = ideal.colength()?;
    let m_power = ideal.m_power_in()?;
    let mut table = Table::new(&["length", "m_power"]);
    table.push(vec![length.to_string(), m_power.to_string()]);
    ok(json!({"length": length, "m_power": m_power}), table)
}

fn dim(cx: &Context, job: &Job) -> Result<Outcome> {
    let d = cx.presentation.dim();
    let mut result = json!({"dim": d});
    let targets = cx.targets(job)?;
    let mut table = Table::new(&["dim", "parameters"]);
    let mut param_cell = String::new();
    if !targets.is_empty() {
        let is_param = parameter_check(&cx.presentation, &targets)?;
        result["parameters"] = Value::Bool(is_param);
        param_cell = is_param.to_string();
    }
    table.push(vec![d.to_string(), param_cell]);
    ok(result, table)
}

fn estimate(e: &Estimate) -> Result<Value> {
    Ok(json!({
        "value": rat(&e.value)?,
        "spread": rat(&e.spread)?,
        "single_step": e.single_step,
    }))
}

fn diagnostic(d: &ConvergenceDiagnostic) -> Result<Value> {
    let devs = d
        .deviations
        .iter()
        .map(|(e, v)| Ok(json!({"e": e, "deviation": rat(v)?})))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"constant": rat(&d.constant)?, "deviations": devs}))
}

fn hk(cx: &Context, job: &Job) -> Result<Outcome> {
    let series = hk_series(&cx.presentation, e_max(job, 3))?;
    let mut table = Table::new(&["e", "q", "length", "normalized_num", "normalized_den"]);
    let mut rows = Vec::new();
    for r in &series.rows {
        let [n, d] = rat_cells(&r.normalized);
        table.push(vec![r.e.to_string(), r.q.to_string(), r.length.to_string(), n, d]);
        rows.push(json!({"e": r.e, "q": r.q, "length": r.length, "normalized": rat(&r.normalized)?}));
    }
    let (est, diag) = if series.rows.len() >= 2 {
        (estimate(&ehk_estimate(&series)?)?, diagnostic(&series.diagnostic()?)?)
    } else {
        (Value::Null, Value::Null)
    };
    ok(
        json!({"p": series.p, "d": series.d, "rows": rows, "estimate": est, "diagnostic": diag}),
        table,
    )
}

fn fsig(cx: &Context, job: &Job) -> Result<Outcome> {
    let series = splitting_series(&cx.presentation, e_max(job, 3))?;
    let mut table = Table::new(&["e", "q", "a_e", "normalized_num", "normalized_den"]);
    let mut rows = Vec::new();
    for r in &series.rows {
        let [n, d] = rat_cells(&r.normalized);
        table.push(vec![r.e.to_string(), r.q.to_string(), r.a_e.to_string(), n, d]);
        rows.push(json!({"e": r.e, "q": r.q, "a_e": r.a_e, "normalized": rat(&r.normalized)?}));
    }
    let (est, diag) = if series.rows.len() >= 2 {
        (estimate(&fsig_estimate(&series)?)?, diagnostic(&series.diagnostic()?)?)
    } else {
        (Value::Null, Value::Null)
    };
    ok(
        json!({"p": series.p, "d": series.d, "rows": rows, "estimate": est, "diagnostic": diag}),
        table,
    )
}

/// The polynomial a single-polynomial task acts on: the first target, or
/// the defining ideal's only generator.
fn subject(cx: &Context, job: &Job) -> Result<Polynomial> {
    if let Some(t) = cx.targets(job)?.into_iter().next() {
        return Ok(t);
    }
    match cx.presentation.defining().generators() {
        [f] => Ok(f.clone()),
        _ => Err(Error::Input(
            "this task needs one target or a single ideal generator".into(),
        )),
    }
}

fn fpt(cx: &Context, job: &Job) -> Result<Outcome> {
    let f = subject(cx, job)?;
    let series = nu_series(&f, e_max(job, 3))?;
    let (lo, hi) = fpt_estimate(&series)?;
    let mut table = Table::new(&["e", "q", "nu", "lower_num", "lower_den", "upper_num", "upper_den"]);
    let mut rows = Vec::new();
    for r in &series.rows {
        let [ln, ld] = rat_cells(&r.lower);
        let [un, ud] = rat_cells(&r.upper);
        table.push(vec![r.e.to_string(), r.q.to_string(), r.nu.to_string(), ln, ld, un, ud]);
        rows.push(json!({"e": r.e, "q": r.q, "nu": r.nu, "lower": rat(&r.lower)?, "upper": rat(&r.upper)?}));
    }
    ok(
        json!({
            "polynomial": f.to_string(),
            "p": series.p,
            "rows": rows,
            "interval": {"lower": rat(&lo)?, "upper": rat(&hi)?},
        }),
        table,
    )
}

fn mult(cx: &Context, job: &Job) -> Result<Outcome> {
    let targets = cx.targets(job)?;
    let quotient = cx.presentation.quotient_by(&targets)?;
    let m = hs_multiplicity(&quotient)?;
    let mut table = Table::new(&["dim", "multiplicity"]);
    table.push(vec![quotient.dim().to_string(), m.to_string()]);
    ok(
        json!({"ring_dim": cx.presentation.dim(), "dim": quotient.dim(), "multiplicity": m}),
        table,
    )
}

fn matrix(m: &Matrix) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn disc(cx: &Context, job: &Job) -> Result<Outcome> {
    let f = match cx.presentation.defining().generators() {
        [f] => f.clone(),
        _ => {
            return Err(Error::Input(
                "disc needs exactly one ideal generator, monic in the last variable".into(),
            ))
        }
    };
    let ext = FiniteExtension::new(&f)?;
    let d = ext.discriminant()?;
    let mut result = json!({
        "relation": f.to_string(),
        "rank": ext.degree(),
        "trace_matrix": matrix(&ext.trace_matrix()?),
        "discriminant": d.to_string(),
    });
    let mut mults = Vec::new();
    for g in cx.targets(job)? {
        mults.push(json!({"element": g.to_string(), "matrix": matrix(&ext.mult_matrix(&g)?)}));
    }
    result["mult_matrices"] = Value::Array(mults);
    let Some(eps) = &job.params.epsilon else {
        let mut table = Table::new(&["rank", "discriminant"]);
        table.push(vec![ext.degree().to_string(), d.to_string()]);
        return ok(result, table);
    };
    let eps = cx.parse(eps)?;
    let target = job
        .params
        .n_target
        .ok_or_else(|| Error::Input("a disc perturbation needs n_target".into()))?;
    let rep = disc_congruence_check(&ext, &eps, target)?;
    let opt = |v: Option<u64>| v.map_or_else(|| "inf".to_string(), |v| v.to_string());
    // congruent to every order (or ε = 0) prints as "inf"
    let opt_json = |v: Option<u64>| v.map_or_else(|| Value::from("inf"), Value::from);
    result["congruence"] = json!({
        "epsilon": eps.to_string(),
        "base": rep.base.to_string(),
        "perturbed": rep.perturbed.to_string(),
        "eps_order": opt_json(rep.eps_order),
        "order": opt_json(rep.order),
        "target": rep.target,
        "pass": rep.pass,
    });
    let mut table = Table::new(&[
        "rank",
        "discriminant",
        "perturbed",
        "eps_order",
        "order",
        "target",
        "verdict",
    ]);
    table.push(vec![
        ext.degree().to_string(),
        rep.base.to_string(),
        rep.perturbed.to_string(),
        opt(rep.eps_order),
        opt(rep.order),
        rep.target.to_string(),
        if rep.pass { "pass" } else { "fail" }.into(),
    ]);
    Ok(Outcome {
        result,
        table,
        ok: rep.pass,
    })
}

fn present(cx: &Context) -> Result<Outcome> {
    let source = cx
        .source_ring
        .as_ref()
        .ok_or_else(|| Error::Input("present needs a subalgebra".into()))?;
    let gens: Vec<String> = cx
        .presentation
        .defining()
        .generators()
        .iter()
        .map(|g| g.to_string())
        .collect();
    let mut table = Table::new(&["index", "generator"]);
    for (i, g) in gens.iter().enumerate() {
        table.push(vec![i.to_string(), g.clone()]);
    }
    ok(
        json!({
            "source_variables": source.vars(),
            "variables": cx.ring.vars(),
            "relations": gens,
            "dim": cx.presentation.dim(),
        }),
        table,
    )
}

fn perturb(cx: &Context, job: &Job) -> Result<Outcome> {
    let p = &job.params;
    let mode = Mode::parse(
        p.mode
            .as_deref()
            .ok_or_else(|| Error::Input("perturb needs a mode".into()))?,
    )?;
    let mut plan = PerturbationPlan::new(cx.presentation.clone(), cx.targets(job)?, mode);
    if let Some(n) = p.neighborhood {
        plan.neighborhood = n;
    }
    plan.degree_cap = p.degree_cap.unwrap_or(plan.neighborhood + 2);
    if let Some(s) = p.samples {
        plan.samples = s;
    }
    if let Some(s) = p.seed {
        plan.seed = s;
    }
    plan.e_range = match (&p.e_range, p.e_max) {
        (Some(r), _) => r.clone(),
        (None, Some(e)) => (1..=e).collect(),
        (None, None) => plan.e_range,
    };
    if let Some(eps) = &p.epsilons {
        let parsed = eps
            .iter()
            .map(|row| row.iter().map(|t| cx.parse(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        plan.samples = parsed.len();
        plan.epsilons = Some(parsed);
    }
    plan.tolerance = p.tolerance.map(rational);
    plan.n_target = p.n_target;
    let report = run_experiment(&plan)?;
    Ok(Outcome {
        ok: report.passed(),
        table: perturb_table(&report),
        result: perturb_json(&report)?,
    })
}

fn perturb_table(rep: &PerturbationReport) -> Table {
    let mut table = Table::new(&[
        "sample",
        "epsilon",
        "e",
        "base",
        "perturbed",
        "delta_num",
        "delta_den",
        "verdict",
    ]);
    for r in &rep.rows {
        let [dn, dd] = r
            .delta
            .as_ref()
            .map_or_else(|| [String::new(), String::new()], rat_cells);
        table.push(vec![
            r.sample.to_string(),
            r.epsilon.clone(),
            r.e.to_string(),
            r.base.clone(),
            r.perturbed.clone(),
            dn,
            dd,
            r.verdict_text(),
        ]);
    }
    table
}

fn perturb_json(rep: &PerturbationReport) -> Result<Value> {
    let rows = rep
        .rows
        .iter()
        .map(|r| {
            let checks: serde_json::Map<String, Value> = r
                .checks
                .iter()
                .map(|(k, v)| (k.clone(), Value::from(v.name())))
                .collect();
            Ok(json!({
                "sample": r.sample,
                "epsilon": r.epsilon,
                "e": r.e,
                "base": r.base,
                "perturbed": r.perturbed,
                "delta": r.delta.as_ref().map(rat).transpose()?,
                "checks": checks,
                "error": r.error,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdicts: Vec<Value> = rep
        .verdicts
        .iter()
        .map(|v| json!({"property": v.property, "verdict": v.verdict.name(), "checked": v.checked, "failed": v.failed}))
        .collect();
    let thresholds: Vec<Value> = rep
        .thresholds
        .iter()
        .map(|(e, n)| Ok(json!({"e": e, "n_star": int(*n as i128)?})))
        .collect::<Result<_>>()?;
    Ok(json!({
        "mode": rep.mode.name(),
        "seed": rep.seed,
        "prng": rep.prng,
        "neighborhood": rep.neighborhood,
        "degree_cap": rep.degree_cap,
        "samples": rep.samples,
        "e_range": rep.e_range,
        "passed": rep.passed(),
        "verdicts": verdicts,
        "thresholds": thresholds,
        "hypotheses": rep.hypotheses,
        "observations": rep.observations,
        "rows": rows,
    }))
}
