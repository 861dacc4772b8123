//! End-to-end reports shared by the command line and the test suites.
//!
//! Every report is a `serde_json::Value`; object keys serialize sorted, so
//! equal inputs give byte-identical output.

use serde_json::{json, Value};

use crate::classify::{classify_changes, residual_outcome, LocalDegenerationType, ResidualSingularities};
use crate::diagram::render_dot;
use crate::exact::Rational;
use crate::forms::{parse_equation, FormsError, ParamArrangement};
use crate::incidence::{degenerate_values, generic_profile, local_violations, profile, profile_diff, IncidenceError};
use crate::resolve::{schedule, trace_central_fiber, OrderPolicy, ResolveError, Trace};
use crate::scenario::{self, Scenario, ScenarioError};
use crate::semistable::{build_components, SemistableError, StrataComplex};
use crate::specseq::{assemble_e1, build_d1, compute_e2, e1_cells, SpecSeqError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] FormsError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Semistable(#[from] SemistableError),
    #[error(transparent)]
    SpecSeq(#[from] SpecSeqError),
    #[error("{0}")]
    Input(String),
}

/// An argument that is either a scenario name or an equation.
pub enum Subject {
    Scenario(Box<Scenario>),
    Equation(String),
}

impl Subject {
    /// An unknown name is read as an equation only if it uses nothing but
    /// variables, digits and operators.
    pub fn parse(arg: &str) -> Result<Subject, PipelineError> {
        match scenario::load(arg) {
            Ok(s) => Ok(Subject::Scenario(Box::new(s))),
            Err(ScenarioError::Unknown(_)) if looks_like_equation(arg) => Ok(Subject::Equation(arg.to_string())),
            Err(e) => Err(e.into()),
        }
    }

    pub fn scenario(&self) -> Option<&Scenario> {
        match self {
            Subject::Scenario(s) => Some(s),
            Subject::Equation(_) => None,
        }
    }

    pub fn equation(&self) -> Result<&str, PipelineError> {
        match self {
            Subject::Equation(e) => Ok(e),
            Subject::Scenario(s) => s
                .equation
                .as_deref()
                .ok_or_else(|| PipelineError::Input(format!("scenario {} has no equation", s.name))),
        }
    }

    pub fn arrangement(&self) -> Result<ParamArrangement, PipelineError> {
        Ok(parse_equation(self.equation()?)?)
    }
}

fn looks_like_equation(s: &str) -> bool {
    s.chars().any(|c| "xyzt".contains(c)) && s.chars().all(|c| c.is_ascii_digit() || "xyztwu()+-*/^= ".contains(c))
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}

/// Incidence profile of the generic member, or of the fiber at `at`.
pub fn incidence_report(subject: &Subject, at: Option<&Rational>) -> Result<Value, PipelineError> {
    let a = subject.arrangement()?;
    let p = match at {
        Some(w0) => profile(&a.specialize(w0)?)?,
        None => generic_profile(&a)?,
    };
    let violations = local_violations(&p);
    Ok(json!({
        "equation": a.to_string(),
        "at": at.map(|w| w.to_string()),
        "profile": p.to_report(),
        "octic": p.n_forms == 8 && violations.is_empty(),
        "violations": violations,
    }))
}

fn type_name(changes: &[crate::classify::ClassifiedChange]) -> Value {
    let names: Vec<String> = changes
        .iter()
        .map(|c| match &c.result {
            Ok(t) => t.to_string(),
            Err(_) => "unclassified".to_string(),
        })
        .collect();
    match names.len() {
        0 => Value::Null,
        1 => Value::String(names[0].clone()),
        _ => Value::String(names.join("+")),
    }
}

/// Degenerate parameter values, each with its classified changes.
pub fn sigma_report(subject: &Subject) -> Result<Value, PipelineError> {
    let a = subject.arrangement()?;
    let generic = generic_profile(&a)?;
    let rep = degenerate_values(&a)?;
    let values: Vec<Value> = rep
        .values
        .iter()
        .map(|v| {
            let cl = classify_changes(&v.changes, &generic, &v.special);
            json!({
                "w0": v.w0.to_string(),
                "type": type_name(&cl),
                "changes": cl.iter().map(|c| json!({
                    "planes": c.planes,
                    "kind": c.kind,
                    "type": c.result.as_ref().map(|t| t.to_string()).ok(),
                    "error": c.result.as_ref().err(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut out = json!({
        "equation": a.to_string(),
        "sigma": rationals(&rep.sigma()),
        "values": values,
        "fatal": rep.fatal.iter().map(|f| json!({"w0": f.w0.to_string(), "reason": f.reason})).collect::<Vec<_>>(),
        "unresolved": rep.unresolved.iter().map(|p| p.to_string_in("w")).collect::<Vec<_>>(),
    });
    if let Some(s) = subject.scenario() {
        let w0 = s.w0().to_string();
        let t = values.iter().find(|v| v["w0"] == w0).map_or(Value::Null, |v| v["type"].clone());
        out["type"] = t;
        out["scenario"] = json!(s.name);
    }
    Ok(out)
}

/// Classification of the fiber at one parameter value.
pub fn classify_report(subject: &Subject, at: Option<&Rational>) -> Result<Value, PipelineError> {
    let a = subject.arrangement()?;
    let w0 = at.cloned().or_else(|| subject.scenario().map(|s| s.w0())).unwrap_or_else(Rational::zero);
    let generic = generic_profile(&a)?;
    let special = profile(&a.specialize(&w0)?)?;
    let changes = profile_diff(&generic, &special);
    let cl = classify_changes(&changes, &generic, &special);
    let t = type_name(&cl);
    let catalog = match &t {
        Value::String(n) => LocalDegenerationType::from_name(n).map(|t| residual_outcome(t).to_report()),
        _ => None,
    };
    let mut out = json!({
        "equation": a.to_string(),
        "w0": w0.to_string(),
        "type": t,
        "changes": cl,
        "catalog_residual": catalog,
    });
    if let Some(s) = subject.scenario() {
        out["scenario"] = json!(s.name);
    }
    Ok(out)
}

fn policy(s: Option<&Scenario>) -> OrderPolicy {
    match s.and_then(|s| s.blowup_order.clone()) {
        Some(o) => OrderPolicy::Explicit(o),
        None => OrderPolicy::Lexicographic,
    }
}

/// Blow-up trace of the central fiber.
pub fn trace(subject: &Subject, at: Option<&Rational>) -> Result<Trace, PipelineError> {
    let a = subject.arrangement()?;
    let w0 = at.cloned().or_else(|| subject.scenario().map(|s| s.w0())).unwrap_or_else(Rational::zero);
    let generic = generic_profile(&a)?;
    let sched = schedule(&generic, &policy(subject.scenario()))?;
    Ok(trace_central_fiber(&a, &w0, &sched)?)
}

fn residual_json(r: &ResidualSingularities) -> Value {
    let mut v = r.to_report();
    v["pinch"] = json!(r.pinch_multiset());
    v
}

/// Trace summary plus DOT text per step (index 0 is the initial diagram).
pub fn resolve_report(subject: &Subject, at: Option<&Rational>) -> Result<(Value, Vec<String>), PipelineError> {
    let t = trace(subject, at)?;
    let mut dots = vec![render_dot(&t.initial)];
    dots.extend(t.steps.iter().map(|s| render_dot(&s.diagram)));
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            json!({
                "center": s.center,
                "geometry": format!("{:?}", s.context.central_geometry),
                "events": s.diagram.events.len(),
            })
        })
        .collect();
    let mut out = json!({
        "schedule": t.steps.iter().map(|s| s.center.clone()).collect::<Vec<_>>(),
        "steps": steps,
        "residual": residual_json(&t.residual),
    });
    if let Some(s) = subject.scenario() {
        out["scenario"] = json!(s.name);
        let ty = s
            .expected
            .as_ref()
            .and_then(|e| e.get("type"))
            .and_then(|t| t.as_str())
            .and_then(LocalDegenerationType::from_name);
        if let Some(ty) = ty {
            out["matches_catalog"] = json!(residual_outcome(ty).same_shape(&t.residual));
        }
    }
    Ok((out, dots))
}

/// Residual singularities of a scenario, either stored or traced.
pub fn scenario_residual(s: &Scenario) -> Result<ResidualSingularities, PipelineError> {
    if let Some(r) = &s.residual {
        return Ok(r.clone());
    }
    if let Some(from) = &s.residual_from {
        let src = scenario::load(from)?;
        return Ok(trace(&Subject::Scenario(Box::new(src)), None)?.residual);
    }
    Ok(trace(&Subject::Scenario(Box::new(s.clone())), None)?.residual)
}

fn need_scenario(subject: &Subject) -> Result<&Scenario, PipelineError> {
    subject.scenario().ok_or_else(|| PipelineError::Input("this command needs a scenario name".into()))
}

pub fn strata_complex(s: &Scenario) -> Result<StrataComplex, PipelineError> {
    let y = s.y_betti.ok_or_else(|| PipelineError::Input(format!("scenario {} has no y_betti", s.name)))?;
    Ok(build_components(&scenario_residual(s)?, y)?)
}

/// Components of the semistable central fiber.
pub fn reduce_report(subject: &Subject) -> Result<Value, PipelineError> {
    let s = need_scenario(subject)?;
    let c = strata_complex(s)?;
    let mut out = c.to_report();
    out["scenario"] = json!(s.name);
    out["strata"] = json!([c.components.len(), c.double_strata.len(), c.triple_strata.len()]);
    Ok(out)
}

/// Full spectral sequence report plus its text rendering.
pub fn ss_report(subject: &Subject) -> Result<(Value, String), PipelineError> {
    let s = need_scenario(subject)?;
    let c = strata_complex(s)?;
    let cm = s.load_cycle_model()?;
    let e1 = assemble_e1(&c);
    let d = build_d1(&c, cm.as_ref(), &s.annotations)?;
    let lim = compute_e2(&e1, &d)?;
    let mut out = json!({
        "scenario": s.name,
        "strata": [c.components.len(), c.double_strata.len(), c.triple_strata.len()],
        "components": c.to_report(),
        "columns": lim.e1.columns,
        "e1": lim.e1.rows,
        "e1_cells": e1_cells(&e1),
        "e2": lim.e2.rows,
        "betti": lim.betti,
        "h3_weights": lim.h3_weights,
        "pure": lim.pure,
        "weight_symmetric": lim.weight_symmetric,
        "euler": {"e1": lim.euler_e1, "limit": lim.euler_limit},
        "ranks": lim.ranks,
        "annotations": lim.annotations,
    });
    if let Some(cm) = &cm {
        let kernel: Vec<Vec<String>> =
            cm.left_kernel().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        let chain_in_kernel = match &cm.chain {
            Some(ch) => Some(crate::specseq::verify_cycle_chain(cm, ch)?),
            None => None,
        };
        out["cycle_model"] = json!({
            "rows": cm.matrix.rows(),
            "columns": cm.matrix.cols(),
            "rank": cm.rank(),
            "kernel_dim": kernel.len(),
            "kernel": kernel,
            "row_labels": cm.generators.rows,
            "chain_in_kernel": chain_in_kernel,
        });
    }
    let text = format!(
        "E1\n{}\nE2\n{}\nbetti {:?}\nH^3 weights {:?} ({})\n",
        crate::specseq::render_e1(&e1),
        crate::specseq::render_grid(&lim.e2),
        lim.betti,
        lim.h3_weights,
        if lim.pure { "pure" } else { "not pure" }
    );
    Ok((out, text))
}

/// Compares a report against the expected block; returns one line per mismatch.
///
/// Only keys present in both are compared. Objects compare key by key,
/// everything else by equality.
pub fn check(expected: &Value, report: &Value) -> Vec<String> {
    fn go(path: &str, e: &Value, r: &Value, out: &mut Vec<String>) {
        match (e, r) {
            (Value::Object(eo), Value::Object(ro)) => {
                for (k, ev) in eo {
                    if let Some(rv) = ro.get(k) {
                        go(&format!("{path}/{k}"), ev, rv, out);
                    }
                }
            }
            _ if e == r => {}
            _ => out.push(format!("{path}: expected {e}, got {r}")),
        }
    }
    let mut out = Vec::new();
    go("", expected, report, &mut out);
    out
}
