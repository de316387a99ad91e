//! JSON and CSV renderings of the analysis reports.
//!
//! Exact rationals are strings `"num/den"`. Every decimal lives under an
//! `approx` key so it is never mistaken for an exact value.

use serde_json::{json, Map, Value};

use crate::geometry::{ratio_f64, ratio_string, BoundsReport, RadiusReport, Rational};
use crate::repro::ReproResult;
use crate::separation::{SeparationReport, Violation};

fn exact(r: &Rational) -> Value {
    Value::String(ratio_string(r))
}

fn exact_opt(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::Null, exact)
}

fn approx_opt(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::Null, |v| json!(ratio_f64(v)))
}

pub fn radius_json(r: &RadiusReport, bounds: Option<&BoundsReport>, net_bound: Option<&Rational>) -> Value {
    let mut b = Map::new();
    if let Some(v) = bounds {
        b.insert("h_volume_lower_approx".into(), json!(v.h_volume_lower));
        b.insert("q_volume_upper_approx".into(), json!(v.q_volume_upper));
    }
    b.insert("h_net_upper".into(), net_bound.map_or(Value::Null, exact));
    json!({
        "norm": r.norm,
        "toroidal": r.toroidal,
        "squared": r.norm.squared(),
        "resolution": r.resolution,
        "q": exact(&r.q),
        "q_witness": [r.q_witness.0, r.q_witness.1],
        "h_lower": exact(&r.h_lower),
        "h_upper": exact(&r.h_upper),
        "rho_lower": exact_opt(&r.rho_lower),
        "rho_upper": exact_opt(&r.rho_upper),
        "bounds": Value::Object(b),
        "approx": {
            "q": ratio_f64(&r.q),
            "h_lower": ratio_f64(&r.h_lower),
            "h_upper": ratio_f64(&r.h_upper),
            "rho_lower": approx_opt(&r.rho_lower),
            "rho_upper": approx_opt(&r.rho_upper),
        },
    })
}

pub const RADIUS_CSV_HEADER: &str =
    "norm,toroidal,squared,resolution,q,q_witness_i,q_witness_j,h_lower,h_upper,rho_lower,rho_upper";

pub fn radius_csv_row(r: &RadiusReport) -> String {
    let opt = |v: &Option<Rational>| v.as_ref().map(ratio_string).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.norm,
        r.toroidal,
        r.norm.squared(),
        r.resolution,
        ratio_string(&r.q),
        r.q_witness.0,
        r.q_witness.1,
        ratio_string(&r.h_lower),
        ratio_string(&r.h_upper),
        opt(&r.rho_lower),
        opt(&r.rho_upper)
    )
}

pub fn violation_json(v: &Violation) -> Value {
    json!({
        "c": v.interval.c,
        "a": v.interval.a,
        "e": v.interval.e,
        "toroidal": v.interval.toroidal,
        "pair": [v.pair.0, v.pair.1],
        "passing_g": v.passing_g,
    })
}

pub fn separation_json(r: &SeparationReport) -> Value {
    json!({
        "kappa": r.kappa,
        "c_witness": r.c_witness,
        "method": r.method.name(),
        "toroidal": r.toroidal,
        "violation": r.violation.as_ref().map_or(Value::Null, violation_json),
        "q_lower": exact_opt(&r.q_lower_from_kappa),
        "inapplicable": r.inapplicable.iter().map(|(c, why)| json!({"c": c, "reason": why})).collect::<Vec<_>>(),
        "budget_exhausted": r.budget_exhausted,
        "approx": { "q_lower": approx_opt(&r.q_lower_from_kappa) },
    })
}

pub const SEPARATION_CSV_HEADER: &str = "method,toroidal,kappa,c_witness,q_lower,violation_i,violation_j";

pub fn separation_csv_row(r: &SeparationReport) -> String {
    let join = |c: &[u32]| c.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let (vi, vj) = r.violation.as_ref().map_or((String::new(), String::new()), |v| {
        (v.pair.0.to_string(), v.pair.1.to_string())
    });
    format!(
        "{},{},{},{},{},{},{}",
        r.method.name(),
        r.toroidal,
        r.kappa.map(|k| k.to_string()).unwrap_or_default(),
        r.c_witness.as_deref().map(join).unwrap_or_default(),
        r.q_lower_from_kappa.as_ref().map(ratio_string).unwrap_or_default(),
        vi,
        vj
    )
}

pub const REPRO_CSV_HEADER: &str = "scenario,params,pass,measured,claimed,runtime_ms,seed";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn repro_csv_row(r: &ReproResult) -> String {
    let params = serde_json::to_string(&r.params).expect("params serialize");
    format!(
        "{},{},{},{},{},{},{}",
        r.scenario,
        csv_field(&params),
        r.pass,
        csv_field(&r.measured),
        csv_field(&r.claimed),
        r.runtime_ms,
        r.seed.map(|s| s.to_string()).unwrap_or_default()
    )
}
