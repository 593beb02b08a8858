//! Browser bindings: weight sequences, inflation plans and configuration checks,
//! each returning a JSON string for the static page in `www/`.

use serde::Serialize;
use sympdiv::checks::Checklist;
use sympdiv::cusp::{hypothesis_checks, weight_sequence};
use sympdiv::document::{to_json, ConfigDocument};
use sympdiv::dot::config_dot;
use sympdiv::inflation::{plan_kahler, NormalizedVector};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
pub struct WeightReport {
    pub p: i64,
    pub q: i64,
    pub weights: Vec<i64>,
    pub sum: i64,
    pub sum_squares: i64,
    pub checks: Checklist,
}

#[derive(Serialize)]
pub struct ConfigReport {
    pub checks: Checklist,
    pub dot: String,
}

/// W(p,q) with Σm and Σm².
pub fn weights_json(p: i64, q: i64) -> Result<String, String> {
    let w = weight_sequence(p, q).map_err(|e| e.to_string())?;
    let report = WeightReport { p, q, sum: w.sum(), sum_squares: w.sum_squares(), checks: w.checks(), weights: w.weights };
    Ok(to_json(&report))
}

/// A verified plan for a comma-separated target `δ_B,δ_1,…`.
pub fn plan_json(target: &str, g: u32) -> Result<String, String> {
    let v = NormalizedVector::parse(g, target).map_err(|e| e.to_string())?;
    let plan = plan_kahler(&v).map_err(|e| e.to_string())?;
    Ok(to_json(&plan))
}

/// Graph consistency, the area hypothesis when areas are given, and the dual graph.
pub fn validate_json(config: &str) -> Result<String, String> {
    let doc = ConfigDocument::parse(config).map_err(|e| e.to_string())?;
    let (cfg, areas) = doc.build().map_err(|e| e.to_string())?;
    let mut checks = Checklist::new();
    let problems = cfg.validate();
    checks.push("graph", problems.is_empty(), problems.join("; "));
    if let (true, Some(w)) = (problems.is_empty(), &areas) {
        checks.extend("", &hypothesis_checks(&cfg, w).map_err(|e| e.to_string())?);
    }
    Ok(to_json(&ConfigReport { checks, dot: config_dot(&cfg, "input") }))
}

#[wasm_bindgen(js_name = weightSequence)]
pub fn weight_sequence_js(p: i64, q: i64) -> Result<String, JsValue> {
    weights_json(p, q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = planInflation)]
pub fn plan_inflation_js(target: &str, g: u32) -> Result<String, JsValue> {
    plan_json(target, g).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = validateConfig)]
pub fn validate_config_js(config: &str) -> Result<String, JsValue> {
    validate_json(config).map_err(|e| JsValue::from_str(&e))
}
