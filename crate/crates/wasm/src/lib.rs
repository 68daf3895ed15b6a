//! Browser bindings for the static demo page.
//!
//! Three operations, all taking and returning JSON text:
//! [`preset_scenario`] loads a bundled scenario, [`check_scenario`] evaluates the a-priori
//! stability criterion and [`simulate_scenario`] runs a scenario and returns a
//! downsampled surface plus the tip trajectory.

use flexsim::engine::a_priori_report;
use flexsim::scenario::{parse_scenario_json, parse_scenario_toml};
use flexsim::{build_mesh, run, Error, Scenario, StorageMode};
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Bundled scenarios, by name.
pub const PRESETS: [(&str, &str); 8] = [
    (
        "heat_analytic",
        include_str!("../../../fixtures/heat_analytic.toml"),
    ),
    (
        "eb_beam_default",
        include_str!("../../../fixtures/eb_beam_default.toml"),
    ),
    (
        "timoshenko_no_control",
        include_str!("../../../fixtures/timoshenko_no_control.toml"),
    ),
    (
        "timoshenko_pd_stable",
        include_str!("../../../fixtures/timoshenko_pd_stable.toml"),
    ),
    (
        "timoshenko_pd_unstable",
        include_str!("../../../fixtures/timoshenko_pd_unstable.toml"),
    ),
    (
        "string_no_control",
        include_str!("../../../fixtures/string_no_control.toml"),
    ),
    (
        "string_exact_model",
        include_str!("../../../fixtures/string_exact_model.toml"),
    ),
    (
        "string_coarse_time",
        include_str!("../../../fixtures/string_coarse_time.toml"),
    ),
];

/// Most tip samples handed to the page.
pub const MAX_TIP_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frames {
    pub stride: usize,
    pub t: Vec<f64>,
    pub w: Vec<Vec<f64>>,
    pub phi: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tip {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simulation {
    pub label: String,
    pub model: String,
    pub controller: String,
    pub verdict: flexsim::DivergenceVerdict,
    pub a_priori: flexsim::StabilityReport,
    pub steps_completed: usize,
    pub tip_final: f64,
    pub tip_tail_mean_abs: f64,
    pub x: Vec<f64>,
    pub frames: Frames,
    pub tip: Tip,
}

fn error_json(e: &Error) -> String {
    let errors = match e {
        Error::Invalid(list) => list
            .iter()
            .map(|f| json!({ "path": f.path, "message": f.message }))
            .collect(),
        Error::Parse { path, message } | Error::UnknownKey { path, message } => {
            vec![json!({ "path": path, "message": message })]
        }
        _ => Vec::new(),
    };
    json!({ "message": e.to_string(), "errors": errors }).to_string()
}

/// Names of the bundled scenarios.
pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(name, _)| *name).collect()
}

/// Scenario JSON for a bundled preset.
pub fn preset_scenario(name: &str) -> Result<Value, String> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        format!(
            "unknown preset `{name}`; known: {}",
            preset_names().join(", ")
        )
    })?;
    let scenario = parse_scenario_toml(text).map_err(|e| error_json(&e))?;
    Ok(scenario.to_json_value())
}

fn parse(text: &str) -> Result<Scenario, String> {
    parse_scenario_json(text).map_err(|e| error_json(&e))
}

/// A-priori stability report for a scenario document.
pub fn check_scenario(text: &str) -> Result<flexsim::StabilityReport, String> {
    let scenario = parse(text)?;
    let mesh = build_mesh(scenario.mesh).map_err(|e| error_json(&e))?;
    a_priori_report(&scenario.model, &mesh).map_err(|e| error_json(&e))
}

/// Evenly spaced indices over `0..n`, at most `max` of them, always
/// including the last.
pub fn sample_rows(n: usize, max: usize) -> (usize, Vec<usize>) {
    if n == 0 {
        return (1, Vec::new());
    }
    let stride = n.div_ceil(max.max(1)).max(1);
    let mut rows: Vec<usize> = (0..n).step_by(stride).collect();
    if rows.last() != Some(&(n - 1)) {
        rows.push(n - 1);
    }
    (stride, rows)
}

/// Runs a scenario, keeping at most `max_frames` surface rows.
pub fn simulate_scenario(text: &str, max_frames: usize) -> Result<Simulation, String> {
    let mut scenario = parse(text)?;
    scenario.storage = StorageMode::Full;
    let result = run(&scenario).map_err(|e| error_json(&e))?;
    let history = result
        .history
        .as_ref()
        .expect("full storage keeps the history");
    // levels past the first bad step are never written
    let levels = result.tip.len();
    let (stride, rows) = sample_rows(levels, max_frames);
    let frames = Frames {
        stride,
        t: rows.iter().map(|&j| result.tip.t[j]).collect(),
        w: rows.iter().map(|&j| history.w_level(j).to_vec()).collect(),
        phi: history.has_rotation().then(|| {
            rows.iter()
                .map(|&j| history.phi_level(j).unwrap().to_vec())
                .collect()
        }),
    };
    let (_, tip_rows) = sample_rows(levels, MAX_TIP_POINTS);
    Ok(Simulation {
        label: scenario.label.clone(),
        model: scenario.model.kind().to_string(),
        controller: scenario.controller.kind.to_string(),
        verdict: result.verdict,
        a_priori: result.a_priori.clone(),
        steps_completed: result.steps_completed,
        tip_final: result.tip.final_w(),
        tip_tail_mean_abs: result.tip.window_mean_abs(0.1),
        x: result.mesh.positions(),
        frames,
        tip: Tip {
            t: tip_rows.iter().map(|&j| result.tip.t[j]).collect(),
            w: tip_rows.iter().map(|&j| result.tip.w[j]).collect(),
        },
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
        .and_then(|v| serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string())))
}

/// JSON array of preset names.
#[wasm_bindgen(js_name = presetNames)]
pub fn js_preset_names() -> String {
    serde_json::to_string(&preset_names()).unwrap()
}

/// Scenario JSON for a bundled preset.
#[wasm_bindgen(js_name = preset)]
pub fn js_preset(name: &str) -> Result<String, JsError> {
    to_js(preset_scenario(name))
}

/// A-priori stability report as JSON.
#[wasm_bindgen(js_name = check)]
pub fn js_check(scenario_json: &str) -> Result<String, JsError> {
    to_js(check_scenario(scenario_json))
}

/// Runs a scenario and returns the downsampled result as JSON.
#[wasm_bindgen(js_name = simulate)]
pub fn js_simulate(scenario_json: &str, max_frames: usize) -> Result<String, JsError> {
    to_js(simulate_scenario(scenario_json, max_frames))
}
