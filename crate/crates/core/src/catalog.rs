//! Machine-readable description of the available models, used to drive
//! parameter forms.

use serde::Serialize;

use crate::control::{ControllerKind, ControllerSpec, EmGains, PdGains};
use crate::mesh::MeshConfig;
use crate::models::{DisturbanceKind, DisturbanceSpec, ModelKind, ModelSpec};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Serialize)]
pub struct ParamField {
    /// Dotted path below `model.params`.
    pub name: String,
    pub default: f64,
    pub constraint: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct GainField {
    pub name: &'static str,
    pub default: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ControllerEntry {
    pub kind: ControllerKind,
    pub gains: Vec<GainField>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelEntry {
    pub kind: ModelKind,
    pub title: &'static str,
    pub has_rotation: bool,
    pub parameters: Vec<ParamField>,
    pub controllers: Vec<ControllerEntry>,
    pub disturbances: Vec<DisturbanceKind>,
    /// Complete scenario document, including `schema_version`.
    pub default_scenario: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct AbsentModel {
    pub name: &'static str,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Catalog {
    pub models: Vec<ModelEntry>,
    pub absent: Vec<AbsentModel>,
}

fn title(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Heat => "Heat equation",
        ModelKind::EbBeam => "Euler-Bernoulli beam",
        ModelKind::Timoshenko => "Timoshenko beam with tip payload",
        ModelKind::String => "Non-uniform string with tip payload",
    }
}

fn constraint(kind: ModelKind, name: &str) -> &'static str {
    match (kind, name) {
        (ModelKind::EbBeam, "ei" | "tension" | "damping") => ">= 0",
        (ModelKind::String, n) if n.starts_with("lambda") => "profile >= 0 on [0, L]",
        (ModelKind::String, n) if n.starts_with("base_tension") || n.starts_with("density") => {
            "profile > 0 on [0, L]"
        }
        _ => "> 0",
    }
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut Vec<(String, f64)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let name = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&name, v, out);
            }
        }
        serde_json::Value::Number(n) => {
            out.push((prefix.to_string(), n.as_f64().unwrap_or(f64::NAN)))
        }
        _ => {}
    }
}

fn parameters(kind: ModelKind) -> Vec<ParamField> {
    let model = serde_json::to_value(ModelSpec::default_for(kind)).expect("model serializes");
    let mut flat = Vec::new();
    flatten("", &model["params"], &mut flat);
    flat.into_iter()
        .map(|(name, default)| ParamField {
            constraint: constraint(kind, &name),
            name,
            default,
        })
        .collect()
}

fn controllers(kind: ModelKind) -> Vec<ControllerEntry> {
    let mut out = vec![ControllerEntry {
        kind: ControllerKind::NoControl,
        gains: Vec::new(),
    }];
    match kind {
        ModelKind::Timoshenko => {
            let g = PdGains::reference();
            out.push(ControllerEntry {
                kind: ControllerKind::Pd,
                gains: vec![
                    GainField {
                        name: "k1",
                        default: g.k1,
                    },
                    GainField {
                        name: "k2",
                        default: g.k2,
                    },
                    GainField {
                        name: "k3",
                        default: g.k3,
                    },
                    GainField {
                        name: "k4",
                        default: g.k4,
                    },
                ],
            });
        }
        ModelKind::String => {
            let c = ControllerSpec::exact_model(
                EmGains::default(),
                crate::models::disturbance::STRING_TIP_BOUND,
            );
            out.push(ControllerEntry {
                kind: ControllerKind::ExactModel,
                gains: vec![
                    GainField {
                        name: "k1",
                        default: c.em_gains.k1,
                    },
                    GainField {
                        name: "k2",
                        default: c.em_gains.k2,
                    },
                    GainField {
                        name: "disturbance_bound",
                        default: c.disturbance_bound,
                    },
                ],
            });
        }
        ModelKind::Heat | ModelKind::EbBeam => {}
    }
    out
}

/// The reference scenario shipped for each model.
pub fn default_scenario(kind: ModelKind) -> Scenario {
    let model = ModelSpec::default_for(kind);
    match kind {
        // r = alpha k / h^2 = 0.4
        ModelKind::Heat => {
            Scenario::new("heat_analytic", model, MeshConfig::new(50, 625, 1.0, 0.1))
        }
        ModelKind::EbBeam => Scenario::new(
            "eb_beam_default",
            model,
            MeshConfig::new(50, 10000, 1.0, 1.0),
        ),
        ModelKind::Timoshenko => {
            let mut s = Scenario::new(
                "timoshenko_pd_stable",
                model,
                MeshConfig::new(50, 10000, 2.0, 10.0),
            );
            s.controller = ControllerSpec::pd(PdGains::reference());
            s.disturbances = vec![
                DisturbanceSpec::new(DisturbanceKind::TimoshenkoTip),
                DisturbanceSpec::new(DisturbanceKind::TimoshenkoDistributed),
            ];
            s
        }
        ModelKind::String => {
            let mut s = Scenario::new(
                "string_exact_model",
                model,
                MeshConfig::new(50, 10000, 1.0, 10.0),
            );
            s.controller = ControllerSpec::exact_model(
                EmGains::default(),
                crate::models::disturbance::STRING_TIP_BOUND,
            );
            s.disturbances = vec![
                DisturbanceSpec::new(DisturbanceKind::StringTip),
                DisturbanceSpec::new(DisturbanceKind::StringDistributed),
            ];
            s
        }
    }
}

pub fn list_models() -> Catalog {
    let models = ModelKind::ALL
        .iter()
        .map(|&kind| ModelEntry {
            kind,
            title: title(kind),
            has_rotation: kind.has_rotation(),
            parameters: parameters(kind),
            controllers: controllers(kind),
            disturbances: [
                DisturbanceKind::TimoshenkoTip,
                DisturbanceKind::TimoshenkoDistributed,
                DisturbanceKind::StringTip,
                DisturbanceKind::StringDistributed,
            ]
            .into_iter()
            .filter(|d| d.compatible_with(kind))
            .collect(),
            default_scenario: default_scenario(kind).to_json_value(),
        })
        .collect();
    Catalog {
        models,
        absent: vec![AbsentModel {
            name: "exponential_beam",
            reason: "no governing equations are available for it",
        }],
    }
}
