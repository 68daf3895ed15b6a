//! Scenario documents: what to simulate, parsed strictly from TOML or JSON.
//!
//! A document is the scenario table itself plus a top-level
//! `schema_version`. Constraint violations are reported with dotted key
//! paths relative to the scenario (`mesh.n_space`,
//! `controller.pd_gains.k2`, `disturbances[0].kind`).

use serde::{Deserialize, Serialize};

use crate::control::ControllerSpec;
use crate::error::{Error, FieldError, Result};
use crate::mesh::MeshConfig;
use crate::models::{
    DisturbanceSpec, EbBeamParams, HeatParams, InitialConditions, ModelKind, ModelSpec,
    StringParams, TimoshenkoParams,
};
use crate::stability::DEFAULT_DIVERGENCE_THRESHOLD;

pub const SCHEMA_VERSION: u32 = 1;

/// How much of the field history a run keeps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StorageMode {
    /// Every time level (needed for surface plots and export).
    #[default]
    Full,
    /// Only the three levels the recursion needs; tip trajectory only.
    Rolling,
}

fn default_threshold() -> f64 {
    DEFAULT_DIVERGENCE_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub label: String,
    pub model: ModelSpec,
    pub mesh: MeshConfig,
    #[serde(default)]
    pub controller: ControllerSpec,
    #[serde(default)]
    pub disturbances: Vec<DisturbanceSpec>,
    #[serde(default = "default_threshold")]
    pub divergence_threshold: f64,
    #[serde(default)]
    pub storage: StorageMode,
}

impl Scenario {
    pub fn new(label: impl Into<String>, model: ModelSpec, mesh: MeshConfig) -> Self {
        Self {
            label: label.into(),
            model,
            mesh,
            controller: ControllerSpec::none(),
            disturbances: Vec::new(),
            divergence_threshold: DEFAULT_DIVERGENCE_THRESHOLD,
            storage: StorageMode::Full,
        }
    }

    /// Every constraint violation, with key paths relative to the scenario.
    pub fn validate(&self) -> Vec<FieldError> {
        let mut errors: Vec<FieldError> = self
            .mesh
            .validate()
            .into_iter()
            .map(|e| e.prefixed("mesh"))
            .collect();
        let kind = self.model.kind();
        errors.extend(
            self.model
                .validate(self.mesh.length)
                .into_iter()
                .map(|e| e.prefixed("model")),
        );
        errors.extend(
            self.controller
                .validate()
                .into_iter()
                .map(|e| e.prefixed("controller")),
        );
        if !self.controller.kind.compatible_with(kind) {
            errors.push(FieldError::new(
                "controller.kind",
                format!(
                    "{} control does not apply to the {kind} model",
                    self.controller.kind
                ),
            ));
        }
        for (i, d) in self.disturbances.iter().enumerate() {
            if !d.kind.compatible_with(kind) {
                errors.push(FieldError::new(
                    format!("disturbances[{i}].kind"),
                    format!(
                        "{:?} disturbance does not apply to the {kind} model",
                        d.kind
                    ),
                ));
            }
        }
        if !(self.divergence_threshold > 0.0) {
            errors.push(FieldError::new(
                "divergence_threshold",
                format!("must be positive, got {}", self.divergence_threshold),
            ));
        }
        errors
    }

    pub fn validated(self) -> Result<Self> {
        let errors = self.validate();
        if errors.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(errors))
        }
    }

    /// The scenario as a TOML tree with every schema key present, including
    /// defaulted ones.
    pub fn to_toml_table(&self) -> toml::Table {
        let mut table = toml::Table::try_from(self).expect("scenario serializes to a table");
        table.insert(
            "schema_version".into(),
            toml::Value::Integer(SCHEMA_VERSION.into()),
        );
        table
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_toml_table()).expect("scenario serializes to toml")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut value = serde_json::to_value(self).expect("scenario serializes to json");
        value
            .as_object_mut()
            .expect("scenario is an object")
            .insert("schema_version".into(), SCHEMA_VERSION.into());
        value
    }
}

fn check_version(found: Option<i64>) -> Result<()> {
    match found {
        Some(v) if v == SCHEMA_VERSION as i64 => Ok(()),
        Some(v) => Err(Error::SchemaVersion {
            found: u32::try_from(v).unwrap_or(u32::MAX),
            supported: SCHEMA_VERSION,
        }),
        None => Err(Error::field("schema_version", "missing")),
    }
}

fn classify(path: String, message: String) -> Error {
    if let Some(rest) = message.strip_prefix("unknown field `") {
        let key = rest.split('`').next().unwrap_or_default();
        let path = if path.is_empty() {
            key.to_string()
        } else if path == key || path.ends_with(&format!(".{key}")) {
            path
        } else {
            format!("{path}.{key}")
        };
        Error::UnknownKey { path, message }
    } else {
        Error::Parse { path, message }
    }
}

fn check_subtree<T: serde::de::DeserializeOwned>(
    prefix: &str,
    value: &serde_json::Value,
) -> Option<Error> {
    serde_path_to_error::deserialize::<_, T>(value.clone())
        .err()
        .map(|e| {
            let path = path_string(e.path());
            let path = if path.is_empty() {
                prefix.to_string()
            } else {
                format!("{prefix}.{path}")
            };
            classify(path, e.into_inner().to_string())
        })
}

/// The model is an internally tagged enum, whose buffered content hides the
/// path below `model`. Re-checks the model table against its concrete types
/// to recover the full path; falls back to `error`.
fn refine_model_error(model: Option<serde_json::Value>, error: Error) -> Error {
    let in_model = match &error {
        Error::UnknownKey { path, .. } | Error::Parse { path, .. } => {
            path == "model" || path.starts_with("model.")
        }
        _ => false,
    };
    let Some(serde_json::Value::Object(map)) = model.filter(|_| in_model) else {
        return error;
    };
    if let Some(key) = map
        .keys()
        .find(|k| !matches!(k.as_str(), "kind" | "params" | "initial"))
    {
        return Error::UnknownKey {
            path: format!("model.{key}"),
            message: format!("unknown field `{key}`, expected one of `kind`, `params`, `initial`"),
        };
    }
    let kind = map
        .get("kind")
        .and_then(|k| serde_json::from_value::<ModelKind>(k.clone()).ok());
    let refined = match (kind, map.get("params")) {
        (Some(kind), Some(params)) => match kind {
            ModelKind::Heat => check_subtree::<HeatParams>("model.params", params),
            ModelKind::EbBeam => check_subtree::<EbBeamParams>("model.params", params),
            ModelKind::Timoshenko => check_subtree::<TimoshenkoParams>("model.params", params),
            ModelKind::String => check_subtree::<StringParams>("model.params", params),
        },
        _ => None,
    };
    refined
        .or_else(|| {
            map.get("initial")
                .and_then(|v| check_subtree::<InitialConditions>("model.initial", v))
        })
        .unwrap_or(error)
}

fn path_string(path: &serde_path_to_error::Path) -> String {
    let s = path.to_string();
    if s == "." {
        String::new()
    } else {
        s
    }
}

/// Deserializes a scenario from a TOML table that still carries its
/// `schema_version`, without validating constraints.
pub fn scenario_from_toml_table(mut table: toml::Table) -> Result<Scenario> {
    let version = table.remove("schema_version");
    check_version(match version {
        None => None,
        Some(toml::Value::Integer(v)) => Some(v),
        Some(other) => {
            return Err(Error::Parse {
                path: "schema_version".into(),
                message: format!("expected an integer, got {other}"),
            })
        }
    })?;
    let model = table
        .get("model")
        .and_then(|m| serde_json::to_value(m).ok());
    serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| {
        let path = path_string(e.path());
        refine_model_error(model, classify(path, e.into_inner().message().to_string()))
    })
}

pub fn parse_toml_table(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>().map_err(|e| Error::Parse {
        path: String::new(),
        message: e.message().to_string(),
    })
}

/// Parses and validates a TOML scenario document.
pub fn parse_scenario_toml(text: &str) -> Result<Scenario> {
    scenario_from_toml_table(parse_toml_table(text)?)?.validated()
}

/// Parses and validates a JSON scenario document.
pub fn parse_scenario_json(text: &str) -> Result<Scenario> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: String::new(),
        message: e.to_string(),
    })?;
    scenario_from_json_value(value)?.validated()
}

/// Deserializes a JSON scenario document without validating constraints.
pub fn scenario_from_json_value(mut value: serde_json::Value) -> Result<Scenario> {
    let Some(object) = value.as_object_mut() else {
        return Err(Error::Parse {
            path: String::new(),
            message: "scenario document must be an object".into(),
        });
    };
    let version = match object.remove("schema_version") {
        None => None,
        Some(v) => Some(v.as_i64().ok_or_else(|| Error::Parse {
            path: "schema_version".into(),
            message: format!("expected an integer, got {v}"),
        })?),
    };
    check_version(version)?;
    let model = object.get("model").cloned();
    let text = value.to_string();
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = path_string(e.path());
        let inner = e.into_inner().to_string();
        // serde_json appends " at line L column C"
        let message = match inner.rfind(" at line ") {
            Some(pos) => inner[..pos].to_string(),
            None => inner,
        };
        refine_model_error(model, classify(path, message))
    })
}

/// One `KEY=VALUE` override, with `KEY` a dotted path into the scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub key: String,
    pub value: String,
}

impl std::str::FromStr for Override {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (key, value) = s.split_once('=').ok_or_else(|| Error::Parse {
            path: s.to_string(),
            message: "override must look like KEY=VALUE".into(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse {
                path: String::new(),
                message: "override key is empty".into(),
            });
        }
        Ok(Self {
            key: key.to_string(),
            value: value.trim().to_string(),
        })
    }
}

fn parse_override_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn coerce(existing: &toml::Value, new: toml::Value) -> toml::Value {
    match (existing, new) {
        (toml::Value::Float(_), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
        (toml::Value::String(_), v @ toml::Value::String(_)) => v,
        (toml::Value::String(_), v) => toml::Value::String(v.to_string()),
        (_, v) => v,
    }
}

/// Applies overrides to a fully populated scenario tree. Every key must
/// already exist; integers written over float keys become floats.
pub fn apply_overrides(table: &mut toml::Table, overrides: &[Override]) -> Result<()> {
    for o in overrides {
        let parts: Vec<&str> = o.key.split('.').collect();
        let (last, parents) = parts.split_last().expect("split yields at least one part");
        let mut cursor = &mut *table;
        for (depth, part) in parents.iter().enumerate() {
            cursor = match cursor.get_mut(*part) {
                Some(toml::Value::Table(t)) => t,
                _ => {
                    return Err(Error::UnknownKey {
                        path: parts[..=depth].join("."),
                        message: "no such table in the scenario".into(),
                    })
                }
            };
        }
        let Some(slot) = cursor.get_mut(*last) else {
            return Err(Error::UnknownKey {
                path: o.key.clone(),
                message: "no such key in the scenario".into(),
            });
        };
        if slot.is_table() || slot.is_array() {
            return Err(Error::Parse {
                path: o.key.clone(),
                message: "only scalar keys can be overridden".into(),
            });
        }
        *slot = coerce(slot, parse_override_value(&o.value));
    }
    Ok(())
}

/// Parses a TOML document, applies overrides to its normalized tree and
/// validates the result.
pub fn parse_scenario_toml_with_overrides(text: &str, overrides: &[Override]) -> Result<Scenario> {
    let scenario = scenario_from_toml_table(parse_toml_table(text)?)?;
    with_overrides(&scenario, overrides)
}

/// Applies overrides to an already parsed scenario and validates.
pub fn with_overrides(scenario: &Scenario, overrides: &[Override]) -> Result<Scenario> {
    let mut table = scenario.to_toml_table();
    apply_overrides(&mut table, overrides)?;
    scenario_from_toml_table(table)?.validated()
}
