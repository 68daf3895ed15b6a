//! External disturbances acting on the tip payload or along the structure.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ModelKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisturbanceKind {
    /// Force `d` and torque `theta` on the beam's tip payload, driven by
    /// `sin(n pi x t)` harmonics evaluated at the tip coordinate.
    TimoshenkoTip,
    /// `f = x / (1000 L) * (1 + sin(0.1 pi x t) + sin(0.2 pi x t) + sin(0.3 pi x t))`.
    TimoshenkoDistributed,
    /// `d = 1 + 0.2 sin(0.2 t) + 0.3 sin(0.3 t) + 0.5 sin(0.5 t)`.
    StringTip,
    /// `f = x * (3 + sin(pi x t) + sin(2 pi x t) + sin(3 pi x t))`.
    StringDistributed,
    None,
}

impl DisturbanceKind {
    pub fn is_tip(self) -> bool {
        matches!(
            self,
            DisturbanceKind::TimoshenkoTip | DisturbanceKind::StringTip
        )
    }

    pub fn is_distributed(self) -> bool {
        matches!(
            self,
            DisturbanceKind::TimoshenkoDistributed | DisturbanceKind::StringDistributed
        )
    }

    /// Whether the disturbance can act on `model`. Distributed loads apply to
    /// either beam; tip loads need the matching payload boundary.
    pub fn compatible_with(self, model: ModelKind) -> bool {
        match self {
            DisturbanceKind::None => true,
            DisturbanceKind::TimoshenkoTip => model == ModelKind::Timoshenko,
            DisturbanceKind::StringTip => model == ModelKind::String,
            DisturbanceKind::TimoshenkoDistributed => {
                matches!(model, ModelKind::Timoshenko | ModelKind::EbBeam)
            }
            DisturbanceKind::StringDistributed => {
                matches!(model, ModelKind::String | ModelKind::EbBeam)
            }
        }
    }
}

fn default_enabled() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceSpec {
    pub kind: DisturbanceKind,
    #[serde(default = "default_enabled")]
    pub enabled: bool,
}

impl DisturbanceSpec {
    pub fn new(kind: DisturbanceKind) -> Self {
        Self {
            kind,
            enabled: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisturbanceValue {
    Scalar(f64),
    /// Tip force and tip torque.
    Pair(f64, f64),
}

impl DisturbanceValue {
    pub fn scalar(self) -> f64 {
        match self {
            DisturbanceValue::Scalar(v) | DisturbanceValue::Pair(v, _) => v,
        }
    }
}

fn harmonics(base: f64) -> f64 {
    base.sin() + (2.0 * base).sin() + (3.0 * base).sin()
}

/// Evaluates a disturbance at position `x` and time `t`. Tip disturbances of
/// the beam use `x` as the tip coordinate; the string's tip disturbance
/// ignores it. Disabled specs evaluate to zero.
pub fn eval_disturbance(spec: &DisturbanceSpec, x: f64, t: f64, length: f64) -> DisturbanceValue {
    if !spec.enabled {
        return match spec.kind {
            DisturbanceKind::TimoshenkoTip => DisturbanceValue::Pair(0.0, 0.0),
            _ => DisturbanceValue::Scalar(0.0),
        };
    }
    match spec.kind {
        DisturbanceKind::TimoshenkoTip => {
            let h = harmonics(PI * x * t);
            DisturbanceValue::Pair(1.0 + h, h)
        }
        DisturbanceKind::TimoshenkoDistributed => {
            let s = 0.1 * PI * x * t;
            DisturbanceValue::Scalar(x / (1000.0 * length) * (1.0 + harmonics(s)))
        }
        DisturbanceKind::StringTip => DisturbanceValue::Scalar(
            1.0 + 0.2 * (0.2 * t).sin() + 0.3 * (0.3 * t).sin() + 0.5 * (0.5 * t).sin(),
        ),
        DisturbanceKind::StringDistributed => {
            DisturbanceValue::Scalar(x * (3.0 + harmonics(PI * x * t)))
        }
        DisturbanceKind::None => DisturbanceValue::Scalar(0.0),
    }
}

/// Supremum of `|d(t)|` for the string's tip disturbance: `1 + 0.2 + 0.3 + 0.5`.
pub const STRING_TIP_BOUND: f64 = 2.0;

/// The disturbances active in one run, resolved from the scenario list.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Disturbances {
    pub tip: Option<DisturbanceSpec>,
    pub distributed: Option<DisturbanceSpec>,
    pub length: f64,
}

impl Disturbances {
    pub fn none(length: f64) -> Self {
        Self {
            tip: None,
            distributed: None,
            length,
        }
    }

    /// Keeps the last enabled spec of each category.
    pub fn resolve(specs: &[DisturbanceSpec], length: f64) -> Self {
        let mut out = Self::none(length);
        for spec in specs.iter().filter(|s| s.enabled) {
            if spec.kind.is_tip() {
                out.tip = Some(*spec);
            } else if spec.kind.is_distributed() {
                out.distributed = Some(*spec);
            }
        }
        out
    }

    /// Distributed load at `(x, t)`, zero when none is active.
    #[inline]
    pub fn load(&self, x: f64, t: f64) -> f64 {
        match &self.distributed {
            Some(spec) => eval_disturbance(spec, x, t, self.length).scalar(),
            None => 0.0,
        }
    }

    /// Tip force and torque at time `t`, zero when none is active.
    pub fn tip(&self, t: f64) -> (f64, f64) {
        match &self.tip {
            Some(spec) => match eval_disturbance(spec, self.length, t, self.length) {
                DisturbanceValue::Pair(d, theta) => (d, theta),
                DisturbanceValue::Scalar(d) => (d, 0.0),
            },
            None => (0.0, 0.0),
        }
    }
}
