//! The PDE systems: parameters, initial data, and the explicit interior
//! updates. Tip (free-end) updates live in [`crate::control`].

pub mod disturbance;
pub mod eb_beam;
pub mod heat;
pub mod string;
pub mod timoshenko;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use disturbance::{
    eval_disturbance, DisturbanceKind, DisturbanceSpec, DisturbanceValue, Disturbances,
};
pub use eb_beam::EbBeamParams;
pub use heat::HeatParams;
pub use string::{string_tension, LinearProfile, StringParams};
pub use timoshenko::TimoshenkoParams;

use crate::error::FieldError;
use crate::mesh::Mesh;

/// Spatial profile used for initial displacement (and rotation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Zero,
    Constant {
        value: f64,
    },
    Linear {
        slope: f64,
    },
    /// `amplitude * sin(mode * pi * x / L)`
    Sine {
        amplitude: f64,
        mode: u32,
    },
}

impl Profile {
    pub fn eval(&self, x: f64, length: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Constant { value } => value,
            Profile::Linear { slope } => slope * x,
            Profile::Sine { amplitude, mode } => amplitude * (mode as f64 * PI * x / length).sin(),
        }
    }

    fn validate(&self, path: &str, errors: &mut Vec<FieldError>) {
        let finite = match *self {
            Profile::Zero => true,
            Profile::Constant { value } => value.is_finite(),
            Profile::Linear { slope } => slope.is_finite(),
            Profile::Sine { amplitude, .. } => amplitude.is_finite(),
        };
        if !finite {
            errors.push(FieldError::new(path, "profile coefficients must be finite"));
        }
    }
}

/// Optional overrides of a model's built-in initial data. Initial velocity is
/// always zero (levels 0 and 1 are equal).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displacement: Option<Profile>,
    /// Cross-section rotation; Timoshenko beam only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Profile>,
}

impl InitialConditions {
    fn is_default(&self) -> bool {
        self.displacement.is_none() && self.rotation.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Heat,
    EbBeam,
    Timoshenko,
    String,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Heat,
        ModelKind::EbBeam,
        ModelKind::Timoshenko,
        ModelKind::String,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Heat => "heat",
            ModelKind::EbBeam => "eb_beam",
            ModelKind::Timoshenko => "timoshenko",
            ModelKind::String => "string",
        }
    }

    pub fn has_rotation(self) -> bool {
        matches!(self, ModelKind::Timoshenko)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which PDE system to simulate, with its physical parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Heat {
        params: HeatParams,
        #[serde(default, skip_serializing_if = "InitialConditions::is_default")]
        initial: InitialConditions,
    },
    EbBeam {
        params: EbBeamParams,
        #[serde(default, skip_serializing_if = "InitialConditions::is_default")]
        initial: InitialConditions,
    },
    Timoshenko {
        params: TimoshenkoParams,
        #[serde(default, skip_serializing_if = "InitialConditions::is_default")]
        initial: InitialConditions,
    },
    String {
        params: StringParams,
        #[serde(default, skip_serializing_if = "InitialConditions::is_default")]
        initial: InitialConditions,
    },
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Heat { .. } => ModelKind::Heat,
            ModelSpec::EbBeam { .. } => ModelKind::EbBeam,
            ModelSpec::Timoshenko { .. } => ModelKind::Timoshenko,
            ModelSpec::String { .. } => ModelKind::String,
        }
    }

    pub fn default_for(kind: ModelKind) -> Self {
        let initial = InitialConditions::default();
        match kind {
            ModelKind::Heat => ModelSpec::Heat {
                params: HeatParams::default(),
                initial,
            },
            ModelKind::EbBeam => ModelSpec::EbBeam {
                params: EbBeamParams::default(),
                initial,
            },
            ModelKind::Timoshenko => ModelSpec::Timoshenko {
                params: TimoshenkoParams::default(),
                initial,
            },
            ModelKind::String => ModelSpec::String {
                params: StringParams::default(),
                initial,
            },
        }
    }

    pub fn initial(&self) -> &InitialConditions {
        match self {
            ModelSpec::Heat { initial, .. }
            | ModelSpec::EbBeam { initial, .. }
            | ModelSpec::Timoshenko { initial, .. }
            | ModelSpec::String { initial, .. } => initial,
        }
    }

    pub fn initial_mut(&mut self) -> &mut InitialConditions {
        match self {
            ModelSpec::Heat { initial, .. }
            | ModelSpec::EbBeam { initial, .. }
            | ModelSpec::Timoshenko { initial, .. }
            | ModelSpec::String { initial, .. } => initial,
        }
    }

    /// Initial displacement profile, falling back to the model's built-in one.
    pub fn displacement_profile(&self) -> Profile {
        if let Some(p) = self.initial().displacement {
            return p;
        }
        match self {
            ModelSpec::Heat { .. } | ModelSpec::EbBeam { .. } => Profile::Sine {
                amplitude: 1.0,
                mode: 1,
            },
            ModelSpec::Timoshenko { .. } => Profile::Linear { slope: 0.5 },
            ModelSpec::String { .. } => Profile::Linear { slope: 1.0 },
        }
    }

    pub fn rotation_profile(&self) -> Option<Profile> {
        match self {
            ModelSpec::Timoshenko { initial, .. } => Some(
                initial
                    .rotation
                    .unwrap_or(Profile::Constant { value: PI / 6.0 }),
            ),
            _ => None,
        }
    }

    /// Constraint violations, with paths relative to the model table.
    pub fn validate(&self, length: f64) -> Vec<FieldError> {
        let mut errors: Vec<FieldError> = match self {
            ModelSpec::Heat { params, .. } => params.validate(),
            ModelSpec::EbBeam { params, .. } => params.validate(),
            ModelSpec::Timoshenko { params, .. } => params.validate(),
            ModelSpec::String { params, .. } => params.validate(length),
        }
        .into_iter()
        .map(|e| e.prefixed("params"))
        .collect();
        let initial = self.initial();
        if let Some(p) = &initial.displacement {
            p.validate("initial.displacement", &mut errors);
        }
        if let Some(p) = &initial.rotation {
            if self.kind().has_rotation() {
                p.validate("initial.rotation", &mut errors);
            } else {
                errors.push(FieldError::new(
                    "initial.rotation",
                    format!("the {} model has no rotation field", self.kind()),
                ));
            }
        }
        errors
    }
}

pub(crate) fn check_positive(errors: &mut Vec<FieldError>, name: &str, value: f64) {
    if !(value > 0.0 && value.is_finite()) {
        errors.push(FieldError::new(
            name,
            format!("must be positive, got {value}"),
        ));
    }
}

pub(crate) fn check_non_negative(errors: &mut Vec<FieldError>, name: &str, value: f64) {
    if !(value >= 0.0 && value.is_finite()) {
        errors.push(FieldError::new(
            name,
            format!("must be non-negative, got {value}"),
        ));
    }
}

/// Displacement (and, for the Timoshenko beam, rotation) on a
/// `(n_time + 1) x (n_space + 1)` grid stored level-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory {
    n_nodes: usize,
    n_levels: usize,
    w: Vec<f64>,
    phi: Option<Vec<f64>>,
}

impl FieldHistory {
    pub fn zeros(n_nodes: usize, n_levels: usize, with_rotation: bool) -> Self {
        let len = n_nodes * n_levels;
        Self {
            n_nodes,
            n_levels,
            w: vec![0.0; len],
            phi: with_rotation.then(|| vec![0.0; len]),
        }
    }

    pub fn for_mesh(mesh: &Mesh, kind: ModelKind) -> Self {
        Self::zeros(mesh.n_nodes(), mesh.n_levels(), kind.has_rotation())
    }

    pub fn from_parts(n_nodes: usize, w: Vec<f64>, phi: Option<Vec<f64>>) -> Self {
        assert!(
            n_nodes > 0 && w.len().is_multiple_of(n_nodes),
            "grid length must be a multiple of the node count"
        );
        if let Some(phi) = &phi {
            assert_eq!(phi.len(), w.len(), "field shapes must agree");
        }
        Self {
            n_nodes,
            n_levels: w.len() / n_nodes,
            w,
            phi,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn has_rotation(&self) -> bool {
        self.phi.is_some()
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn phi(&self) -> Option<&[f64]> {
        self.phi.as_deref()
    }

    pub fn w_level(&self, j: usize) -> &[f64] {
        &self.w[j * self.n_nodes..(j + 1) * self.n_nodes]
    }

    pub fn phi_level(&self, j: usize) -> Option<&[f64]> {
        self.phi
            .as_ref()
            .map(|p| &p[j * self.n_nodes..(j + 1) * self.n_nodes])
    }

    pub fn level(&self, j: usize) -> Level<'_> {
        Level {
            w: self.w_level(j),
            phi: self.phi_level(j),
        }
    }

    pub fn level_mut(&mut self, j: usize) -> LevelMut<'_> {
        let n = self.n_nodes;
        LevelMut {
            w: &mut self.w[j * n..(j + 1) * n],
            phi: self.phi.as_mut().map(|p| &mut p[j * n..(j + 1) * n]),
        }
    }

    /// Levels `j-2` and `j-1` for reading and level `j` for writing.
    pub fn step_levels(&mut self, j: usize) -> (Level<'_>, Level<'_>, LevelMut<'_>) {
        assert!(j >= 2 && j < self.n_levels, "step level {j} out of range");
        let n = self.n_nodes;
        let (w_done, w_rest) = self.w.split_at_mut(j * n);
        let w_done: &[f64] = w_done;
        let (phi_done, phi_next) = match self.phi.as_mut() {
            Some(p) => {
                let (done, rest) = p.split_at_mut(j * n);
                let done: &[f64] = done;
                (Some(done), Some(&mut rest[..n]))
            }
            None => (None, None),
        };
        let older = Level {
            w: &w_done[(j - 2) * n..(j - 1) * n],
            phi: phi_done.map(|p| &p[(j - 2) * n..(j - 1) * n]),
        };
        let prev = Level {
            w: &w_done[(j - 1) * n..j * n],
            phi: phi_done.map(|p| &p[(j - 1) * n..j * n]),
        };
        let next = LevelMut {
            w: &mut w_rest[..n],
            phi: phi_next,
        };
        (older, prev, next)
    }

    /// Level `j-1` for reading and level `j` for writing (two-level schemes).
    pub fn step_pair(&mut self, j: usize) -> (Level<'_>, LevelMut<'_>) {
        assert!(j >= 1 && j < self.n_levels, "step level {j} out of range");
        let n = self.n_nodes;
        let (w_done, w_rest) = self.w.split_at_mut(j * n);
        let w_done: &[f64] = w_done;
        let (phi_prev, phi_next) = match self.phi.as_mut() {
            Some(p) => {
                let (done, rest) = p.split_at_mut(j * n);
                let done: &[f64] = done;
                (Some(&done[(j - 1) * n..]), Some(&mut rest[..n]))
            }
            None => (None, None),
        };
        (
            Level {
                w: &w_done[(j - 1) * n..],
                phi: phi_prev,
            },
            LevelMut {
                w: &mut w_rest[..n],
                phi: phi_next,
            },
        )
    }

    /// Moves every level one slot towards index 0, discarding level 0. Used
    /// by the three-level ring of rolling storage.
    pub(crate) fn shift_back(&mut self) {
        let n = self.n_nodes;
        self.w.copy_within(n.., 0);
        if let Some(p) = self.phi.as_mut() {
            p.copy_within(n.., 0);
        }
    }

    /// Drops every level after `last`.
    pub fn truncate(&mut self, last: usize) {
        let keep = (last + 1).min(self.n_levels);
        self.w.truncate(keep * self.n_nodes);
        if let Some(p) = self.phi.as_mut() {
            p.truncate(keep * self.n_nodes);
        }
        self.n_levels = keep;
    }
}

/// One time level of every field, read-only.
#[derive(Debug, Clone, Copy)]
pub struct Level<'a> {
    pub w: &'a [f64],
    pub phi: Option<&'a [f64]>,
}

/// One time level of every field, writable.
#[derive(Debug)]
pub struct LevelMut<'a> {
    pub w: &'a mut [f64],
    pub phi: Option<&'a mut [f64]>,
}

impl LevelMut<'_> {
    pub fn as_level(&self) -> Level<'_> {
        Level {
            w: self.w,
            phi: self.phi.as_deref(),
        }
    }
}

/// Writes levels 0 and 1 from the model's initial profiles. Zero initial
/// velocity is encoded by making the two levels equal.
pub fn apply_initial_conditions(model: &ModelSpec, mesh: &Mesh, history: &mut FieldHistory) {
    let length = mesh.length();
    let w_profile = model.displacement_profile();
    let phi_profile = model.rotation_profile();
    for j in 0..2.min(history.n_levels()) {
        let level = history.level_mut(j);
        for (i, w) in level.w.iter_mut().enumerate() {
            *w = w_profile.eval(mesh.x(i), length);
        }
        if let (Some(phi), Some(profile)) = (level.phi, phi_profile) {
            for (i, p) in phi.iter_mut().enumerate() {
                *p = profile.eval(mesh.x(i), length);
            }
        }
    }
}

/// Clamps the fixed end (node 0) of every field at one level. The heat and
/// Euler-Bernoulli models are held at zero at both ends.
pub fn fixed_end_condition(kind: ModelKind, level: &mut LevelMut<'_>) {
    let last = level.w.len() - 1;
    level.w[0] = 0.0;
    if let Some(phi) = level.phi.as_deref_mut() {
        phi[0] = 0.0;
    }
    if matches!(kind, ModelKind::Heat | ModelKind::EbBeam) {
        level.w[last] = 0.0;
    }
}
