//! Boundary controllers and the tip-node updates they induce.
//!
//! All tip updates are explicit: forces are evaluated from levels `j-1` and
//! `j-2` and disturbances at `t_{j-1}`, the centre of the second time
//! difference.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};
use crate::mesh::Mesh;
use crate::models::disturbance::STRING_TIP_BOUND;
use crate::models::{
    string_tension, Disturbances, Level, LevelMut, ModelKind, ModelSpec, StringParams,
    TimoshenkoParams,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerKind {
    #[default]
    NoControl,
    /// Proportional-derivative force and torque on the beam tip.
    Pd,
    /// Model-cancelling force with a sign-function robust term on the string tip.
    ExactModel,
}

impl ControllerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ControllerKind::NoControl => "no_control",
            ControllerKind::Pd => "pd",
            ControllerKind::ExactModel => "exact_model",
        }
    }

    pub fn compatible_with(self, model: ModelKind) -> bool {
        match self {
            ControllerKind::NoControl => true,
            ControllerKind::Pd => model == ModelKind::Timoshenko,
            ControllerKind::ExactModel => model == ModelKind::String,
        }
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `u = -k1 w - k2 w_t`, `tau = -k3 phi - k4 phi_t` at the tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdGains {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

impl Default for PdGains {
    fn default() -> Self {
        Self {
            k1: 0.0,
            k2: 0.0,
            k3: 0.0,
            k4: 0.0,
        }
    }
}

impl PdGains {
    /// The stable gain set of the reference beam study.
    pub const fn reference() -> Self {
        Self {
            k1: 100.0,
            k2: 10.0,
            k3: 100.0,
            k4: 10.0,
        }
    }
}

/// Velocity (`k1`) and slope (`k2`) feedback gains of the exact-model law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmGains {
    pub k1: f64,
    pub k2: f64,
}

impl Default for EmGains {
    fn default() -> Self {
        Self { k1: 10.0, k2: 10.0 }
    }
}

fn default_disturbance_bound() -> f64 {
    STRING_TIP_BOUND
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSpec {
    #[serde(default)]
    pub kind: ControllerKind,
    #[serde(default)]
    pub pd_gains: PdGains,
    #[serde(default)]
    pub em_gains: EmGains,
    /// Bound on the tip disturbance used by the exact-model robust term.
    #[serde(default = "default_disturbance_bound")]
    pub disturbance_bound: f64,
}

impl Default for ControllerSpec {
    fn default() -> Self {
        Self::none()
    }
}

impl ControllerSpec {
    pub fn none() -> Self {
        Self {
            kind: ControllerKind::NoControl,
            pd_gains: PdGains::default(),
            em_gains: EmGains::default(),
            disturbance_bound: STRING_TIP_BOUND,
        }
    }

    pub fn pd(gains: PdGains) -> Self {
        Self {
            kind: ControllerKind::Pd,
            pd_gains: gains,
            ..Self::none()
        }
    }

    pub fn exact_model(gains: EmGains, disturbance_bound: f64) -> Self {
        Self {
            kind: ControllerKind::ExactModel,
            em_gains: gains,
            disturbance_bound,
            ..Self::none()
        }
    }

    pub fn validate(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        let gains = [
            ("pd_gains.k1", self.pd_gains.k1),
            ("pd_gains.k2", self.pd_gains.k2),
            ("pd_gains.k3", self.pd_gains.k3),
            ("pd_gains.k4", self.pd_gains.k4),
            ("em_gains.k1", self.em_gains.k1),
            ("em_gains.k2", self.em_gains.k2),
            ("disturbance_bound", self.disturbance_bound),
        ];
        for (path, value) in gains {
            if !(value >= 0.0 && value.is_finite()) {
                errors.push(FieldError::new(
                    path,
                    format!("must be non-negative, got {value}"),
                ));
            }
        }
        errors
    }

    /// Names accepted by [`ControllerSpec::set_gain`] for this controller.
    pub fn gain_names(&self) -> &'static [&'static str] {
        match self.kind {
            ControllerKind::NoControl => &[],
            ControllerKind::Pd => &["k1", "k2", "k3", "k4"],
            ControllerKind::ExactModel => &["k1", "k2", "disturbance_bound"],
        }
    }

    pub fn gain(&self, name: &str) -> Result<f64> {
        match (self.kind, name) {
            (ControllerKind::Pd, "k1") => Ok(self.pd_gains.k1),
            (ControllerKind::Pd, "k2") => Ok(self.pd_gains.k2),
            (ControllerKind::Pd, "k3") => Ok(self.pd_gains.k3),
            (ControllerKind::Pd, "k4") => Ok(self.pd_gains.k4),
            (ControllerKind::ExactModel, "k1") => Ok(self.em_gains.k1),
            (ControllerKind::ExactModel, "k2") => Ok(self.em_gains.k2),
            (ControllerKind::ExactModel, "disturbance_bound") => Ok(self.disturbance_bound),
            _ => Err(Error::UnknownGain {
                name: name.to_string(),
                controller: self.kind.to_string(),
            }),
        }
    }

    pub fn set_gain(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match (self.kind, name) {
            (ControllerKind::Pd, "k1") => &mut self.pd_gains.k1,
            (ControllerKind::Pd, "k2") => &mut self.pd_gains.k2,
            (ControllerKind::Pd, "k3") => &mut self.pd_gains.k3,
            (ControllerKind::Pd, "k4") => &mut self.pd_gains.k4,
            (ControllerKind::ExactModel, "k1") => &mut self.em_gains.k1,
            (ControllerKind::ExactModel, "k2") => &mut self.em_gains.k2,
            (ControllerKind::ExactModel, "disturbance_bound") => &mut self.disturbance_bound,
            _ => {
                return Err(Error::UnknownGain {
                    name: name.to_string(),
                    controller: self.kind.to_string(),
                })
            }
        };
        *slot = value;
        Ok(())
    }
}

/// `sgn` with `sgn(0) = 0`.
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Uncontrolled tip of the Timoshenko beam:
///
/// ```text
/// w(N,j)   = 2w(N,j-1) - w(N,j-2) + k^2 K/M phi(N,j-1) + k^2/M d
///          - k^2 K/(M h) [w(N,j-1) - w(N-1,j-1)]
/// phi(N,j) = 2phi(N,j-1) - phi(N,j-2) - k^2 EI/(J h) [phi(N,j-1) - phi(N-1,j-1)]
///          + k^2/J theta
/// ```
pub fn timoshenko_tip_no_control(
    params: &TimoshenkoParams,
    mesh: &Mesh,
    disturbances: &Disturbances,
    t_prev: f64,
    older: Level<'_>,
    prev: Level<'_>,
    next: &mut LevelMut<'_>,
) {
    let (h, k) = (mesh.h, mesh.k);
    let k2 = k * k;
    let (m, j_inertia) = (params.payload_mass, params.payload_inertia);
    let n = prev.w.len() - 1;
    let (d, theta) = disturbances.tip(t_prev);
    let (w1, w2) = (prev.w, older.w);
    let p1 = prev.phi.expect("timoshenko history carries rotation");
    let p2 = older.phi.expect("timoshenko history carries rotation");

    next.w[n] = 2.0 * w1[n] - w2[n] + k2 * params.shear_k / m * p1[n] + k2 / m * d
        - k2 * params.shear_k / (m * h) * (w1[n] - w1[n - 1]);
    let next_phi = next
        .phi
        .as_deref_mut()
        .expect("timoshenko history carries rotation");
    next_phi[n] = 2.0 * p1[n] - p2[n] - k2 * params.ei / (j_inertia * h) * (p1[n] - p1[n - 1])
        + k2 / j_inertia * theta;
}

/// Tip force and torque of the PD law from levels `j-1` and `j-2`, with
/// backward-difference rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdOutput {
    pub force: f64,
    pub torque: f64,
    /// `-k2 w_t`, the derivative part of `force`.
    pub force_damping: f64,
    /// `-k4 phi_t`, the derivative part of `torque`.
    pub torque_damping: f64,
}

pub fn pd_output(gains: &PdGains, k: f64, older: Level<'_>, prev: Level<'_>) -> PdOutput {
    let n = prev.w.len() - 1;
    let w_rate = (prev.w[n] - older.w[n]) / k;
    let p1 = prev.phi.expect("timoshenko history carries rotation");
    let p2 = older.phi.expect("timoshenko history carries rotation");
    let phi_rate = (p1[n] - p2[n]) / k;
    let force_damping = -gains.k2 * w_rate;
    let torque_damping = -gains.k4 * phi_rate;
    PdOutput {
        force: -gains.k1 * prev.w[n] + force_damping,
        torque: -gains.k3 * p1[n] + torque_damping,
        force_damping,
        torque_damping,
    }
}

/// Timoshenko tip under PD control: the uncontrolled update plus
/// `k^2/M u` and `k^2/J tau`.
#[allow(clippy::too_many_arguments)]
pub fn tip_update_pd(
    params: &TimoshenkoParams,
    gains: &PdGains,
    mesh: &Mesh,
    disturbances: &Disturbances,
    t_prev: f64,
    older: Level<'_>,
    prev: Level<'_>,
    next: &mut LevelMut<'_>,
) {
    timoshenko_tip_no_control(params, mesh, disturbances, t_prev, older, prev, next);
    let out = pd_output(gains, mesh.k, older, prev);
    let k2 = mesh.k * mesh.k;
    let n = next.w.len() - 1;
    if out.force != 0.0 {
        next.w[n] += k2 / params.payload_mass * out.force;
    }
    if out.torque != 0.0 {
        let phi = next
            .phi
            .as_deref_mut()
            .expect("timoshenko history carries rotation");
        phi[n] += k2 / params.payload_inertia * out.torque;
    }
}

/// Uncontrolled string tip, `M w_tt = -T(L) w_x - lambda(L) w_x^3 + d`:
///
/// ```text
/// w(N,j) = 2w(N,j-1) - w(N,j-2) - k^2 T(N)/(M h) [w(N) - w(N-1)]
///        - k^2 lambda(L)/(M h^3) [w(N) - w(N-1)]^3 + k^2/M d
/// ```
pub fn string_tip_no_control(
    params: &StringParams,
    mesh: &Mesh,
    disturbances: &Disturbances,
    t_prev: f64,
    older: &[f64],
    prev: &[f64],
    next: &mut [f64],
) {
    let (h, k) = (mesh.h, mesh.k);
    let k2 = k * k;
    let m = params.payload_mass;
    let n = prev.len() - 1;
    let length = mesh.length();
    let delta = prev[n] - prev[n - 1];
    let tension = string_tension(params, length, delta / h);
    let (d, _) = disturbances.tip(t_prev);
    next[n] = 2.0 * prev[n]
        - older[n]
        - k2 * tension / (m * h) * delta
        - k2 * params.lambda.at(length) / (m * h.powi(3)) * delta * delta * delta
        + k2 / m * d;
}

/// Exact-model control force at the string tip and its robust part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactModelOutput {
    pub force: f64,
    /// `-sgn(w_t + w_x) d_bar`.
    pub robust: f64,
}

/// `u = T0(L) w_x - M w_xt - k1 w_t - k2 w_x - sgn(w_t + w_x) d_bar` with
/// backward differences in space and time; `w_xt` is the backward time
/// difference of the backward space difference.
pub fn exact_model_output(
    params: &StringParams,
    gains: &EmGains,
    disturbance_bound: f64,
    mesh: &Mesh,
    older: &[f64],
    prev: &[f64],
) -> ExactModelOutput {
    let (h, k) = (mesh.h, mesh.k);
    let n = prev.len() - 1;
    let wx = (prev[n] - prev[n - 1]) / h;
    let wx_older = (older[n] - older[n - 1]) / h;
    let wt = (prev[n] - older[n]) / k;
    let wxt = (wx - wx_older) / k;
    let robust = -sign(wt + wx) * disturbance_bound;
    let force = params.base_tension.at(mesh.length()) * wx
        - params.payload_mass * wxt
        - gains.k1 * wt
        - gains.k2 * wx
        + robust;
    ExactModelOutput { force, robust }
}

#[allow(clippy::too_many_arguments)]
pub fn tip_update_exact_model(
    params: &StringParams,
    gains: &EmGains,
    disturbance_bound: f64,
    mesh: &Mesh,
    disturbances: &Disturbances,
    t_prev: f64,
    older: &[f64],
    prev: &[f64],
    next: &mut [f64],
) {
    string_tip_no_control(params, mesh, disturbances, t_prev, older, prev, next);
    let out = exact_model_output(params, gains, disturbance_bound, mesh, older, prev);
    let n = next.len() - 1;
    next[n] += mesh.k * mesh.k / params.payload_mass * out.force;
}

/// Uncontrolled tip update for any model. Models whose far end is held
/// fixed (heat, Euler-Bernoulli) are left to [`crate::models::fixed_end_condition`].
pub fn tip_update_no_control(
    model: &ModelSpec,
    mesh: &Mesh,
    disturbances: &Disturbances,
    t_prev: f64,
    older: Level<'_>,
    prev: Level<'_>,
    next: &mut LevelMut<'_>,
) {
    match model {
        ModelSpec::Timoshenko { params, .. } => {
            timoshenko_tip_no_control(params, mesh, disturbances, t_prev, older, prev, next)
        }
        ModelSpec::String { params, .. } => {
            string_tip_no_control(params, mesh, disturbances, t_prev, older.w, prev.w, next.w)
        }
        ModelSpec::Heat { .. } | ModelSpec::EbBeam { .. } => {}
    }
}

/// Tip update for `controller` acting on `model`. Incompatible pairs are
/// rejected by scenario validation and treated as uncontrolled here.
#[allow(clippy::too_many_arguments)]
pub fn tip_update(
    controller: &ControllerSpec,
    model: &ModelSpec,
    mesh: &Mesh,
    disturbances: &Disturbances,
    t_prev: f64,
    older: Level<'_>,
    prev: Level<'_>,
    next: &mut LevelMut<'_>,
) {
    match (controller.kind, model) {
        (ControllerKind::Pd, ModelSpec::Timoshenko { params, .. }) => tip_update_pd(
            params,
            &controller.pd_gains,
            mesh,
            disturbances,
            t_prev,
            older,
            prev,
            next,
        ),
        (ControllerKind::ExactModel, ModelSpec::String { params, .. }) => tip_update_exact_model(
            params,
            &controller.em_gains,
            controller.disturbance_bound,
            mesh,
            disturbances,
            t_prev,
            older.w,
            prev.w,
            next.w,
        ),
        _ => tip_update_no_control(model, mesh, disturbances, t_prev, older, prev, next),
    }
}
