//! Timoshenko beam with a tip payload.
//!
//! Interior dynamics, with displacement `w` and cross-section rotation `phi`:
//!
//! ```text
//! rho  w_tt   = K (w_xx - phi_x) + f
//! I_rho phi_tt = EI phi_xx - K (phi - w_x)
//! ```
//!
//! Both couplings use the shear strain `w_x - phi`, which is what the tip
//! boundary `M w_tt = K (phi - w_x) + u + d` is the natural condition for.
//! First space derivatives are backward differences.

use serde::{Deserialize, Serialize};

use super::{check_positive, Disturbances, Level, LevelMut};
use crate::error::FieldError;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimoshenkoParams {
    /// Mass per unit length.
    pub rho: f64,
    /// Mass moment of inertia of the cross-section per unit length.
    pub i_rho: f64,
    /// Bending stiffness.
    pub ei: f64,
    /// Shear stiffness `kGA`.
    pub shear_k: f64,
    /// Tip payload mass.
    pub payload_mass: f64,
    /// Tip payload rotary inertia.
    pub payload_inertia: f64,
}

impl Default for TimoshenkoParams {
    fn default() -> Self {
        Self {
            rho: 1.0,
            i_rho: 1.0,
            ei: 1.0,
            shear_k: 5.0,
            payload_mass: 0.01,
            payload_inertia: 0.01,
        }
    }
}

impl TimoshenkoParams {
    pub fn validate(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        check_positive(&mut errors, "rho", self.rho);
        check_positive(&mut errors, "i_rho", self.i_rho);
        check_positive(&mut errors, "ei", self.ei);
        check_positive(&mut errors, "shear_k", self.shear_k);
        check_positive(&mut errors, "payload_mass", self.payload_mass);
        check_positive(&mut errors, "payload_inertia", self.payload_inertia);
        errors
    }

    /// Fastest of the shear and bending wave speeds.
    pub fn max_wave_speed(&self) -> f64 {
        (self.shear_k / self.rho)
            .sqrt()
            .max((self.ei / self.i_rho).sqrt())
    }
}

/// Explicit update of nodes `1..N-1` of both fields at level `j`.
///
/// ```text
/// w(i,j)   = 2w(i,j-1) - w(i,j-2)
///          + k^2 K/(rho h^2) [w(i+1) - 2w(i) + w(i-1)]
///          - k^2 K/(rho h)   [phi(i) - phi(i-1)]
///          + k^2/rho f(x_i, t_{j-1})
/// phi(i,j) = 2phi(i,j-1) - phi(i,j-2)
///          + k^2 EI/(I_rho h^2) [phi(i+1) - 2phi(i) + phi(i-1)]
///          - k^2 K/I_rho phi(i)
///          + k^2 K/(I_rho h) [w(i) - w(i-1)]
/// ```
///
/// Spatial terms are taken at level `j-1`.
pub fn timoshenko_interior_step(
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
    let shear = params.shear_k;
    let w_stiff = k2 * shear / (params.rho * h * h);
    let w_couple = k2 * shear / (params.rho * h);
    let w_load = k2 / params.rho;
    let phi_stiff = k2 * params.ei / (params.i_rho * h * h);
    let phi_restore = k2 * shear / params.i_rho;
    let phi_couple = k2 * shear / (params.i_rho * h);

    let (w1, w2) = (prev.w, older.w);
    let p1 = prev.phi.expect("timoshenko history carries rotation");
    let p2 = older.phi.expect("timoshenko history carries rotation");
    let next_phi = next
        .phi
        .as_deref_mut()
        .expect("timoshenko history carries rotation");
    let n = w1.len() - 1;
    for i in 1..n {
        next.w[i] = 2.0 * w1[i] - w2[i] + w_stiff * (w1[i + 1] - 2.0 * w1[i] + w1[i - 1])
            - w_couple * (p1[i] - p1[i - 1])
            + w_load * disturbances.load(mesh.x(i), t_prev);
        next_phi[i] = 2.0 * p1[i] - p2[i] + phi_stiff * (p1[i + 1] - 2.0 * p1[i] + p1[i - 1])
            - phi_restore * p1[i]
            + phi_couple * (w1[i] - w1[i - 1]);
    }
}
