//! Tensioned, damped Euler-Bernoulli beam:
//! `rho w_tt = -EI w_xxxx + T w_xx - c w_t + f`, held at zero at both ends.

use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_positive, Disturbances};
use crate::error::FieldError;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EbBeamParams {
    /// Mass per unit length.
    pub rho: f64,
    /// Bending stiffness.
    pub ei: f64,
    /// Axial tension.
    pub tension: f64,
    /// Viscous damping coefficient.
    pub damping: f64,
}

impl Default for EbBeamParams {
    fn default() -> Self {
        Self {
            rho: 1.0,
            ei: 1.0,
            tension: 10.0,
            damping: 0.5,
        }
    }
}

impl EbBeamParams {
    pub fn validate(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        check_positive(&mut errors, "rho", self.rho);
        check_non_negative(&mut errors, "ei", self.ei);
        check_non_negative(&mut errors, "tension", self.tension);
        check_non_negative(&mut errors, "damping", self.damping);
        errors
    }
}

/// Value of `w` at index `i` (which may be one node outside the grid).
/// Left of node 0 the profile is odd about the fixed end (`w(-1) = -w(1)`);
/// right of node N it is continued linearly, which zeroes the bending moment
/// there (`w(N+1) = 2 w(N) - w(N-1)`).
#[inline]
fn ghosted(w: &[f64], i: isize) -> f64 {
    let n = w.len() as isize - 1;
    if i < 0 {
        -w[(-i) as usize]
    } else if i > n {
        let over = (i - n) as usize;
        let n = n as usize;
        w[n] + over as f64 * (w[n] - w[n - 1])
    } else {
        w[i as usize]
    }
}

/// Explicit update of nodes `1..N-1` at level `j` from levels `j-1`
/// (`prev`) and `j-2` (`older`); `t_prev` is the time of level `j-1`.
///
/// `w(i,j) = 2w(i,j-1) - w(i,j-2)
///         + k^2 T/(rho h^2) [w(i+1) - 2w(i) + w(i-1)]
///         - k^2 EI/(rho h^4) [w(i+2) - 4w(i+1) + 6w(i) - 4w(i-1) + w(i-2)]
///         - k c/rho [w(i,j-1) - w(i,j-2)]
///         + k^2/rho f(x_i, t_{j-1})`
pub fn eb_beam_interior_step(
    params: &EbBeamParams,
    mesh: &Mesh,
    disturbances: &Disturbances,
    t_prev: f64,
    older: &[f64],
    prev: &[f64],
    next: &mut [f64],
) {
    let (h, k) = (mesh.h, mesh.k);
    let k2 = k * k;
    let tension_coeff = k2 * params.tension / (params.rho * h * h);
    let bending_coeff = k2 * params.ei / (params.rho * h.powi(4));
    let damping_coeff = k * params.damping / params.rho;
    let load_coeff = k2 / params.rho;
    let n = prev.len() - 1;
    for i in 1..n {
        let ii = i as isize;
        let second = prev[i + 1] - 2.0 * prev[i] + prev[i - 1];
        let fourth = ghosted(prev, ii + 2) - 4.0 * prev[i + 1] + 6.0 * prev[i] - 4.0 * prev[i - 1]
            + ghosted(prev, ii - 2);
        next[i] = 2.0 * prev[i] - older[i] + tension_coeff * second
            - bending_coeff * fourth
            - damping_coeff * (prev[i] - older[i])
            + load_coeff * disturbances.load(mesh.x(i), t_prev);
    }
}
