//! Non-uniform string with gradient-stiffened tension and a tip payload:
//!
//! ```text
//! rho(x) w_tt = T w_xx + T0'(x) w_x + lambda'(x) w_x^3 + 3 lambda(x) w_x^2 w_xx + f
//! T(x, t)     = T0(x) + lambda(x) w_x^2
//! ```

use serde::{Deserialize, Serialize};

use super::{check_positive, Disturbances};
use crate::error::FieldError;
use crate::mesh::Mesh;

/// `intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearProfile {
    pub intercept: f64,
    pub slope: f64,
}

impl LinearProfile {
    pub const fn new(intercept: f64, slope: f64) -> Self {
        Self { intercept, slope }
    }

    #[inline]
    pub fn at(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    /// Spatial derivative (constant).
    #[inline]
    pub fn derivative(&self) -> f64 {
        self.slope
    }

    fn min_on(&self, length: f64) -> f64 {
        self.at(0.0).min(self.at(length))
    }

    fn is_finite(&self) -> bool {
        self.intercept.is_finite() && self.slope.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringParams {
    /// Tip payload mass.
    pub payload_mass: f64,
    /// Base tension `T0(x)`; defaults to `10 (x + 1)`.
    pub base_tension: LinearProfile,
    /// Gradient stiffening `lambda(x)`; defaults to `0.1 x`.
    pub lambda: LinearProfile,
    /// Mass per unit length `rho(x)`; defaults to the constant 1.
    pub density: LinearProfile,
}

impl Default for StringParams {
    fn default() -> Self {
        Self {
            payload_mass: 1.0,
            base_tension: LinearProfile::new(10.0, 10.0),
            lambda: LinearProfile::new(0.0, 0.1),
            density: LinearProfile::new(1.0, 0.0),
        }
    }
}

impl StringParams {
    pub fn validate(&self, length: f64) -> Vec<FieldError> {
        let mut errors = Vec::new();
        check_positive(&mut errors, "payload_mass", self.payload_mass);
        let profiles = [
            ("base_tension", &self.base_tension, true),
            ("lambda", &self.lambda, false),
            ("density", &self.density, true),
        ];
        for (name, profile, strict) in profiles {
            if !profile.is_finite() {
                errors.push(FieldError::new(name, "coefficients must be finite"));
                continue;
            }
            if !length.is_finite() || length <= 0.0 {
                continue;
            }
            let min = profile.min_on(length);
            if strict && min <= 0.0 {
                errors.push(FieldError::new(
                    name,
                    format!("must be positive on [0, L], minimum is {min}"),
                ));
            } else if !strict && min < 0.0 {
                errors.push(FieldError::new(
                    name,
                    format!("must be non-negative on [0, L], minimum is {min}"),
                ));
            }
        }
        errors
    }

    /// Largest `sqrt(T0 / rho)` sampled at the ends and the midpoint.
    pub fn max_wave_speed(&self, length: f64) -> f64 {
        [0.0, 0.5 * length, length]
            .iter()
            .map(|&x| (self.base_tension.at(x) / self.density.at(x)).sqrt())
            .fold(0.0, f64::max)
    }
}

/// `T(x) = T0(x) + lambda(x) wx^2`.
pub fn string_tension(params: &StringParams, x: f64, wx: f64) -> f64 {
    params.base_tension.at(x) + params.lambda.at(x) * wx * wx
}

/// Explicit update of nodes `1..N-1` at level `j`, with all spatial terms
/// from level `j-1` and the tension evaluated with the level `j-1` backward
/// gradient.
pub fn string_interior_step(
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
    let tension_slope = params.base_tension.derivative();
    let lambda_slope = params.lambda.derivative();
    let n = prev.len() - 1;
    for i in 1..n {
        let x = mesh.x(i);
        let rho = params.density.at(x);
        let lambda = params.lambda.at(x);
        let d1 = prev[i] - prev[i - 1];
        let d2 = prev[i + 1] - 2.0 * prev[i] + prev[i - 1];
        let tension = string_tension(params, x, d1 / h);
        next[i] = 2.0 * prev[i] - older[i]
            + k2 * tension / (rho * h * h) * d2
            + k2 * tension_slope / (rho * h) * d1
            + k2 * lambda_slope / (rho * h.powi(3)) * d1 * d1 * d1
            + 3.0 * k2 * lambda / (rho * h.powi(4)) * d1 * d1 * d2
            + k2 / rho * disturbances.load(x, t_prev);
    }
}
