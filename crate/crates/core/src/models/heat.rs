use serde::{Deserialize, Serialize};

use super::check_positive;
use crate::error::FieldError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatParams {
    /// Diffusivity.
    pub alpha: f64,
}

impl Default for HeatParams {
    fn default() -> Self {
        Self { alpha: 1.0 }
    }
}

impl HeatParams {
    pub fn validate(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        check_positive(&mut errors, "alpha", self.alpha);
        errors
    }
}

/// Forward-time, centred-space update of nodes `1..N-1`:
/// `u(i,j+1) = r u(i+1,j) + (1-2r) u(i,j) + r u(i-1,j)`.
/// The end nodes of `next` are left untouched.
pub fn heat_interior_step(r: f64, current: &[f64], next: &mut [f64]) {
    let n = current.len();
    debug_assert_eq!(next.len(), n);
    let centre = 1.0 - 2.0 * r;
    for i in 1..n - 1 {
        next[i] = r * current[i + 1] + centre * current[i] + r * current[i - 1];
    }
}
