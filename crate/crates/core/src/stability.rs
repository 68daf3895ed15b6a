//! A-priori stability predicates for the explicit schemes and the runtime
//! divergence monitor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};

/// Default magnitude above which a run is declared diverged.
pub const DEFAULT_DIVERGENCE_THRESHOLD: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `r = alpha k / h^2 < 1/2` for the forward-time heat scheme.
    HeatScheme,
    /// `4 k^2 EI / (rho h^4) + k^2 T / (rho h^2) <= 1` for the beam scheme.
    BeamScheme,
    /// Advisory `k * c_max <= h` wave-speed check. Not a proven bound.
    WaveSpeedHeuristic,
}

impl Criterion {
    pub fn is_heuristic(self) -> bool {
        matches!(self, Criterion::WaveSpeedHeuristic)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub criterion: Criterion,
    pub criterion_name: String,
    pub lhs_value: f64,
    pub threshold: f64,
    pub predicted_stable: bool,
    /// `threshold - lhs_value`.
    pub margin: f64,
}

impl StabilityReport {
    fn new(criterion: Criterion, name: &str, lhs: f64, threshold: f64, stable: bool) -> Self {
        Self {
            criterion,
            criterion_name: name.to_string(),
            lhs_value: lhs,
            threshold,
            predicted_stable: stable,
            margin: threshold - lhs,
        }
    }
}

fn require_positive(errors: &mut Vec<FieldError>, name: &str, value: f64) {
    if !(value > 0.0 && value.is_finite()) {
        errors.push(FieldError::new(
            name,
            format!("must be positive, got {value}"),
        ));
    }
}

fn require_non_negative(errors: &mut Vec<FieldError>, name: &str, value: f64) {
    if !(value >= 0.0 && value.is_finite()) {
        errors.push(FieldError::new(
            name,
            format!("must be non-negative, got {value}"),
        ));
    }
}

/// Relative band within which a computed left-hand side counts as equal to
/// its threshold. Decimal inputs such as `h = 0.1` are not exact in binary,
/// so `1 * 0.005 / 0.1^2` evaluates to `0.4999999999999999`.
const TIE_TOLERANCE: f64 = 4.0 * f64::EPSILON;

fn ties(lhs: f64, threshold: f64) -> bool {
    (lhs - threshold).abs() <= TIE_TOLERANCE * threshold.abs()
}

fn finish(
    errors: Vec<FieldError>,
    report: impl FnOnce() -> StabilityReport,
) -> Result<StabilityReport> {
    if errors.is_empty() {
        Ok(report())
    } else {
        Err(Error::Invalid(errors))
    }
}

/// Stability of the forward-time, centred-space heat scheme. The inequality
/// is strict: `r = 1/2` is reported unstable.
pub fn heat_stability(alpha: f64, h: f64, k: f64) -> Result<StabilityReport> {
    let mut errors = Vec::new();
    require_positive(&mut errors, "alpha", alpha);
    require_positive(&mut errors, "h", h);
    require_positive(&mut errors, "k", k);
    finish(errors, || {
        let r = alpha * k / (h * h);
        StabilityReport::new(
            Criterion::HeatScheme,
            "heat scheme (r < 1/2)",
            r,
            0.5,
            r < 0.5 && !ties(r, 0.5),
        )
    })
}

/// Stability of the explicit tensioned beam scheme. The bound is inclusive.
pub fn beam_stability(ei: f64, rho: f64, tension: f64, h: f64, k: f64) -> Result<StabilityReport> {
    let mut errors = Vec::new();
    require_non_negative(&mut errors, "ei", ei);
    require_positive(&mut errors, "rho", rho);
    require_non_negative(&mut errors, "tension", tension);
    require_positive(&mut errors, "h", h);
    require_positive(&mut errors, "k", k);
    finish(errors, || {
        let k2 = k * k;
        let lhs = 4.0 * k2 * ei / (rho * h.powi(4)) + k2 * tension / (rho * h * h);
        StabilityReport::new(
            Criterion::BeamScheme,
            "beam scheme (4k^2 EI/rho h^4 + k^2 T/rho h^2 <= 1)",
            lhs,
            1.0,
            lhs <= 1.0 || ties(lhs, 1.0),
        )
    })
}

/// Courant-style check `k * max_speed <= h`, reported as the ratio
/// `k * max_speed / h` against 1.
pub fn wave_speed_heuristic(max_speed: f64, h: f64, k: f64) -> Result<StabilityReport> {
    let mut errors = Vec::new();
    require_non_negative(&mut errors, "max_speed", max_speed);
    require_positive(&mut errors, "h", h);
    require_positive(&mut errors, "k", k);
    finish(errors, || {
        let courant = k * max_speed / h;
        StabilityReport::new(
            Criterion::WaveSpeedHeuristic,
            "wave-speed heuristic (advisory)",
            courant,
            1.0,
            courant <= 1.0 || ties(courant, 1.0),
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceReason {
    None,
    ThresholdExceeded,
    NonFiniteValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceVerdict {
    pub diverged: bool,
    pub first_bad_step: Option<usize>,
    pub peak_magnitude: f64,
    pub reason: DivergenceReason,
}

impl Default for DivergenceVerdict {
    fn default() -> Self {
        Self::clean()
    }
}

impl DivergenceVerdict {
    pub fn clean() -> Self {
        Self {
            diverged: false,
            first_bad_step: None,
            peak_magnitude: 0.0,
            reason: DivergenceReason::None,
        }
    }
}

/// Folds one time level into the verdict. Once diverged the verdict is
/// returned unchanged.
pub fn monitor_step(
    field: &[f64],
    threshold: f64,
    step_index: usize,
    verdict: DivergenceVerdict,
) -> DivergenceVerdict {
    if verdict.diverged {
        return verdict;
    }
    let mut peak = verdict.peak_magnitude;
    let mut non_finite = false;
    for v in field {
        if !v.is_finite() {
            non_finite = true;
            continue;
        }
        peak = peak.max(v.abs());
    }
    let reason = if non_finite {
        DivergenceReason::NonFiniteValue
    } else if peak > threshold {
        DivergenceReason::ThresholdExceeded
    } else {
        DivergenceReason::None
    };
    let diverged = reason != DivergenceReason::None;
    DivergenceVerdict {
        diverged,
        first_bad_step: diverged.then_some(step_index),
        peak_magnitude: peak,
        reason,
    }
}
