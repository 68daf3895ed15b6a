//! Finite-difference operators on uniformly spaced samples.
//!
//! Every stencil is a fixed set of integer weights applied to consecutive
//! samples (ordered by increasing coordinate) and divided by a constant times
//! a power of the step.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StencilKind {
    /// Forward time difference over `[w(j), w(j+1)]`.
    FirstTime,
    /// Central time difference over `[w(j-1), w(j), w(j+1)]`.
    SecondTime,
    /// Two-point space difference over `[w(i-1), w(i)]` (backward at `i`,
    /// forward at `i-1`).
    FirstSpace,
    /// Central space difference over `[w(i-1), w(i), w(i+1)]`.
    SecondSpace,
    /// Central five-point third derivative over `w(i-2)..=w(i+2)`.
    ThirdSpace,
    /// Central five-point fourth derivative over `w(i-2)..=w(i+2)`.
    FourthSpace,
}

impl StencilKind {
    pub const ALL: [StencilKind; 6] = [
        StencilKind::FirstTime,
        StencilKind::SecondTime,
        StencilKind::FirstSpace,
        StencilKind::SecondSpace,
        StencilKind::ThirdSpace,
        StencilKind::FourthSpace,
    ];

    pub fn coefficients(self) -> &'static [f64] {
        match self {
            StencilKind::FirstTime | StencilKind::FirstSpace => &[-1.0, 1.0],
            StencilKind::SecondTime | StencilKind::SecondSpace => &[1.0, -2.0, 1.0],
            StencilKind::ThirdSpace => &[-1.0, 2.0, 0.0, -2.0, 1.0],
            StencilKind::FourthSpace => &[1.0, -4.0, 6.0, -4.0, 1.0],
        }
    }

    pub fn width(self) -> usize {
        self.coefficients().len()
    }

    /// Power of the step in the divisor.
    pub fn step_power(self) -> i32 {
        match self {
            StencilKind::FirstTime | StencilKind::FirstSpace => 1,
            StencilKind::SecondTime | StencilKind::SecondSpace => 2,
            StencilKind::ThirdSpace => 3,
            StencilKind::FourthSpace => 4,
        }
    }

    /// Constant factor in the divisor besides `step^p`.
    pub fn divisor_scale(self) -> f64 {
        match self {
            StencilKind::ThirdSpace => 2.0,
            _ => 1.0,
        }
    }

    /// Order of accuracy of the truncation error.
    pub fn accuracy_order(self) -> u32 {
        match self {
            StencilKind::FirstTime | StencilKind::FirstSpace => 1,
            _ => 2,
        }
    }

    /// Sample offsets (in steps) relative to the evaluation point.
    pub fn offsets(self) -> &'static [f64] {
        match self {
            StencilKind::FirstTime => &[0.0, 1.0],
            StencilKind::FirstSpace => &[-1.0, 0.0],
            StencilKind::SecondTime | StencilKind::SecondSpace => &[-1.0, 0.0, 1.0],
            StencilKind::ThirdSpace | StencilKind::FourthSpace => &[-2.0, -1.0, 0.0, 1.0, 2.0],
        }
    }

    fn name(self) -> &'static str {
        match self {
            StencilKind::FirstTime => "first_time",
            StencilKind::SecondTime => "second_time",
            StencilKind::FirstSpace => "first_space",
            StencilKind::SecondSpace => "second_space",
            StencilKind::ThirdSpace => "third_space",
            StencilKind::FourthSpace => "fourth_space",
        }
    }
}

impl fmt::Display for StencilKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn apply_stencil(kind: StencilKind, values: &[f64], step: f64) -> Result<f64> {
    let coefficients = kind.coefficients();
    if values.len() != coefficients.len() {
        return Err(Error::StencilWidth {
            kind: kind.name(),
            expected: coefficients.len(),
            got: values.len(),
        });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::NonPositiveStep(step));
    }
    let sum: f64 = coefficients.iter().zip(values).map(|(c, v)| c * v).sum();
    Ok(sum / (kind.divisor_scale() * step.powi(kind.step_power())))
}

fn sample<F: Fn(f64) -> f64>(kind: StencilKind, f: &F, point: f64, step: f64) -> f64 {
    let values: Vec<f64> = kind.offsets().iter().map(|o| f(point + o * step)).collect();
    apply_stencil(kind, &values, step).expect("width and step are valid by construction")
}

/// Base step for the Richardson estimate; halved twice.
const RICHARDSON_STEP: f64 = 0.1;

/// Estimates the observed convergence order of `kind` on `f` near `point`
/// from three successively halved steps:
/// `log2(|D(s) - D(s/2)| / |D(s/2) - D(s/4)|)`.
///
/// Returns `NaN` when the stencil is exact on `f` (the differences vanish to
/// round-off), since no order can be observed.
pub fn empirical_order<F: Fn(f64) -> f64>(kind: StencilKind, f: F, point: f64) -> f64 {
    let coarse = sample(kind, &f, point, RICHARDSON_STEP);
    let mid = sample(kind, &f, point, RICHARDSON_STEP / 2.0);
    let fine = sample(kind, &f, point, RICHARDSON_STEP / 4.0);
    let d1 = (coarse - mid).abs();
    let d2 = (mid - fine).abs();
    let floor = 1e-9 * coarse.abs().max(1.0);
    if d1 <= floor || d2 <= floor {
        return f64::NAN;
    }
    (d1 / d2).log2()
}
