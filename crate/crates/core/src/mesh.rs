//! Uniform space/time discretization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};

/// Smallest spatial interval count; the five-point fourth difference reads
/// nodes `i-2..=i+2`.
pub const MIN_SPACE_INTERVALS: usize = 4;
/// Smallest time step count; the three-level recursion needs two history levels.
pub const MIN_TIME_STEPS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    /// Number of spatial intervals (nodes are `0..=n_space`).
    pub n_space: usize,
    /// Number of time steps (levels are `0..=n_time`).
    pub n_time: usize,
    /// Physical length of the structure.
    pub length: f64,
    /// Simulated time span.
    pub final_time: f64,
}

impl MeshConfig {
    pub fn new(n_space: usize, n_time: usize, length: f64, final_time: f64) -> Self {
        Self {
            n_space,
            n_time,
            length,
            final_time,
        }
    }

    pub fn validate(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        if self.n_space < MIN_SPACE_INTERVALS {
            errors.push(FieldError::new(
                "n_space",
                format!(
                    "must be at least {MIN_SPACE_INTERVALS}, got {}",
                    self.n_space
                ),
            ));
        }
        if self.n_time < MIN_TIME_STEPS {
            errors.push(FieldError::new(
                "n_time",
                format!("must be at least {MIN_TIME_STEPS}, got {}", self.n_time),
            ));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            errors.push(FieldError::new(
                "length",
                format!("must be positive and finite, got {}", self.length),
            ));
        }
        if !(self.final_time > 0.0 && self.final_time.is_finite()) {
            errors.push(FieldError::new(
                "final_time",
                format!("must be positive and finite, got {}", self.final_time),
            ));
        }
        errors
    }
}

/// A validated mesh with its derived spacings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mesh {
    pub config: MeshConfig,
    /// Spatial step `length / n_space`.
    pub h: f64,
    /// Time step `final_time / n_time`.
    pub k: f64,
}

pub fn build_mesh(config: MeshConfig) -> Result<Mesh> {
    let errors = config.validate();
    if !errors.is_empty() {
        return Err(Error::Invalid(errors));
    }
    Ok(Mesh {
        config,
        h: config.length / config.n_space as f64,
        k: config.final_time / config.n_time as f64,
    })
}

impl Mesh {
    pub fn n_space(&self) -> usize {
        self.config.n_space
    }

    pub fn n_time(&self) -> usize {
        self.config.n_time
    }

    pub fn n_nodes(&self) -> usize {
        self.config.n_space + 1
    }

    pub fn n_levels(&self) -> usize {
        self.config.n_time + 1
    }

    pub fn length(&self) -> f64 {
        self.config.length
    }

    /// Physical coordinate of node `i`.
    pub fn node_position(&self, i: usize) -> Result<f64> {
        if i > self.config.n_space {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.config.n_space,
            });
        }
        Ok(self.x(i))
    }

    /// Physical time of level `j`.
    pub fn level_time(&self, j: usize) -> Result<f64> {
        if j > self.config.n_time {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.config.n_time,
            });
        }
        Ok(self.t(j))
    }

    #[inline]
    pub(crate) fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    #[inline]
    pub(crate) fn t(&self, j: usize) -> f64 {
        j as f64 * self.k
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..=self.config.n_space).map(|i| self.x(i)).collect()
    }
}
