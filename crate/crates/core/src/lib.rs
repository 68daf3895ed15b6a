//! Explicit finite-difference simulation of flexible beams and strings
//! with boundary control.
//!
//! A [`Scenario`] names a model, a mesh, a controller and disturbances;
//! [`run`] marches it in time and returns the field history, the tip
//! trajectory, an a-priori stability report and a runtime divergence verdict.

pub mod catalog;
pub mod control;
pub mod engine;
pub mod error;
pub mod io;
pub mod mesh;
pub mod models;
pub mod scenario;
pub mod stability;
pub mod stencils;

pub use catalog::{default_scenario, list_models, Catalog};
pub use control::{ControllerKind, ControllerSpec, EmGains, PdGains};
pub use engine::{
    advance_level, gain_sweep, run, run_with_progress, RunOptions, SimulationResult, SweepEntry,
    TipTrajectory,
};
pub use error::{Error, FieldError, Result};
pub use io::{
    export_result, import_bundle, load_scenario, load_scenario_with_overrides, ExportFormats,
};
pub use mesh::{build_mesh, Mesh, MeshConfig};
pub use models::{FieldHistory, ModelKind, ModelSpec};
pub use scenario::{Override, Scenario, StorageMode, SCHEMA_VERSION};
pub use stability::{DivergenceReason, DivergenceVerdict, StabilityReport};
pub use stencils::{apply_stencil, empirical_order, StencilKind};
