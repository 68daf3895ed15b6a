//! The time-marching recursion.
//!
//! Levels 0 and 1 hold the initial data. Each later level `j` is built from
//! `j-1` and `j-2` in a fixed order: fixed-end clamp, tip update, interior
//! update, then the divergence monitor. The heat model is two-level and
//! starts at `j = 1`.

use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use web_time::Instant;

use crate::control::tip_update;
use crate::error::{Error, Result};
use crate::mesh::{build_mesh, Mesh};
use crate::models::{
    apply_initial_conditions, eb_beam::eb_beam_interior_step, fixed_end_condition,
    heat::heat_interior_step, string::string_interior_step, timoshenko::timoshenko_interior_step,
    Disturbances, FieldHistory, Level, LevelMut, ModelSpec,
};
use crate::scenario::{Scenario, StorageMode};
use crate::stability::{
    beam_stability, heat_stability, monitor_step, wave_speed_heuristic, DivergenceVerdict,
    StabilityReport,
};

/// Largest full history a run may allocate unless overridden.
pub const DEFAULT_MEMORY_CAP: u64 = 2 << 30;

/// Tip samples, one per completed level.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TipTrajectory {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<f64>>,
}

impl TipTrajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn push(&mut self, t: f64, level: Level<'_>) {
        let n = level.w.len() - 1;
        self.t.push(t);
        self.w.push(level.w[n]);
        if let (Some(phi), Some(out)) = (level.phi, self.phi.as_mut()) {
            out.push(phi[n]);
        }
    }

    pub fn final_w(&self) -> f64 {
        self.w.last().copied().unwrap_or(0.0)
    }

    /// Mean of `|w_tip|` over the last `fraction` of the samples.
    pub fn window_mean_abs(&self, fraction: f64) -> f64 {
        if self.w.is_empty() {
            return f64::NAN;
        }
        let count = ((self.w.len() as f64 * fraction).ceil() as usize).clamp(1, self.w.len());
        let tail = &self.w[self.w.len() - count..];
        tail.iter().map(|v| v.abs()).sum::<f64>() / count as f64
    }

    pub fn peak_abs(&self) -> f64 {
        self.w.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub scenario: Scenario,
    pub mesh: Mesh,
    /// `None` in rolling storage mode.
    pub history: Option<FieldHistory>,
    pub tip: TipTrajectory,
    pub a_priori: StabilityReport,
    pub verdict: DivergenceVerdict,
    pub wall_time: Duration,
    pub steps_completed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub memory_cap: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

/// The a-priori check that applies to the scenario's model: the closed-form
/// heat and beam criteria, or the advisory wave-speed check otherwise.
pub fn a_priori_report(model: &ModelSpec, mesh: &Mesh) -> Result<StabilityReport> {
    let (h, k) = (mesh.h, mesh.k);
    match model {
        ModelSpec::Heat { params, .. } => heat_stability(params.alpha, h, k),
        ModelSpec::EbBeam { params, .. } => {
            beam_stability(params.ei, params.rho, params.tension, h, k)
        }
        ModelSpec::Timoshenko { params, .. } => wave_speed_heuristic(params.max_wave_speed(), h, k),
        ModelSpec::String { params, .. } => {
            wave_speed_heuristic(params.max_wave_speed(mesh.length()), h, k)
        }
    }
}

/// Bytes a full history of this scenario would occupy.
pub fn history_bytes(scenario: &Scenario) -> u64 {
    let fields = if scenario.model.kind().has_rotation() {
        2
    } else {
        1
    };
    let cells = (scenario.mesh.n_space as u64 + 1).saturating_mul(scenario.mesh.n_time as u64 + 1);
    cells.saturating_mul(8 * fields)
}

pub fn run(scenario: &Scenario) -> Result<SimulationResult> {
    run_with_progress(scenario, RunOptions::default(), &mut |_, _| {})
}

/// Runs `scenario`, reporting `(levels_done, levels_total)` about a hundred
/// times over the run.
pub fn run_with_progress(
    scenario: &Scenario,
    options: RunOptions,
    progress: &mut dyn FnMut(usize, usize),
) -> Result<SimulationResult> {
    let errors = scenario.validate();
    if !errors.is_empty() {
        return Err(Error::Invalid(errors));
    }
    let mesh = build_mesh(scenario.mesh)?;
    let a_priori = a_priori_report(&scenario.model, &mesh)?;
    if scenario.storage == StorageMode::Full {
        let requested = history_bytes(scenario);
        if requested > options.memory_cap {
            return Err(Error::MemoryCap {
                requested,
                cap: options.memory_cap,
            });
        }
    }
    let started = Instant::now();
    let stepper = Stepper::new(scenario, &mesh);
    let outcome = match scenario.storage {
        StorageMode::Full => stepper.run_full(progress),
        StorageMode::Rolling => stepper.run_rolling(progress),
    };
    Ok(SimulationResult {
        scenario: scenario.clone(),
        mesh,
        history: outcome.history,
        tip: outcome.tip,
        a_priori,
        verdict: outcome.verdict,
        wall_time: started.elapsed(),
        steps_completed: outcome.steps_completed,
    })
}

/// Builds level `j` from levels `j-1` (`prev`) and `j-2` (`older`):
/// fixed-end clamp, tip update, then interior update. `older` is ignored by
/// the two-level heat scheme.
pub fn advance_level(
    scenario: &Scenario,
    mesh: &Mesh,
    disturbances: &Disturbances,
    j: usize,
    older: Level<'_>,
    prev: Level<'_>,
    next: &mut LevelMut<'_>,
) {
    let model = &scenario.model;
    let t_prev = mesh.t(j - 1);
    fixed_end_condition(model.kind(), next);
    tip_update(
        &scenario.controller,
        model,
        mesh,
        disturbances,
        t_prev,
        older,
        prev,
        next,
    );
    match model {
        ModelSpec::Heat { params, .. } => {
            let r = params.alpha * mesh.k / (mesh.h * mesh.h);
            heat_interior_step(r, prev.w, next.w);
        }
        ModelSpec::EbBeam { params, .. } => {
            eb_beam_interior_step(params, mesh, disturbances, t_prev, older.w, prev.w, next.w)
        }
        ModelSpec::Timoshenko { params, .. } => {
            timoshenko_interior_step(params, mesh, disturbances, t_prev, older, prev, next)
        }
        ModelSpec::String { params, .. } => {
            string_interior_step(params, mesh, disturbances, t_prev, older.w, prev.w, next.w)
        }
    }
}

struct Outcome {
    history: Option<FieldHistory>,
    tip: TipTrajectory,
    verdict: DivergenceVerdict,
    steps_completed: usize,
}

struct Stepper<'a> {
    scenario: &'a Scenario,
    mesh: &'a Mesh,
    disturbances: Disturbances,
    two_level: bool,
}

impl<'a> Stepper<'a> {
    fn new(scenario: &'a Scenario, mesh: &'a Mesh) -> Self {
        Self {
            scenario,
            mesh,
            disturbances: Disturbances::resolve(&scenario.disturbances, mesh.length()),
            two_level: matches!(scenario.model, ModelSpec::Heat { .. }),
        }
    }

    /// First level produced by the recursion.
    fn first_step(&self) -> usize {
        if self.two_level {
            1
        } else {
            2
        }
    }

    fn step(&self, j: usize, older: Level<'_>, prev: Level<'_>, next: &mut LevelMut<'_>) {
        advance_level(
            self.scenario,
            self.mesh,
            &self.disturbances,
            j,
            older,
            prev,
            next,
        );
    }

    fn monitor(&self, level: Level<'_>, j: usize, verdict: DivergenceVerdict) -> DivergenceVerdict {
        let threshold = self.scenario.divergence_threshold;
        let verdict = monitor_step(level.w, threshold, j, verdict);
        match level.phi {
            Some(phi) => monitor_step(phi, threshold, j, verdict),
            None => verdict,
        }
    }

    fn empty_tip(&self) -> TipTrajectory {
        TipTrajectory {
            phi: self.scenario.model.kind().has_rotation().then(Vec::new),
            ..TipTrajectory::default()
        }
    }

    fn run_full(&self, progress: &mut dyn FnMut(usize, usize)) -> Outcome {
        let n_time = self.mesh.n_time();
        let mut history = FieldHistory::for_mesh(self.mesh, self.scenario.model.kind());
        apply_initial_conditions(&self.scenario.model, self.mesh, &mut history);
        let first = self.first_step();
        let mut verdict = DivergenceVerdict::clean();
        let mut tip = self.empty_tip();
        for j in 0..first {
            verdict = self.monitor(history.level(j), j, verdict);
            tip.push(self.mesh.t(j), history.level(j));
        }
        let report_every = (n_time / 100).max(1);
        let mut last = n_time;
        if !verdict.diverged {
            for j in first..=n_time {
                if first == 1 {
                    let (prev, mut next) = history.step_pair(j);
                    self.step(j, prev, prev, &mut next);
                } else {
                    let (older, prev, mut next) = history.step_levels(j);
                    self.step(j, older, prev, &mut next);
                }
                let level = history.level(j);
                verdict = self.monitor(level, j, verdict);
                tip.push(self.mesh.t(j), level);
                if verdict.diverged {
                    break;
                }
                if j % report_every == 0 {
                    progress(j, n_time);
                }
            }
        }
        if let Some(bad) = verdict.first_bad_step {
            last = bad;
            history.truncate(bad);
        }
        progress(last, n_time);
        Outcome {
            history: Some(history),
            tip,
            verdict,
            steps_completed: last,
        }
    }

    fn run_rolling(&self, progress: &mut dyn FnMut(usize, usize)) -> Outcome {
        let n_time = self.mesh.n_time();
        let mut ring = FieldHistory::zeros(
            self.mesh.n_nodes(),
            3,
            self.scenario.model.kind().has_rotation(),
        );
        apply_initial_conditions(&self.scenario.model, self.mesh, &mut ring);
        let first = self.first_step();
        let mut verdict = DivergenceVerdict::clean();
        let mut tip = self.empty_tip();
        for j in 0..first {
            verdict = self.monitor(ring.level(j), j, verdict);
            tip.push(self.mesh.t(j), ring.level(j));
        }
        // ring slot 1 always holds level j-1 when level j is built
        if first == 1 {
            ring.shift_back();
        }
        let report_every = (n_time / 100).max(1);
        if !verdict.diverged {
            for j in first..=n_time {
                {
                    let (older, prev, mut next) = ring.step_levels(2);
                    self.step(j, older, prev, &mut next);
                }
                verdict = self.monitor(ring.level(2), j, verdict);
                tip.push(self.mesh.t(j), ring.level(2));
                if verdict.diverged {
                    break;
                }
                ring.shift_back();
                if j % report_every == 0 {
                    progress(j, n_time);
                }
            }
        }
        let last = verdict.first_bad_step.unwrap_or(n_time);
        progress(last, n_time);
        Outcome {
            history: None,
            tip,
            verdict,
            steps_completed: last,
        }
    }
}

/// One entry of a gain sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub value: f64,
    pub verdict: DivergenceVerdict,
    pub steps_completed: usize,
    /// `|w_tip|` at the last completed level.
    pub final_tip_magnitude: f64,
    /// Mean `|w_tip|` over the last 10% of completed levels.
    pub tail_mean_abs: f64,
}

/// Runs `base` once per value of the named controller gain, in parallel on
/// at most `jobs` threads (all cores when `None`). Results follow the input
/// order. Runs use rolling storage.
pub fn gain_sweep(
    base: &Scenario,
    gain_name: &str,
    values: &[f64],
    jobs: Option<usize>,
) -> Result<Vec<SweepEntry>> {
    base.controller.gain(gain_name)?;
    let mut scenarios = Vec::with_capacity(values.len());
    for &value in values {
        let mut s = base.clone();
        s.controller.set_gain(gain_name, value)?;
        s.storage = StorageMode::Rolling;
        scenarios.push((value, s));
    }
    let work = || -> Result<Vec<SweepEntry>> {
        scenarios
            .par_iter()
            .map(|(value, s)| {
                let r = run(s)?;
                Ok(SweepEntry {
                    value: *value,
                    verdict: r.verdict,
                    steps_completed: r.steps_completed,
                    final_tip_magnitude: r.tip.final_w().abs(),
                    tail_mean_abs: r.tip.window_mean_abs(0.1),
                })
            })
            .collect()
    };
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Bundle(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}
