#![allow(dead_code)]
//! Random small-grid trials comparing production level updates with the
//! naive transcriptions in `oracle.rs`. Each returns the worst error relative
//! to the magnitude of the inputs and outputs.

use super::oracle::{self, Grid};
use flexsim::control::{ControllerSpec, EmGains, PdGains};
use flexsim::engine::advance_level;
use flexsim::mesh::{build_mesh, Mesh, MeshConfig};
use flexsim::models::{
    DisturbanceKind, DisturbanceSpec, Disturbances, EbBeamParams, FieldHistory, HeatParams,
    InitialConditions, LinearProfile, ModelSpec, StringParams, TimoshenkoParams,
};
use flexsim::scenario::Scenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    mesh: Mesh,
    j: usize,
    history: FieldHistory,
}

fn random_case(rng: &mut ChaCha8Rng, rotation: bool, length: f64) -> Case {
    let n = rng.gen_range(4..=8);
    let j = rng.gen_range(2..40);
    let n_time = j + rng.gen_range(0..5);
    let final_time = rng.gen_range(0.001..0.05) * n_time as f64;
    let mesh = build_mesh(MeshConfig::new(n, n_time, length, final_time)).unwrap();
    let mut history = FieldHistory::zeros(n + 1, j + 1, rotation);
    for level in [j - 2, j - 1] {
        let l = history.level_mut(level);
        for v in l.w.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        if let Some(phi) = l.phi {
            for v in phi.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
        }
    }
    Case { mesh, j, history }
}

pub fn grid(mesh: &Mesh) -> Grid {
    Grid {
        h: mesh.h,
        k: mesh.k,
        length: mesh.length(),
    }
}

fn step(case: &mut Case, scenario: &Scenario) {
    let disturbances = Disturbances::resolve(&scenario.disturbances, case.mesh.length());
    let (older, prev, mut next) = case.history.step_levels(case.j);
    advance_level(
        scenario,
        &case.mesh,
        &disturbances,
        case.j,
        older,
        prev,
        &mut next,
    );
}

/// Largest `|got - want|` scaled by the largest magnitude involved (at least 1).
pub fn scaled_error(got: &[f64], want: &[f64], inputs: &[&[f64]]) -> f64 {
    assert_eq!(got.len(), want.len());
    let scale = inputs
        .iter()
        .flat_map(|s| s.iter())
        .chain(want)
        .fold(1.0f64, |m, v| m.max(v.abs()));
    got.iter()
        .zip(want)
        .fold(0.0, |m, (g, w)| m.max((g - w).abs() / scale))
}

fn levels(case: &Case) -> (Vec<f64>, Vec<f64>, Option<(Vec<f64>, Vec<f64>)>) {
    let j = case.j;
    let h = &case.history;
    (
        h.w_level(j - 2).to_vec(),
        h.w_level(j - 1).to_vec(),
        h.phi_level(j - 2)
            .map(|p2| (p2.to_vec(), h.phi_level(j - 1).unwrap().to_vec())),
    )
}

pub fn heat(seed: u64, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let length = rng.gen_range(0.5..2.0);
        let mut case = random_case(&mut rng, false, length);
        let alpha = rng.gen_range(0.1..2.0);
        let model = ModelSpec::Heat {
            params: HeatParams { alpha },
            initial: InitialConditions::default(),
        };
        let scenario = Scenario::new("heat", model, case.mesh.config);
        let (_, w1, _) = levels(&case);
        step(&mut case, &scenario);
        let want = oracle::heat(alpha, &grid(&case.mesh), &w1);
        worst = worst.max(scaled_error(case.history.w_level(case.j), &want, &[&w1]));
    }
    worst
}

pub fn eb_beam(seed: u64, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let length = rng.gen_range(0.5..2.0);
        let mut case = random_case(&mut rng, false, length);
        let p = EbBeamParams {
            rho: rng.gen_range(0.5..2.0),
            ei: rng.gen_range(0.0..2.0),
            tension: rng.gen_range(0.0..20.0),
            damping: rng.gen_range(0.0..1.0),
        };
        let with_load = trial % 2 == 0;
        let mut scenario = Scenario::new(
            "eb",
            ModelSpec::EbBeam {
                params: p,
                initial: InitialConditions::default(),
            },
            case.mesh.config,
        );
        if with_load {
            scenario
                .disturbances
                .push(DisturbanceSpec::new(DisturbanceKind::TimoshenkoDistributed));
        }
        let (w2, w1, _) = levels(&case);
        step(&mut case, &scenario);
        let g = grid(&case.mesh);
        let load = |x: f64, t: f64| oracle::timoshenko_load(x, t, length);
        let beam = oracle::Beam {
            rho: p.rho,
            ei: p.ei,
            tension: p.tension,
            damping: p.damping,
        };
        let t = (case.j - 1) as f64 * g.k;
        let want = oracle::eb_beam(
            &beam,
            &g,
            &w2,
            &w1,
            with_load.then_some(&load as &dyn Fn(f64, f64) -> f64),
            t,
        );
        worst = worst.max(scaled_error(
            case.history.w_level(case.j),
            &want,
            &[&w1, &w2],
        ));
    }
    worst
}

pub fn timoshenko(seed: u64, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let length = rng.gen_range(0.5..3.0);
        let mut case = random_case(&mut rng, true, length);
        let p = TimoshenkoParams {
            rho: rng.gen_range(0.5..2.0),
            i_rho: rng.gen_range(0.5..2.0),
            ei: rng.gen_range(0.5..2.0),
            shear_k: rng.gen_range(1.0..10.0),
            payload_mass: rng.gen_range(0.01..2.0),
            payload_inertia: rng.gen_range(0.01..2.0),
        };
        let gains = if trial % 3 == 0 {
            [0.0; 4]
        } else {
            [
                rng.gen_range(0.0..200.0),
                rng.gen_range(0.0..40.0),
                rng.gen_range(0.0..200.0),
                rng.gen_range(0.0..40.0),
            ]
        };
        let mut scenario = Scenario::new(
            "timo",
            ModelSpec::Timoshenko {
                params: p,
                initial: InitialConditions::default(),
            },
            case.mesh.config,
        );
        if trial % 3 != 0 {
            scenario.controller = ControllerSpec::pd(PdGains {
                k1: gains[0],
                k2: gains[1],
                k3: gains[2],
                k4: gains[3],
            });
        }
        let tip = trial % 2 == 0;
        let load = trial % 4 < 2;
        if tip {
            scenario
                .disturbances
                .push(DisturbanceSpec::new(DisturbanceKind::TimoshenkoTip));
        }
        if load {
            scenario
                .disturbances
                .push(DisturbanceSpec::new(DisturbanceKind::TimoshenkoDistributed));
        }
        let (w2, w1, phis) = levels(&case);
        let (p2, p1) = phis.unwrap();
        step(&mut case, &scenario);
        let g = grid(&case.mesh);
        let t = (case.j - 1) as f64 * g.k;
        let model = oracle::Timo {
            rho: p.rho,
            i_rho: p.i_rho,
            ei: p.ei,
            shear_k: p.shear_k,
            mass: p.payload_mass,
            inertia: p.payload_inertia,
        };
        let (w, phi) = oracle::timoshenko(&model, &g, &w2, &p2, &w1, &p1, tip, load, gains, t);
        let inputs: [&[f64]; 4] = [&w1, &w2, &p1, &p2];
        worst = worst.max(scaled_error(case.history.w_level(case.j), &w, &inputs));
        worst = worst.max(scaled_error(
            case.history.phi_level(case.j).unwrap(),
            &phi,
            &inputs,
        ));
    }
    worst
}

pub fn string(seed: u64, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let length = rng.gen_range(0.5..2.0);
        let mut case = random_case(&mut rng, false, length);
        let p = StringParams {
            payload_mass: rng.gen_range(0.1..2.0),
            base_tension: LinearProfile::new(rng.gen_range(5.0..15.0), rng.gen_range(0.0..10.0)),
            lambda: LinearProfile::new(rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.2)),
            density: LinearProfile::new(rng.gen_range(0.5..2.0), rng.gen_range(0.0..0.5)),
        };
        let mut scenario = Scenario::new(
            "string",
            ModelSpec::String {
                params: p,
                initial: InitialConditions::default(),
            },
            case.mesh.config,
        );
        let control = (trial % 2 == 0).then(|| oracle::ExactModel {
            k1: rng.gen_range(0.0..20.0),
            k2: rng.gen_range(0.0..20.0),
            d_bar: rng.gen_range(0.0..3.0),
        });
        if let Some(c) = &control {
            scenario.controller =
                ControllerSpec::exact_model(EmGains { k1: c.k1, k2: c.k2 }, c.d_bar);
        }
        let tip = trial % 3 != 0;
        let load = trial % 4 < 2;
        if tip {
            scenario
                .disturbances
                .push(DisturbanceSpec::new(DisturbanceKind::StringTip));
        }
        if load {
            scenario
                .disturbances
                .push(DisturbanceSpec::new(DisturbanceKind::StringDistributed));
        }
        let (w2, w1, _) = levels(&case);
        step(&mut case, &scenario);
        let g = grid(&case.mesh);
        let t = (case.j - 1) as f64 * g.k;
        let model = oracle::Str {
            mass: p.payload_mass,
            t0: (p.base_tension.intercept, p.base_tension.slope),
            lambda: (p.lambda.intercept, p.lambda.slope),
            rho: (p.density.intercept, p.density.slope),
        };
        let want = oracle::string(&model, &g, &w2, &w1, tip, load, control.as_ref(), t);
        worst = worst.max(scaled_error(
            case.history.w_level(case.j),
            &want,
            &[&w1, &w2],
        ));
    }
    worst
}
