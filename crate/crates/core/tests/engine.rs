use flexsim::io::{export_result, import_bundle, import_bundle_from, ExportFormats, GridSource};
use flexsim::mesh::MeshConfig;
use flexsim::models::{ModelKind, ModelSpec};
use flexsim::{default_scenario, run, ControllerSpec, PdGains, Scenario};

fn heat_at(n_time: usize) -> Vec<f64> {
    let s = Scenario::new(
        "heat",
        ModelSpec::default_for(ModelKind::Heat),
        MeshConfig::new(20, n_time, 1.0, 0.1),
    );
    let r = run(&s).unwrap();
    let h = r.history.unwrap();
    h.w_level(n_time).to_vec()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn heat_time_refinement_is_first_order() {
    // h fixed, k halved twice; the spatial error cancels in the differences
    let (a, b, c) = (heat_at(200), heat_at(400), heat_at(800));
    let ratio = max_diff(&a, &b) / max_diff(&b, &c);
    assert!((1.5..=2.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn repeated_runs_are_bit_identical() {
    for kind in ModelKind::ALL {
        let mut s = default_scenario(kind);
        s.mesh.n_time = s.mesh.n_time.min(2000);
        s.mesh.final_time *= s.mesh.n_time as f64 / default_scenario(kind).mesh.n_time as f64;
        let a = run(&s).unwrap();
        let b = run(&s).unwrap();
        let (ha, hb) = (a.history.unwrap(), b.history.unwrap());
        assert!(
            ha.w()
                .iter()
                .zip(hb.w())
                .all(|(x, y)| x.to_bits() == y.to_bits()),
            "{kind}"
        );
        assert_eq!(a.verdict, b.verdict);
    }
}

#[test]
fn diverged_export_stops_at_first_bad_step() {
    let mut s = default_scenario(ModelKind::Timoshenko);
    s.controller = ControllerSpec::pd(PdGains {
        k2: 30.0,
        k4: 30.0,
        ..PdGains::reference()
    });
    let r = run(&s).unwrap();
    assert!(r.verdict.diverged);
    let bad = r.verdict.first_bad_step.unwrap();
    let dir = tempfile::tempdir().unwrap();
    let meta = export_result(&r, dir.path(), ExportFormats::BOTH).unwrap();
    assert_eq!(meta.shape.unwrap().n_levels, bad + 1);
    let text = std::fs::read_to_string(dir.path().join("w.csv")).unwrap();
    assert_eq!(text.lines().count(), bad + 2);
    let back = import_bundle(dir.path()).unwrap();
    assert!(back.metadata.verdict.diverged);
    assert_eq!(back.metadata.verdict.first_bad_step, Some(bad));
}

#[test]
fn csv_round_trip_within_tolerance() {
    let mut s = default_scenario(ModelKind::String);
    s.mesh = MeshConfig::new(10, 400, 1.0, 0.4);
    let r = run(&s).unwrap();
    let dir = tempfile::tempdir().unwrap();
    export_result(&r, dir.path(), ExportFormats::CSV).unwrap();
    let back = import_bundle_from(dir.path(), GridSource::Csv).unwrap();
    let want = r.history.unwrap();
    assert!(max_diff(back.history.unwrap().w(), want.w()) <= 1e-15);
    assert!(import_bundle_from(dir.path(), GridSource::Bin).is_err());
}
