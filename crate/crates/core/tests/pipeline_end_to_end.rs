mod common;

use std::path::PathBuf;

use common::tv;
use quancorde::pipeline::{run, write_report, CircuitSpec, Mode, RunConfig};
use quancorde::circuit::emit_qasm;
use quancorde::{BitString, Circuit};

fn config(name: &str) -> RunConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
    RunConfig::from_file(&path).unwrap()
}

#[test]
fn kickback_ladder_boosts_the_correct_string() {
    let out = run(&config("kickback.toml")).unwrap();
    let top = &out.report.records[0];
    assert_eq!(top.string, "11".parse::<BitString>().unwrap());
    assert!(out.report.records[1..].iter().all(|r| r.rho < top.rho));
    assert!(top.q > 0.9, "q(11) = {}", top.q);
}

#[test]
fn zero_noise_reproduces_the_ideal_distribution() {
    // Small rotations round to zero, so the canary is deterministic while
    // the target spreads over eight strings.
    let dir = tempfile::tempdir().unwrap();
    let mut c = Circuit::new(3, 3);
    for (q, theta) in [0.3, 0.6, 0.7].into_iter().enumerate() {
        c.h(q).rz(q, theta).h(q);
    }
    c.measure_all();
    let path = dir.path().join("tilt.qasm");
    std::fs::write(&path, emit_qasm(&c)).unwrap();
    let ideal = quancorde::noisysim::ideal_distribution(&c).unwrap();
    let sidecar = dir.path().join("tilt.json");
    std::fs::write(&sidecar, serde_json::to_string(&quancorde::bench::sidecar(&ideal)).unwrap()).unwrap();

    let mut cfg = RunConfig::new(CircuitSpec::Qasm { path });
    cfg.ensemble.mode = Mode::Inter;
    cfg.ensemble.scale = 0.0;
    cfg.correct.sidecar = Some(sidecar);
    let out = run(&cfg).unwrap();
    assert!(out.report.fallback);
    let q = out.report.records.iter().map(|r| (r.string.clone(), r.q)).collect();
    let d = tv(&q, &ideal);
    assert!(d < 0.02, "tv {d}");
    assert!(out.report.metrics.unwrap().fidelity_q > 0.98);
}

#[test]
fn bundled_adder_config_boosts_over_three_seeds() {
    let mut boosts = Vec::new();
    for seed in 0..3 {
        let mut cfg = config("add10.toml");
        cfg.run.seed = seed;
        let m = run(&cfg).unwrap().report.metrics.unwrap();
        boosts.push(m.boost_mean.unwrap());
    }
    let mean = boosts.iter().sum::<f64>() / 3.0;
    assert!(mean >= 2.0, "boosts {boosts:?}");
}

#[test]
fn report_files_embed_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(CircuitSpec::Kickback);
    cfg.ensemble.mode = Mode::Inter;
    cfg.run.shots = 256;
    let out = run(&cfg).unwrap();
    write_report(&out.report, dir.path()).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["ensemble"]["members"], 7);
    assert_eq!(json["config"]["run"]["shots"], 256);
    assert_eq!(json["config"]["run"]["f_min"], 0.001);
    let csv = std::fs::read_to_string(dir.path().join("records.csv")).unwrap();
    assert_eq!(csv.lines().count(), out.report.records.len() + 1);
    assert!(dir.path().join("summary.txt").exists());
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    let mut cfg = RunConfig::new(CircuitSpec::Kickback);
    cfg.ensemble.members = Some(1);
    assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);

    let mut cfg = RunConfig::new(CircuitSpec::Adder { bits: 2, a: 1, b: 2 });
    cfg.ensemble.mode = Mode::Inter;
    cfg.ensemble.scale = 6.0;
    cfg.run.shots = 256;
    cfg.run.f_min = 1.0;
    assert_eq!(run(&cfg).unwrap_err().exit_code(), 4);

    let cfg = RunConfig::new(CircuitSpec::Qasm { path: "missing.qasm".into() });
    assert_ne!(run(&cfg).unwrap_err().exit_code(), 0);
}
