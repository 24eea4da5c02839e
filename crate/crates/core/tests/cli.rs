mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::classical_run;
use quancorde::circuit::parse_qasm;
use quancorde::noisysim::Counts;

fn quancorde(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quancorde")).args(args).current_dir(cwd).output().unwrap()
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn body(qasm: &str) -> Vec<&str> {
    qasm.lines().filter(|l| !l.starts_with("//")).collect()
}

#[test]
fn bench_gen_adder_writes_verified_sum() {
    let dir = tempfile::tempdir().unwrap();
    ok(quancorde(&["bench-gen", "adder", "2", "1", "1", "--out", "."], dir.path()));
    let c = parse_qasm(&std::fs::read_to_string(dir.path().join("adder2_1_1.qasm")).unwrap()).unwrap();
    let sidecar: Vec<(String, f64)> =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("adder2_1_1.json")).unwrap()).unwrap();
    assert_eq!(sidecar, vec![(classical_run(&c).to_string(), 1.0)]);
}

#[test]
fn ideal_simulation_of_a_wide_clifford_uses_the_tableau() {
    // Forty qubits is beyond the trajectory engine, so success means the
    // tableau simulator handled it.
    let dir = tempfile::tempdir().unwrap();
    let mut c = quancorde::Circuit::new(40, 40);
    c.h(0);
    for q in 1..40 {
        c.cx(q - 1, q);
    }
    c.measure_all();
    std::fs::write(dir.path().join("ghz.qasm"), quancorde::circuit::emit_qasm(&c)).unwrap();
    let json = ok(quancorde(&["simulate", "ghz.qasm", "--ideal", "--shots", "500", "--json"], dir.path()));
    let counts = Counts::from_json(&json).unwrap();
    assert_eq!(counts.total_shots(), 500);
    assert!(counts.iter().all(|(s, _)| s.to_string() == "0".repeat(40) || s.to_string() == "1".repeat(40)));

    let noisy = quancorde(&["simulate", "ghz.qasm"], dir.path());
    assert_eq!(noisy.status.code(), Some(3));
}

#[test]
fn canary_of_a_clifford_circuit_is_itself() {
    let dir = tempfile::tempdir().unwrap();
    let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nsx q[0];\nrz(pi/2) q[1];\ncx q[0],q[1];\nmeasure q[0] -> c[0];\nmeasure q[1] -> c[1];\n";
    std::fs::write(dir.path().join("in.qasm"), text).unwrap();
    ok(quancorde(&["canary", "in.qasm", "out.qasm"], dir.path()));
    let out = std::fs::read_to_string(dir.path().join("out.qasm")).unwrap();
    assert_eq!(body(&out), body(text));
}

#[test]
fn run_then_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[circuit]\nkind = \"kickback\"\n[ensemble]\nmode = \"monotone\"\nmembers = 5\n[run]\nshots = 512\n";
    std::fs::write(dir.path().join("k.toml"), cfg).unwrap();
    let summary = ok(quancorde(&["run", "k.toml", "--out", "a"], dir.path()));
    ok(quancorde(&["report", "a/report.json", "--out", "b"], dir.path()));
    for f in ["records.csv", "summary.txt"] {
        assert_eq!(
            std::fs::read_to_string(dir.path().join("a").join(f)).unwrap(),
            std::fs::read_to_string(dir.path().join("b").join(f)).unwrap()
        );
    }
    assert_eq!(std::fs::read_to_string(dir.path().join("a/summary.txt")).unwrap(), summary);
    assert_eq!(quancorde(&["run", "nope.toml"], dir.path()).status.code(), Some(2));
}
