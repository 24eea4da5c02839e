//! Assemble an inter-device ensemble from library pieces: jittered noise
//! models, trajectory runs of target and canary, then the analysis.
//!
//!     cargo run --release --example ensemble_by_hand

use quancorde::bench::adder;
use quancorde::canary::make_canary;
use quancorde::mitigate::{analyze, AnalysisConfig, EnsembleRun};
use quancorde::noisysim::{make_diverse_ensemble, run_shots, BaseRates, NoiseModel};
use quancorde::transpile::decompose_to_basis;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (c, out) = adder(3, 3, 3)?;
    let target = decompose_to_basis(&c)?;
    let canary = make_canary(&target)?;
    let base = NoiseModel::all_to_all(target.num_qubits(), &BaseRates::default().scaled(2.0));
    let models = make_diverse_ensemble(&base, 12, 2.0, 5);

    let mut labels = Vec::new();
    let mut target_counts = Vec::new();
    let mut canary_counts = Vec::new();
    for (k, m) in models.iter().enumerate() {
        labels.push(format!("device{k}"));
        target_counts.push(run_shots(&target, m, 4096, 2 * k as u64)?);
        canary_counts.push(run_shots(&canary, m, 4096, 2 * k as u64 + 1)?);
    }
    let run = EnsembleRun::new(labels, target_counts, canary_counts, target, canary)?;
    let ideal = [(out, 1.0)].into_iter().collect();
    let report = analyze(&run, &AnalysisConfig::default(), Some(&ideal))?;
    print!("{}", report.summary());
    Ok(())
}
