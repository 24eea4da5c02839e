//! Compare weighting functions on one simulated ensemble. Analysis is cheap
//! once the histograms exist, so the run is reused.
//!
//!     cargo run --release --example weight_functions

use quancorde::mitigate::{analyze, AnalysisConfig, WeightFn};
use quancorde::pipeline::{prepare, CircuitSpec, Mode, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::new(CircuitSpec::QaoaFixture { name: "QAOA6_ring".into() });
    cfg.ensemble.mode = Mode::Inter;
    cfg.ensemble.members = Some(20);
    cfg.ensemble.scale = 3.0;
    let prepared = prepare(&cfg)?;
    let run = prepared.execute()?;

    for weight in [WeightFn::Linear, WeightFn::Squared, WeightFn::Threshold(0.5), WeightFn::Threshold(0.9)] {
        let a = AnalysisConfig { weight, ..prepared.analysis_config() };
        let r = analyze(&run, &a, prepared.ideal.as_ref())?;
        let m = r.metrics.expect("fixture has an ideal distribution");
        println!(
            "{:<14} fidelity {:.4} (pooled {:.4}) fallback {}",
            weight.to_string(),
            m.fidelity_q,
            m.fidelity_pooled,
            r.fallback
        );
    }
    Ok(())
}
