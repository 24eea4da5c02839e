//! Intra-device ensemble of random layouts for a 4-bit adder: the correct
//! sum is buried in noise per member but surfaces after reweighting.
//!
//!     cargo run --release --example adder_boost [seed]

use std::path::Path;

use quancorde::mitigate::{canary_fidelities, analyze_with_fidelities};
use quancorde::pipeline::{prepare, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/add10.toml");
    let mut cfg = RunConfig::from_file(&path)?;
    cfg.ensemble.members = Some(30);
    cfg.run.seed = seed;

    let prepared = prepare(&cfg)?;
    let run = prepared.execute()?;
    let fidelities = canary_fidelities(&run)?;
    println!("{:>7} {:>8} {:>8} {:>8} {:>6}", "members", "pooled", "best", "q", "rank");
    for k in [5, 10, 20, 30] {
        let cfg = prepared.analysis_config();
        let sub = analyze_with_fidelities(&run.prefix(k), &cfg, prepared.ideal.as_ref(), fidelities[..k].to_vec())?;
        let m = sub.metrics.expect("adder has an ideal output");
        let rank = m.rank_best.position().map_or("-".into(), |r| r.to_string());
        println!(
            "{k:>7} {:>8.4} {:>8.4} {:>8.4} {rank:>6}",
            m.fidelity_pooled, m.best_member_fidelity, m.fidelity_q
        );
    }
    Ok(())
}
