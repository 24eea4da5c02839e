//! QAOA with several likely outcomes: reweighting raises the total weight
//! on the ideal support, not just one string.
//!
//!     cargo run --release --example qaoa_multi_output

use std::path::Path;

use quancorde::pipeline::{run, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/qaoa6.toml");
    let outcome = run(&RunConfig::from_file(&path)?)?;
    let report = &outcome.report;
    let m = report.metrics.as_ref().expect("fixture has an ideal distribution");
    let ideal = outcome.prepared.ideal.as_ref().expect("fixture has an ideal distribution");

    println!("{:<8} {:>7} {:>8} {:>8} {:>8}", "string", "ideal", "rho", "p_base", "q");
    for r in report.records.iter().take(10) {
        let p = ideal.get(&r.string).copied().unwrap_or(0.0);
        println!("{:<8} {p:>7.3} {:>8.3} {:>8.4} {:>8.4}", r.string.to_string(), r.rho, r.p_base, r.q);
    }
    println!(
        "\nfidelity pooled {:.4} -> reweighted {:.4} ({:.2}x)",
        m.fidelity_pooled,
        m.fidelity_q,
        m.fidelity_q / m.fidelity_pooled
    );
    Ok(())
}
