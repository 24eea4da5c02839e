//! Phase kickback under a monotone ladder of noise levels, driven by the
//! bundled config. Reports land in `target/kickback`.
//!
//!     cargo run --release --example kickback_ensemble

use std::path::Path;

use quancorde::pipeline::{run, write_report, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/kickback.toml");
    let outcome = run(&RunConfig::from_file(&path)?)?;
    print!("{}", outcome.report.summary());

    println!("\nmember  canary   P(11)");
    let good = "11".parse()?;
    for (k, label) in outcome.report.members.iter().enumerate() {
        println!(
            "{label}  {:.4}  {:.4}",
            outcome.report.canary_fidelities[k],
            outcome.run.target_counts[k].probability(&good)
        );
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../target/kickback");
    write_report(&outcome.report, &dir)?;
    println!("\nwrote {}", dir.display());
    Ok(())
}
