//! Build the nearest-Clifford canary of a non-Clifford circuit and compare
//! the two ideal distributions.
//!
//!     cargo run --example canary

use quancorde::bench::qaoa_fixtures;
use quancorde::canary::{is_clifford, make_canary, make_random_canary};
use quancorde::noisysim::ideal_distribution;
use quancorde::stabsim;
use quancorde::transpile::decompose_to_basis;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixture = qaoa_fixtures().into_iter().find(|f| f.name == "QAOA6_star").expect("fixture exists");
    let (source, ideal) = fixture.build()?;
    let basis = decompose_to_basis(&source)?;
    let canary = make_canary(&basis)?;
    println!("target Clifford: {}, canary Clifford: {}", is_clifford(&basis)?, is_clifford(&canary)?);
    println!("cx count unchanged: {} == {}", basis.cx_count(), canary.cx_count());

    // The canary's exact output comes from the tableau simulator alone.
    let canary_ideal = ideal_distribution(&canary)?;
    println!("\n{:<8} {:>8} {:>8}", "string", "target", "canary");
    for (s, p) in &canary_ideal {
        let exact = stabsim::ideal_probability(&canary, s)?;
        assert!((exact - p).abs() < 1e-9);
        println!("{s:<8} {:>8.4} {:>8.4}", ideal.get(s).copied().unwrap_or(0.0), exact);
    }

    let random = make_random_canary(&basis, 7)?;
    println!("\nrandom-angle canary support: {}", ideal_distribution(&random)?.len());
    Ok(())
}
