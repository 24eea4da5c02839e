//! Run an adder through the trajectory simulator at growing noise levels.
//!
//!     cargo run --release --example noisy_sim

use quancorde::bench::adder;
use quancorde::mitigate::overlap;
use quancorde::noisysim::{run_shots, BaseRates, NoiseModel};
use quancorde::transpile::decompose_to_basis;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (c, out) = adder(3, 5, 6)?;
    let basis = decompose_to_basis(&c)?;
    let ideal = [(out.clone(), 1.0)].into_iter().collect();
    println!("adder 5 + 6 -> {out}, {} qubits, {} cx", basis.num_qubits(), basis.cx_count());
    println!("{:>6} {:>9} {:>9}", "scale", "P(out)", "fidelity");
    for scale in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let model = NoiseModel::all_to_all(basis.num_qubits(), &BaseRates::default().scaled(scale));
        let counts = run_shots(&basis, &model, 8192, 11)?;
        println!(
            "{scale:>6} {:>9.4} {:>9.4}",
            counts.probability(&out),
            overlap(&counts.distribution(), &ideal)
        );
    }
    Ok(())
}
