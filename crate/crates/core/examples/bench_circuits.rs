//! Generate the benchmark families and print their shape and ideal outputs.
//!
//!     cargo run --example bench_circuits

use quancorde::bench::{adder, adder_fixtures, qaoa_fixtures, qft};
use quancorde::transpile::decompose_to_basis;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<9} {:>6} {:>4} {:>8}  output", "adder", "qubits", "cx", "cx-depth");
    for f in adder_fixtures() {
        let (c, out) = adder(f.bits, f.a, f.b)?;
        let basis = decompose_to_basis(&c)?;
        println!(
            "{:<9} {:>6} {:>4} {:>8}  {out}",
            f.name,
            c.num_qubits(),
            basis.cx_count(),
            basis.cx_depth()
        );
    }

    let (c, ideal) = qft(4)?;
    println!("\nqft(4): {} gates, {} equally likely outcomes", c.gates().len(), ideal.len());

    for f in qaoa_fixtures() {
        let (_, ideal) = f.build()?;
        let mut p: Vec<_> = ideal.into_iter().collect();
        p.sort_by(|a, b| b.1.total_cmp(&a.1));
        let top: Vec<String> = p.iter().take(4).map(|(s, p)| format!("{s}:{p:.3}")).collect();
        println!("{:<12} top {}", f.name, top.join(" "));
    }
    Ok(())
}
