//! Sample a wide Clifford circuit far beyond statevector reach.
//!
//!     cargo run --release --example stabilizer

use std::time::Instant;

use quancorde::{stabsim, BitString, Circuit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 400;
    let mut c = Circuit::new(n, n).with_name("ghz400");
    c.h(0);
    for q in 1..n {
        c.cx(q - 1, q);
    }
    c.measure_all();

    let t = Instant::now();
    let counts = stabsim::sample(&c, 200, 1)?;
    println!("sampled {} shots of {n} qubits in {:.2?}", counts.total_shots(), t.elapsed());
    for (s, k) in counts.iter() {
        println!("  {}… x{k}", &s.to_string()[..16]);
    }

    let ones: BitString = "1".repeat(n).parse()?;
    println!("P(all ones) = {}", stabsim::ideal_probability(&c, &ones)?);
    let mut mixed = ones.clone();
    mixed.set(0, false);
    println!("P(one flipped) = {}", stabsim::ideal_probability(&c, &mixed)?);
    Ok(())
}
