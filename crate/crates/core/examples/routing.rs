//! Place a circuit on random connected regions of a heavy-hex device and
//! route it with SWAPs.
//!
//!     cargo run --release --example routing

use quancorde::bench::adder;
use quancorde::noisysim::{run_shots, NoiseModel};
use quancorde::transpile::{decompose_to_basis, random_layouts, route, CouplingGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (c, out) = adder(2, 3, 2)?;
    let basis = decompose_to_basis(&c)?;
    let device = CouplingGraph::heavy_hex_27();
    println!("logical: {} qubits, {} cx, output {out}", basis.num_qubits(), basis.cx_count());

    for layout in random_layouts(&basis, &device, 5, 3)? {
        // Route on the chosen region only, as each member of an intra-device
        // ensemble does.
        let region = device.induced(layout.as_slice());
        let routed = route(&basis, &region, &layout)?;
        let swaps = (routed.cx_count() - basis.cx_count()) / 3;
        let counts = run_shots(&routed, &NoiseModel::noiseless(device.num_physical_qubits()), 256, 0)?;
        assert_eq!(counts.get(&out), 256);
        println!(
            "layout {:?}: {} cx, {swaps} swaps, active {:?}",
            layout.as_slice(),
            routed.cx_count(),
            routed.active_qubits()
        );
    }
    Ok(())
}
