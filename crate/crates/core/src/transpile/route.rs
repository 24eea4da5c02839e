use super::{CouplingGraph, Layout, TranspileError};
use crate::circuit::{Circuit, Gate};

/// Place basis circuit `c` onto `g` through `l`, inserting SWAPs (as three
/// CX each) so that every CX acts on an edge.
///
/// For a non-adjacent CX the control walks along the BFS shortest path
/// toward the target. Measurements are emitted last, through the final
/// logical-to-physical permutation, so clbit values match the unrouted
/// circuit. Moving them is exact because a measured qubit is never
/// operated on again.
pub fn route(c: &Circuit, g: &CouplingGraph, l: &Layout) -> Result<Circuit, TranspileError> {
    c.validate(true)?;
    if l.num_logical() != c.num_qubits() {
        return Err(TranspileError::LayoutSize {
            layout: l.num_logical(),
            circuit: c.num_qubits(),
        });
    }
    let n_phys = g.num_physical_qubits();
    if l.num_physical() != n_phys {
        return Err(TranspileError::GraphTooSmall {
            graph: n_phys,
            circuit: l.num_physical(),
        });
    }
    let mut phys_of: Vec<usize> = l.as_slice().to_vec();
    let mut logical_at: Vec<Option<usize>> = vec![None; n_phys];
    for (log, &p) in phys_of.iter().enumerate() {
        logical_at[p] = Some(log);
    }

    let mut out = Vec::with_capacity(c.gates().len() * 2);
    let mut measures = Vec::new();
    for gate in c.gates() {
        match *gate {
            Gate::CX { control, target } => {
                let pt = phys_of[target];
                let mut pc = phys_of[control];
                if !g.are_adjacent(pc, pt) {
                    let path = g
                        .shortest_path(pc, pt)
                        .ok_or(TranspileError::Disconnected(pc, pt))?;
                    for w in path.windows(2).take(path.len() - 2) {
                        let (a, b) = (w[0], w[1]);
                        out.push(Gate::CX { control: a, target: b });
                        out.push(Gate::CX { control: b, target: a });
                        out.push(Gate::CX { control: a, target: b });
                        logical_at.swap(a, b);
                        for p in [a, b] {
                            if let Some(log) = logical_at[p] {
                                phys_of[log] = p;
                            }
                        }
                    }
                    pc = phys_of[control];
                }
                out.push(Gate::CX { control: pc, target: pt });
            }
            Gate::Measure { qubit, clbit } => measures.push((qubit, clbit)),
            _ => out.push(gate.map_qubits(|q| phys_of[q])),
        }
    }
    for (qubit, clbit) in measures {
        out.push(Gate::Measure {
            qubit: phys_of[qubit],
            clbit,
        });
    }
    let mut routed = Circuit::from_gates(n_phys, c.num_clbits(), out);
    routed.name = c.name.clone();
    Ok(routed)
}
