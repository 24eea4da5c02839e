//! Lowering to the device basis and placement onto a coupling graph.

mod graph;
mod layout;
mod route;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use thiserror::Error;

use crate::circuit::{Angle, Circuit, CircuitError, Gate};

pub use graph::{CouplingGraph, GraphError};
pub use layout::{apply_layout, random_layouts, Layout};
pub use route::route;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranspileError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("layout maps {layout} logical qubits but the circuit has {circuit}")]
    LayoutSize { layout: usize, circuit: usize },
    #[error("layout is not injective: physical qubit {0} used twice")]
    LayoutNotInjective(usize),
    #[error("layout targets physical qubit {qubit} but the graph has {size}")]
    LayoutOutOfRange { qubit: usize, size: usize },
    #[error("no path between physical qubits {0} and {1}")]
    Disconnected(usize, usize),
    #[error("graph has {graph} qubits, circuit needs {circuit}")]
    GraphTooSmall { graph: usize, circuit: usize },
    #[error("only {found} distinct layouts found, {requested} requested")]
    NotEnoughLayouts { requested: usize, found: usize },
}

fn rz(q: usize, radians: f64) -> Gate {
    Gate::RZ(q, Angle::new(radians))
}

fn h(q: usize) -> [Gate; 3] {
    [rz(q, FRAC_PI_2), Gate::SX(q), rz(q, FRAC_PI_2)]
}

fn cx(control: usize, target: usize) -> Gate {
    Gate::CX { control, target }
}

/// Append the basis expansion of `gate` to `out`.
fn lower(gate: &Gate, out: &mut Vec<Gate>) {
    match *gate {
        Gate::H(q) => out.extend(h(q)),
        Gate::S(q) => out.push(rz(q, FRAC_PI_2)),
        Gate::Sdg(q) => out.push(rz(q, 3.0 * FRAC_PI_2)),
        Gate::T(q) => out.push(rz(q, FRAC_PI_4)),
        Gate::Tdg(q) => out.push(rz(q, 7.0 * FRAC_PI_4)),
        Gate::Swap(a, b) => out.extend([cx(a, b), cx(b, a), cx(a, b)]),
        Gate::CP { a, b, angle } => {
            let half = angle.radians() / 2.0;
            out.extend([rz(a, half), rz(b, half), cx(a, b), rz(b, -half), cx(a, b)]);
        }
        Gate::CCX { c0, c1, target: t } => {
            let tdg = 7.0 * FRAC_PI_4;
            out.extend(h(t));
            out.extend([cx(c1, t), rz(t, tdg), cx(c0, t), rz(t, FRAC_PI_4)]);
            out.extend([cx(c1, t), rz(t, tdg), cx(c0, t)]);
            out.extend([rz(c1, FRAC_PI_4), rz(t, FRAC_PI_4)]);
            out.extend(h(t));
            out.extend([cx(c0, c1), rz(c0, FRAC_PI_4), rz(c1, tdg), cx(c0, c1)]);
        }
        _ => out.push(gate.clone()),
    }
}

/// Rewrite every source gate into `{X, SX, RZ, CX}`; measurements and
/// barriers pass through. The result equals the input up to global phase.
pub fn decompose_to_basis(c: &Circuit) -> Result<Circuit, TranspileError> {
    c.validate(false)?;
    let mut gates = Vec::with_capacity(c.gates().len() * 2);
    for g in c.gates() {
        lower(g, &mut gates);
    }
    let mut out = Circuit::from_gates(c.num_qubits(), c.num_clbits(), gates);
    out.name = c.name.clone();
    Ok(out)
}

/// RX(θ) expressed with source gates, up to global phase.
pub(crate) fn rx_source(q: usize, radians: f64) -> [Gate; 3] {
    [Gate::H(q), rz(q, radians), Gate::H(q)]
}
