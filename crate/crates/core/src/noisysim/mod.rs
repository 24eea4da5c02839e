//! Seeded noisy execution: statevector trajectories with stochastic Pauli
//! errors and readout flips, plus the noise-model factory for ensembles.

mod counts;
mod model;
mod statevector;
mod trajectory;

pub use counts::{Counts, CountsError};
pub use model::{make_diverse_ensemble, BaseRates, EdgeRate, NoiseModel, MAX_RATE};
pub use statevector::{ideal_distribution, statevector, C64, MAX_STATEVECTOR_WIDTH};
pub use trajectory::{run_shots, run_shots_dense, NoisyProgram, MAX_NOISY_WIDTH};

use thiserror::Error;

use crate::circuit::CircuitError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("{width} qubits exceed the simulator limit of {limit}")]
    TooWide { width: usize, limit: usize },
    #[error("noise model covers {model} qubits but the circuit has {circuit}")]
    ModelTooSmall { model: usize, circuit: usize },
    #[error("noise model field {field} has {len} entries for {num_qubits} qubits")]
    ModelShape {
        field: &'static str,
        len: usize,
        num_qubits: usize,
    },
    #[error("noise model field {field} holds {value}, outside [0, 1]")]
    Probability { field: &'static str, value: f64 },
    #[error("noise model edges are not sorted and unique")]
    UnsortedEdges,
    #[error("noise model edge ({0}, {1}) is invalid")]
    BadEdge(usize, usize),
    #[error("no two-qubit error rate for CX on ({0}, {1})")]
    MissingEdge(usize, usize),
}
