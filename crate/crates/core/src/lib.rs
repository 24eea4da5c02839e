//! Canary-ordered diverse ensembles.
//!
//! A noisy quantum program run across many differently-noisy execution
//! contexts (machines, or qubit mappings on one machine) produces one output
//! histogram per context. A Clifford *canary* with the same mapped structure
//! is run on the same contexts; because its ideal output is classically
//! computable, its per-context fidelity orders the ensemble. Output strings
//! whose ensemble-wide probabilities track that ordering are likely correct,
//! and the pooled distribution is reweighted by that correlation.
//!
//! Everything that would run on hardware is replaced by seeded simulators:
//!
//! * [`circuit`]: IR, QASM subset, structural queries
//! * [`transpile`]: basis decomposition, layouts, SWAP routing
//! * [`canary`]: nearest-Clifford canary synthesis
//! * [`stabsim`]: tableau simulation and exact per-string probabilities
//! * [`noisysim`]: statevector trajectories with Pauli and readout noise
//! * [`mitigate`]: canary ordering, rank correlation, reweighting, metrics
//! * [`bench`](mod@bench): adder, QFT and QAOA generators with ideal outcomes
//! * [`pipeline`]: config-driven end-to-end runs and report files
//!
//! ## Examples
//!
//! Each capability has a runnable example (`cargo run --release --example <name>`):
//!
//! | example | shows |
//! |---|---|
//! | `bench_circuits` | adder, QFT and QAOA generators with their ideal outputs |
//! | `canary` | nearest-Clifford canary of a QAOA circuit, checked against the tableau |
//! | `stabilizer` | sampling and exact probabilities of a 400-qubit Clifford circuit |
//! | `noisy_sim` | trajectory simulation of an adder across noise levels |
//! | `routing` | random heavy-hex layouts and SWAP routing |
//! | `ensemble_by_hand` | an inter-device ensemble assembled from library calls |
//! | `kickback_ensemble` | the bundled monotone-noise config, end to end |
//! | `adder_boost` | intra-device adder ensemble and the effect of ensemble size |
//! | `qaoa_multi_output` | reweighting with several correct outcomes |
//! | `weight_functions` | linear, squared and threshold weights on one run |
//!
//! The `quancorde` binary wraps the same calls as the subcommands `run`,
//! `canary`, `simulate`, `bench-gen` and `report`.

pub mod bench;
pub mod canary;
pub mod circuit;
pub mod mitigate;
pub mod noisysim;
pub mod pipeline;
pub mod stabsim;
pub mod transpile;

pub use circuit::{Angle, BitString, Circuit, Gate};
