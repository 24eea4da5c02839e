//! Circuit IR shared by every stage of the pipeline.
//!
//! A [`Circuit`] is an ordered gate list over a fixed register of qubits and
//! classical bits. Measurements are ordinary gates in the list, so the
//! measurement map travels with the structure through layout, routing and
//! canary synthesis.
//!
//! Two gate vocabularies coexist in the same type: the device basis
//! `{X, SX, RZ, CX}` (plus `MEASURE` and `BARRIER`) and the richer source set
//! used to author benchmarks (`H`, `S`, `T`, `CCX`, `CP`, `SWAP`, ...).
//! [`Circuit::validate`] can be asked to enforce the basis-only restriction.

mod bitstring;
pub mod qasm;

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bitstring::{BitString, ParseBitStringError};
pub use qasm::{emit_qasm, parse_qasm, QasmError};

/// A rotation angle, canonicalized into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Canonicalize `radians` into `[0, 2π)`. Returns `None` for NaN or
    /// infinite input.
    pub fn try_new(radians: f64) -> Option<Self> {
        if !radians.is_finite() {
            return None;
        }
        if radians == 0.0 {
            return Some(Angle(0.0));
        }
        if (0.0..TAU).contains(&radians) {
            return Some(Angle(radians));
        }
        let mut r = radians.rem_euclid(TAU);
        // rem_euclid can land exactly on 2π for tiny negative inputs.
        if r >= TAU {
            r = 0.0;
        }
        Some(Angle(r))
    }

    /// # Panics
    /// Panics if `radians` is not finite.
    pub fn new(radians: f64) -> Self {
        Self::try_new(radians).expect("angle must be finite")
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Angle {
    type Error = String;
    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Angle::try_new(value).ok_or_else(|| format!("non-finite angle {value}"))
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&qasm::format_angle(*self))
    }
}

/// One instruction of a [`Circuit`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    X(usize),
    SX(usize),
    RZ(usize, Angle),
    CX { control: usize, target: usize },
    Measure { qubit: usize, clbit: usize },
    Barrier(Vec<usize>),
    // Source gates, removed by `transpile::decompose_to_basis`.
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    CCX { c0: usize, c1: usize, target: usize },
    CP { a: usize, b: usize, angle: Angle },
    Swap(usize, usize),
}

impl Gate {
    /// Qubits the gate touches, in operand order.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q)
            | Gate::SX(q)
            | Gate::RZ(q, _)
            | Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q) => vec![q],
            Gate::Measure { qubit, .. } => vec![qubit],
            Gate::CX { control, target } => vec![control, target],
            Gate::CP { a, b, .. } | Gate::Swap(a, b) => vec![a, b],
            Gate::CCX { c0, c1, target } => vec![c0, c1, target],
            Gate::Barrier(ref qs) => qs.clone(),
        }
    }

    /// True for the device basis plus `MEASURE` and `BARRIER`.
    pub fn is_basis(&self) -> bool {
        matches!(
            self,
            Gate::X(_)
                | Gate::SX(_)
                | Gate::RZ(..)
                | Gate::CX { .. }
                | Gate::Measure { .. }
                | Gate::Barrier(_)
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "x",
            Gate::SX(_) => "sx",
            Gate::RZ(..) => "rz",
            Gate::CX { .. } => "cx",
            Gate::Measure { .. } => "measure",
            Gate::Barrier(_) => "barrier",
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::CCX { .. } => "ccx",
            Gate::CP { .. } => "cp",
            Gate::Swap(..) => "swap",
        }
    }

    /// Rewrite every qubit operand through `f`. Classical bits are untouched.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::X(q) => Gate::X(f(q)),
            Gate::SX(q) => Gate::SX(f(q)),
            Gate::RZ(q, a) => Gate::RZ(f(q), a),
            Gate::CX { control, target } => Gate::CX {
                control: f(control),
                target: f(target),
            },
            Gate::Measure { qubit, clbit } => Gate::Measure {
                qubit: f(qubit),
                clbit,
            },
            Gate::Barrier(ref qs) => Gate::Barrier(qs.iter().map(|&q| f(q)).collect()),
            Gate::H(q) => Gate::H(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::Sdg(q) => Gate::Sdg(f(q)),
            Gate::T(q) => Gate::T(f(q)),
            Gate::Tdg(q) => Gate::Tdg(f(q)),
            Gate::CCX { c0, c1, target } => Gate::CCX {
                c0: f(c0),
                c1: f(c1),
                target: f(target),
            },
            Gate::CP { a, b, angle } => Gate::CP {
                a: f(a),
                b: f(b),
                angle,
            },
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {index} ({name}): qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange {
        index: usize,
        name: &'static str,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {index}: clbit {clbit} out of range for {num_clbits} clbits")]
    ClbitOutOfRange {
        index: usize,
        clbit: usize,
        num_clbits: usize,
    },
    #[error("gate {index} ({name}): repeated qubit operand {qubit}")]
    RepeatedOperand {
        index: usize,
        name: &'static str,
        qubit: usize,
    },
    #[error("gate {index}: clbit {clbit} is written by more than one measurement")]
    DuplicateClbit { index: usize, clbit: usize },
    #[error("gate {index} ({name}): qubit {qubit} is used after it was measured")]
    UseAfterMeasure {
        index: usize,
        name: &'static str,
        qubit: usize,
    },
    #[error("gate {index} ({name}) is not in the device basis")]
    NotBasis { index: usize, name: &'static str },
}

/// An ordered gate list over `num_qubits` qubits and `num_clbits` clbits.
///
/// Equality is structural: the `name` label is ignored.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    gates: Vec<Gate>,
    /// Free-form label; not part of the structure.
    #[serde(default)]
    pub name: String,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits
            && self.num_clbits == other.num_clbits
            && self.gates == other.gates
    }
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            gates: Vec::new(),
            name: String::new(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Build a circuit from parts without validation.
    pub fn from_gates(num_qubits: usize, num_clbits: usize, gates: Vec<Gate>) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            gates,
            name: String::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push(Gate::X(q))
    }

    pub fn sx(&mut self, q: usize) -> &mut Self {
        self.push(Gate::SX(q))
    }

    pub fn rz(&mut self, q: usize, radians: f64) -> &mut Self {
        self.push(Gate::RZ(q, Angle::new(radians)))
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push(Gate::H(q))
    }

    pub fn s(&mut self, q: usize) -> &mut Self {
        self.push(Gate::S(q))
    }

    pub fn t(&mut self, q: usize) -> &mut Self {
        self.push(Gate::T(q))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(Gate::CX { control, target })
    }

    pub fn ccx(&mut self, c0: usize, c1: usize, target: usize) -> &mut Self {
        self.push(Gate::CCX { c0, c1, target })
    }

    pub fn cp(&mut self, a: usize, b: usize, radians: f64) -> &mut Self {
        self.push(Gate::CP {
            a,
            b,
            angle: Angle::new(radians),
        })
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push(Gate::Swap(a, b))
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        self.push(Gate::Measure { qubit, clbit })
    }

    /// Measure qubit `i` into clbit `i` for every qubit.
    pub fn measure_all(&mut self) -> &mut Self {
        for q in 0..self.num_qubits.min(self.num_clbits) {
            self.measure(q, q);
        }
        self
    }

    pub fn barrier(&mut self, qubits: Vec<usize>) -> &mut Self {
        self.push(Gate::Barrier(qubits))
    }

    /// Check index ranges, operand distinctness, single-writer clbits and
    /// that no measured qubit is operated on afterwards (barriers excepted).
    /// With `require_basis`, every gate must also be in the device basis.
    pub fn validate(&self, require_basis: bool) -> Result<(), CircuitError> {
        let mut measured = vec![false; self.num_qubits];
        let mut written = vec![false; self.num_clbits];
        for (index, gate) in self.gates.iter().enumerate() {
            let name = gate.name();
            if require_basis && !gate.is_basis() {
                return Err(CircuitError::NotBasis { index, name });
            }
            let qubits = gate.qubits();
            for (i, &q) in qubits.iter().enumerate() {
                if q >= self.num_qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        index,
                        name,
                        qubit: q,
                        num_qubits: self.num_qubits,
                    });
                }
                if qubits[..i].contains(&q) {
                    return Err(CircuitError::RepeatedOperand {
                        index,
                        name,
                        qubit: q,
                    });
                }
            }
            if matches!(gate, Gate::Barrier(_)) {
                continue;
            }
            for &q in &qubits {
                if measured[q] {
                    return Err(CircuitError::UseAfterMeasure {
                        index,
                        name,
                        qubit: q,
                    });
                }
            }
            if let Gate::Measure { qubit, clbit } = *gate {
                if clbit >= self.num_clbits {
                    return Err(CircuitError::ClbitOutOfRange {
                        index,
                        clbit,
                        num_clbits: self.num_clbits,
                    });
                }
                if written[clbit] {
                    return Err(CircuitError::DuplicateClbit { index, clbit });
                }
                written[clbit] = true;
                measured[qubit] = true;
            }
        }
        Ok(())
    }

    /// Pairs `(qubit, clbit)` in program order.
    pub fn measurements(&self) -> Vec<(usize, usize)> {
        self.gates
            .iter()
            .filter_map(|g| match *g {
                Gate::Measure { qubit, clbit } => Some((qubit, clbit)),
                _ => None,
            })
            .collect()
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    pub fn cx_count(&self) -> usize {
        self.count("cx")
    }

    /// Length of the longest chain of CX gates under qubit-dependency
    /// ordering. Every other gate, barriers included, adds no depth.
    pub fn cx_depth(&self) -> usize {
        let mut depth = vec![0usize; self.num_qubits];
        let mut best = 0;
        for gate in &self.gates {
            if let Gate::CX { control, target } = *gate {
                let d = depth[control].max(depth[target]) + 1;
                depth[control] = d;
                depth[target] = d;
                best = best.max(d);
            }
        }
        best
    }

    /// Qubits touched by at least one gate, ascending.
    pub fn active_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_qubits];
        for g in &self.gates {
            if matches!(g, Gate::Barrier(_)) {
                continue;
            }
            for q in g.qubits() {
                used[q] = true;
            }
        }
        (0..self.num_qubits).filter(|&q| used[q]).collect()
    }
}
