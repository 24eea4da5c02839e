//! Benchmark generators with their ideal outcomes: Cuccaro ripple-carry
//! adders, QFT, and depth-1 QAOA.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{BitString, Circuit};
use crate::mitigate::Distribution;
use crate::noisysim::{ideal_distribution, SimError};
use crate::transpile::rx_source;

/// Largest QAOA graph whose ideal distribution is computed exactly.
pub const MAX_QAOA_NODES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("operand {value} does not fit in {bits} bits")]
    OperandRange { value: u64, bits: usize },
    #[error("adder needs 1..=31 bits per operand, got {0}")]
    AdderWidth(usize),
    #[error("qft needs at least one qubit")]
    EmptyQft,
    #[error("graph on {0} nodes exceeds the {MAX_QAOA_NODES}-node oracle limit")]
    GraphTooLarge(usize),
    #[error("edge ({0}, {1}) is a self-loop or out of range")]
    BadEdge(usize, usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Qubit of the carry-in, `b_i`, `a_i` and the carry-out in [`adder`].
pub fn adder_qubits(bits: usize) -> (usize, impl Fn(usize) -> usize, impl Fn(usize) -> usize, usize) {
    (0, |i| 1 + 2 * i, |i| 2 + 2 * i, 2 * bits + 1)
}

/// Cuccaro ripple-carry adder computing `b ← a + b` over `2·bits + 2`
/// qubits: carry-in on qubit 0, then `b_i`, `a_i` interleaved, carry-out
/// last. Every qubit `i` is measured into clbit `i`. Returns the circuit
/// (X/CX/CCX, before decomposition) and its only possible output.
pub fn adder(bits: usize, a: u64, b: u64) -> Result<(Circuit, BitString), BenchError> {
    if bits == 0 || bits > 31 {
        return Err(BenchError::AdderWidth(bits));
    }
    for v in [a, b] {
        if v >> bits != 0 {
            return Err(BenchError::OperandRange { value: v, bits });
        }
    }
    let (cin, qb, qa, z) = adder_qubits(bits);
    let n = 2 * bits + 2;
    let mut c = Circuit::new(n, n).with_name(format!("adder{bits}_{a}_{b}"));
    for i in 0..bits {
        if a >> i & 1 == 1 {
            c.x(qa(i));
        }
        if b >> i & 1 == 1 {
            c.x(qb(i));
        }
    }
    let maj = |c: &mut Circuit, x: usize, y: usize, w: usize| {
        c.cx(w, y).cx(w, x).ccx(x, y, w);
    };
    let uma = |c: &mut Circuit, x: usize, y: usize, w: usize| {
        c.ccx(x, y, w).cx(w, x).cx(x, y);
    };
    let carry = |i: usize| if i == 0 { cin } else { qa(i - 1) };
    for i in 0..bits {
        maj(&mut c, carry(i), qb(i), qa(i));
    }
    c.cx(qa(bits - 1), z);
    for i in (0..bits).rev() {
        uma(&mut c, carry(i), qb(i), qa(i));
    }
    c.measure_all();

    let sum = a + b;
    let mut out = BitString::zeros(n);
    for i in 0..bits {
        out.set(qa(i), a >> i & 1 == 1);
        out.set(qb(i), sum >> i & 1 == 1);
    }
    out.set(z, sum >> bits & 1 == 1);
    Ok((c, out))
}

/// A named adder instance and its expected output string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdderFixture {
    pub name: String,
    pub bits: usize,
    pub a: u64,
    pub b: u64,
    pub output: String,
}

/// Adder instances whose outputs reproduce the published benchmark table.
/// Only the outputs are known; operands are chosen with `a = b`.
pub fn adder_fixtures() -> Vec<AdderFixture> {
    [
        ("ADD6_1", 2, 2, "110000"),
        ("ADD6_2", 2, 3, "111100"),
        ("ADD8_1", 3, 3, "00111100"),
        ("ADD8_2", 3, 7, "11111100"),
        ("ADD10_1", 4, 4, "0011000000"),
        ("ADD10_2", 4, 14, "1111110000"),
        ("ADD12_1", 5, 5, "000011001100"),
        ("ADD12_2", 5, 31, "111111111100"),
        ("ADD14_1", 6, 6, "00000011110000"),
    ]
    .into_iter()
    .map(|(name, bits, v, output)| AdderFixture {
        name: name.to_string(),
        bits,
        a: v,
        b: v,
        output: output.to_string(),
    })
    .collect()
}

/// Quantum Fourier transform on `n` qubits with final swaps, measured in
/// order. On `|0…0⟩` its output is uniform over all `2^n` strings.
pub fn qft(n: usize) -> Result<(Circuit, Distribution), BenchError> {
    if n == 0 {
        return Err(BenchError::EmptyQft);
    }
    let mut c = Circuit::new(n, n).with_name(format!("qft{n}"));
    for j in 0..n {
        c.h(j);
        for k in j + 1..n {
            c.cp(k, j, PI / (1u64 << (k - j)) as f64);
        }
    }
    for j in 0..n / 2 {
        c.swap(j, n - 1 - j);
    }
    c.measure_all();
    let p = 1.0 / (1u64 << n) as f64;
    let ideal = (0..1u64 << n).map(|i| (BitString::from_u64(i, n), p)).collect();
    Ok((c, ideal))
}

/// Depth-1 QAOA ansatz for MaxCut on `edges` over `n` nodes: H layer, one
/// `CX·RZ(2γ)·CX` per edge, then RX(2β) on every qubit as `H·RZ·H`. The
/// ideal distribution comes from the statevector oracle.
pub fn qaoa(
    n: usize,
    edges: &[(usize, usize)],
    gamma: f64,
    beta: f64,
) -> Result<(Circuit, Distribution), BenchError> {
    if n > MAX_QAOA_NODES {
        return Err(BenchError::GraphTooLarge(n));
    }
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u == v || u >= n || v >= n) {
        return Err(BenchError::BadEdge(u, v));
    }
    let mut c = Circuit::new(n, n).with_name(format!("qaoa{n}"));
    for q in 0..n {
        c.h(q);
    }
    for &(u, v) in edges {
        c.cx(u, v).rz(v, 2.0 * gamma).cx(u, v);
    }
    for q in 0..n {
        for g in rx_source(q, 2.0 * beta) {
            c.push(g);
        }
    }
    c.measure_all();
    let ideal = ideal_distribution(&c)?;
    Ok((c, ideal))
}

/// A named QAOA instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaFixture {
    pub name: String,
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub gamma: f64,
    pub beta: f64,
}

impl QaoaFixture {
    pub fn build(&self) -> Result<(Circuit, Distribution), BenchError> {
        let (mut c, d) = qaoa(self.nodes, &self.edges, self.gamma, self.beta)?;
        c.name = self.name.clone();
        Ok((c, d))
    }
}

/// Four 6-node MaxCut instances at fixed angles.
pub fn qaoa_fixtures() -> Vec<QaoaFixture> {
    let ring: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    let path: Vec<_> = (0..5).map(|i| (i, i + 1)).collect();
    let prism = vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)];
    let star = vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)];
    [("QAOA6_ring", ring), ("QAOA6_path", path), ("QAOA6_prism", prism), ("QAOA6_star", star)]
        .into_iter()
        .map(|(name, edges)| QaoaFixture {
            name: name.to_string(),
            nodes: 6,
            edges,
            gamma: 0.3 * PI,
            beta: 0.3 * PI,
        })
        .collect()
}

/// Ideal distribution as sorted `(bitstring, probability)` pairs.
pub fn sidecar(ideal: &Distribution) -> Vec<(String, f64)> {
    ideal.iter().map(|(s, &p)| (s.to_string(), p)).collect()
}

/// Inverse of [`sidecar`].
pub fn from_sidecar(pairs: &[(String, f64)]) -> Result<Distribution, crate::circuit::ParseBitStringError> {
    let mut d = BTreeMap::new();
    for (s, p) in pairs {
        d.insert(s.parse()?, *p);
    }
    Ok(d)
}
