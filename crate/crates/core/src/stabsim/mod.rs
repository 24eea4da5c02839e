//! Exact Clifford simulation on a stabilizer tableau.

mod tableau;

pub use tableau::Tableau;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::canary::quarter_turns;
use crate::circuit::{BitString, Circuit, CircuitError, Gate};
use crate::noisysim::Counts;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("gate {index} ({name}) is not a Clifford operation")]
    NotClifford { index: usize, name: &'static str },
    #[error("bitstring width {got} does not match {expected} clbits")]
    Width { got: usize, expected: usize },
}

/// Conjugate `t` by one gate. Accepts the basis Cliffords (X, SX, RZ at a
/// multiple of π/2, CX) plus H, S, S† and SWAP; barriers are no-ops.
/// Returns `false` for anything else, leaving `t` untouched.
pub fn apply_clifford(t: &mut Tableau, g: &Gate) -> bool {
    match *g {
        Gate::X(q) => t.x_gate(q),
        Gate::SX(q) => t.sx(q),
        Gate::RZ(q, a) => match quarter_turns(a) {
            Some(0) => {}
            Some(2) => t.z_gate(q),
            Some(k) => {
                for _ in 0..k {
                    t.s(q);
                }
            }
            None => return false,
        },
        Gate::CX { control, target } => t.cx(control, target),
        Gate::H(q) => t.h(q),
        Gate::S(q) => t.s(q),
        Gate::Sdg(q) => {
            for _ in 0..3 {
                t.s(q);
            }
        }
        Gate::Swap(a, b) => {
            t.cx(a, b);
            t.cx(b, a);
            t.cx(a, b);
        }
        Gate::Barrier(_) => {}
        _ => return false,
    }
    true
}

fn not_clifford(index: usize, g: &Gate) -> StabError {
    StabError::NotClifford {
        index,
        name: g.name(),
    }
}

/// Exact probability of reading `s` from the clbits of Clifford circuit `c`.
///
/// Every measurement is replayed with its outcome forced to the matching bit
/// of `s`: a contradicted deterministic outcome gives 0, and each random one
/// halves the probability. Clbits no measurement writes always read 0.
pub fn ideal_probability(c: &Circuit, s: &BitString) -> Result<f64, StabError> {
    c.validate(false)?;
    if s.width() != c.num_clbits() {
        return Err(StabError::Width {
            got: s.width(),
            expected: c.num_clbits(),
        });
    }
    let mut written = vec![false; c.num_clbits()];
    for (_, clbit) in c.measurements() {
        written[clbit] = true;
    }
    if (0..s.width()).any(|i| !written[i] && s.get(i)) {
        // Still reject non-Clifford input rather than report 0.
        check_clifford(c)?;
        return Ok(0.0);
    }
    let mut t = Tableau::new(c.num_qubits());
    let mut p = 1.0;
    for (index, g) in c.gates().iter().enumerate() {
        if let Gate::Measure { qubit, clbit } = *g {
            if p > 0.0 {
                p *= t.measure_forced(qubit, s.get(clbit));
            }
        } else if p > 0.0 {
            if !apply_clifford(&mut t, g) {
                return Err(not_clifford(index, g));
            }
        } else if !is_clifford_gate(g) {
            return Err(not_clifford(index, g));
        }
    }
    Ok(p)
}

fn is_clifford_gate(g: &Gate) -> bool {
    match *g {
        Gate::RZ(_, a) => quarter_turns(a).is_some(),
        Gate::X(_)
        | Gate::SX(_)
        | Gate::CX { .. }
        | Gate::H(_)
        | Gate::S(_)
        | Gate::Sdg(_)
        | Gate::Swap(..)
        | Gate::Barrier(_)
        | Gate::Measure { .. } => true,
        _ => false,
    }
}

fn check_clifford(c: &Circuit) -> Result<(), StabError> {
    match c.gates().iter().enumerate().find(|(_, g)| !is_clifford_gate(g)) {
        Some((index, g)) => Err(not_clifford(index, g)),
        None => Ok(()),
    }
}

/// Seeded exact sampling of a Clifford circuit. Shot `i` draws its
/// measurement coins from stream `i` of the seed, so the histogram does not
/// depend on how shots are scheduled across threads.
pub fn sample(c: &Circuit, shots: u64, seed: u64) -> Result<Counts, StabError> {
    c.validate(false)?;
    check_clifford(c)?;
    let gates = c.gates();
    // Everything before the first measurement is shared by all shots.
    let split = gates
        .iter()
        .position(|g| matches!(g, Gate::Measure { .. }))
        .unwrap_or(gates.len());
    let mut prefix = Tableau::new(c.num_qubits());
    for g in &gates[..split] {
        apply_clifford(&mut prefix, g);
    }
    let rest = &gates[split..];
    let width = c.num_clbits();

    const BATCH: u64 = 64;
    let batches = shots.div_ceil(BATCH);
    let counts = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut counts = Counts::new(width);
            for shot in b * BATCH..((b + 1) * BATCH).min(shots) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(shot);
                let mut t = prefix.clone();
                let mut out = BitString::zeros(width);
                for g in rest {
                    if let Gate::Measure { qubit, clbit } = *g {
                        let (bit, _) = t.measure(qubit, &mut rng);
                        out.set(clbit, bit);
                    } else {
                        apply_clifford(&mut t, g);
                    }
                }
                counts.add(out, 1);
            }
            counts
        })
        .reduce(|| Counts::new(width), |mut a, b| {
            a.merge(&b);
            a
        });
    Ok(counts)
}

/// Apply the unitary part of a Clifford circuit to a fresh tableau.
pub fn final_tableau(c: &Circuit) -> Result<Tableau, StabError> {
    c.validate(false)?;
    let mut t = Tableau::new(c.num_qubits());
    for (index, g) in c.gates().iter().enumerate() {
        if matches!(g, Gate::Measure { .. }) {
            continue;
        }
        if !apply_clifford(&mut t, g) {
            return Err(not_clifford(index, g));
        }
    }
    Ok(t)
}
