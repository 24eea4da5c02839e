//! Random circuit generators and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use quancorde::{Angle, BitString, Circuit, Gate};
use rand::Rng;

fn two_distinct(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Random Clifford circuit over the full source gate set, measured at the end.
pub fn random_clifford(rng: &mut impl Rng, n: usize, gates: usize) -> Circuit {
    let mut c = Circuit::new(n, n);
    for _ in 0..gates {
        let q = rng.random_range(0..n);
        let kind = rng.random_range(0..if n > 1 { 8 } else { 6 });
        match kind {
            0 => c.h(q),
            1 => c.s(q),
            2 => c.push(Gate::Sdg(q)),
            3 => c.x(q),
            4 => c.sx(q),
            5 => c.rz(q, FRAC_PI_2 * rng.random_range(0..4) as f64),
            6 => {
                let (a, b) = two_distinct(rng, n);
                c.cx(a, b)
            }
            _ => {
                let (a, b) = two_distinct(rng, n);
                c.swap(a, b)
            }
        };
    }
    c.measure_all();
    c
}

/// Random basis circuit with arbitrary RZ angles (some exactly Clifford) and
/// a random injective measurement map.
pub fn random_basis(rng: &mut impl Rng, n: usize, gates: usize) -> Circuit {
    let clbits = n + rng.random_range(0..3);
    let mut c = Circuit::new(n, clbits);
    for _ in 0..gates {
        let q = rng.random_range(0..n);
        match rng.random_range(0..if n > 1 { 5 } else { 4 }) {
            0 => c.x(q),
            1 => c.sx(q),
            2 => c.rz(q, rng.random_range(-10.0..10.0)),
            3 => c.rz(q, FRAC_PI_2 * rng.random_range(0..8) as f64),
            _ => {
                let (a, b) = two_distinct(rng, n);
                c.cx(a, b)
            }
        };
    }
    let mut slots: Vec<usize> = (0..clbits).collect();
    for q in 0..n {
        if rng.random_bool(0.8) {
            let k = rng.random_range(0..slots.len());
            c.measure(q, slots.swap_remove(k));
        }
    }
    c
}

/// Random circuit over every source gate, measured at the end.
pub fn random_source(rng: &mut impl Rng, n: usize, gates: usize) -> Circuit {
    assert!(n >= 3);
    let mut c = Circuit::new(n, n);
    for _ in 0..gates {
        let q = rng.random_range(0..n);
        let g = match rng.random_range(0..12) {
            0 => Gate::X(q),
            1 => Gate::SX(q),
            2 => Gate::RZ(q, Angle::new(rng.random_range(0.0..7.0))),
            3 => Gate::H(q),
            4 => Gate::S(q),
            5 => Gate::Sdg(q),
            6 => Gate::T(q),
            7 => Gate::Tdg(q),
            8 => {
                let (control, target) = two_distinct(rng, n);
                Gate::CX { control, target }
            }
            9 => {
                let (a, b) = two_distinct(rng, n);
                Gate::Swap(a, b)
            }
            10 => {
                let (a, b) = two_distinct(rng, n);
                Gate::CP {
                    a,
                    b,
                    angle: Angle::new(rng.random_range(0.0..7.0)),
                }
            }
            _ => {
                let (c0, c1) = two_distinct(rng, n);
                let target = (0..n).find(|&t| t != c0 && t != c1).unwrap();
                Gate::CCX { c0, c1, target }
            }
        };
        c.push(g);
    }
    c.measure_all();
    c
}

/// Boolean simulation of an X/CX/CCX circuit; the measured clbit string.
pub fn classical_run(c: &Circuit) -> BitString {
    let mut bits = vec![false; c.num_qubits()];
    let mut out = BitString::zeros(c.num_clbits());
    for g in c.gates() {
        match *g {
            Gate::X(q) => bits[q] = !bits[q],
            Gate::CX { control, target } => bits[target] ^= bits[control],
            Gate::CCX { c0, c1, target } => bits[target] ^= bits[c0] & bits[c1],
            Gate::Measure { qubit, clbit } => out.set(clbit, bits[qubit]),
            Gate::Barrier(_) => {}
            _ => panic!("{g:?} is not reversible classical logic"),
        }
    }
    out
}

/// Ranks by counting: for each value, `1 + #smaller + (#equal - 1) / 2`.
pub fn brute_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&w| w < v).count() as f64;
            let equal = x.iter().filter(|&&w| w == v).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Textbook Pearson correlation of the brute-force ranks; 0 when either
/// side is constant.
pub fn brute_spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (brute_ranks(x), brute_ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

/// Total-variation distance between two distributions.
pub fn tv(a: &BTreeMap<BitString, f64>, b: &BTreeMap<BitString, f64>) -> f64 {
    let mut d = 0.0;
    for (s, p) in a {
        d += (p - b.get(s).copied().unwrap_or(0.0)).abs();
    }
    for (s, p) in b {
        if !a.contains_key(s) {
            d += p;
        }
    }
    d / 2.0
}

/// Probability of every clbit string of `c`, from its amplitudes.
pub fn dense_distribution(c: &Circuit) -> BTreeMap<BitString, f64> {
    quancorde::noisysim::ideal_distribution(c).expect("within oracle width")
}
