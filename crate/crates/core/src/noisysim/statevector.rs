//! Dense statevector kernels. Qubit `q` is bit `q` of the basis index.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::SimError;
use crate::circuit::{BitString, Circuit, Gate};

pub type C64 = Complex64;
pub(crate) type Mat2 = [[C64; 2]; 2];

/// Width limit of the noiseless oracle.
pub const MAX_STATEVECTOR_WIDTH: usize = 20;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn diag(d0: C64, d1: C64) -> Mat2 {
    [[d0, ZERO], [ZERO, d1]]
}

fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Matrix of a single-qubit gate, `None` for anything else.
pub(crate) fn matrix_1q(g: &Gate) -> Option<Mat2> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let pp = C64::new(0.5, 0.5);
    let pm = C64::new(0.5, -0.5);
    Some(match *g {
        Gate::X(_) => [[ZERO, ONE], [ONE, ZERO]],
        Gate::SX(_) => [[pp, pm], [pm, pp]],
        Gate::RZ(_, a) => diag(phase(-a.radians() / 2.0), phase(a.radians() / 2.0)),
        Gate::H(_) => [[h, h], [h, -h]],
        Gate::S(_) => diag(ONE, C64::i()),
        Gate::Sdg(_) => diag(ONE, -C64::i()),
        Gate::T(_) => diag(ONE, phase(std::f64::consts::FRAC_PI_4)),
        Gate::Tdg(_) => diag(ONE, phase(-std::f64::consts::FRAC_PI_4)),
        _ => return None,
    })
}

/// `X^x Z^z`, the Pauli applied for a sampled error component.
pub(crate) fn pauli(x: bool, z: bool) -> Mat2 {
    let zm = if z { diag(ONE, -ONE) } else { IDENTITY };
    if x {
        mat_mul(&[[ZERO, ONE], [ONE, ZERO]], &zm)
    } else {
        zm
    }
}

pub(crate) fn is_diagonal(m: &Mat2) -> bool {
    m[0][1] == ZERO && m[1][0] == ZERO
}

pub(crate) fn apply_1q(psi: &mut [C64], q: usize, m: &Mat2) {
    let s = 1usize << q;
    if is_diagonal(m) {
        let (d0, d1) = (m[0][0], m[1][1]);
        for chunk in psi.chunks_exact_mut(2 * s) {
            let (lo, hi) = chunk.split_at_mut(s);
            if d0 != ONE {
                lo.iter_mut().for_each(|a| *a *= d0);
            }
            hi.iter_mut().for_each(|a| *a *= d1);
        }
        return;
    }
    for chunk in psi.chunks_exact_mut(2 * s) {
        let (lo, hi) = chunk.split_at_mut(s);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    }
}

pub(crate) fn apply_x(psi: &mut [C64], q: usize) {
    let s = 1usize << q;
    for chunk in psi.chunks_exact_mut(2 * s) {
        let (lo, hi) = chunk.split_at_mut(s);
        lo.swap_with_slice(hi);
    }
}

pub(crate) fn apply_z(psi: &mut [C64], q: usize) {
    let s = 1usize << q;
    for chunk in psi.chunks_exact_mut(2 * s) {
        chunk[s..].iter_mut().for_each(|a| *a = -*a);
    }
}

pub(crate) fn apply_cx(psi: &mut [C64], c: usize, t: usize) {
    let (cm, tm) = (1usize << c, 1usize << t);
    let (lo, hi) = (cm.min(tm), cm.max(tm));
    // Visit only indices with the control set and the target clear.
    for base in (0..psi.len()).step_by(2 * hi) {
        for mid in (base..base + hi).step_by(2 * lo) {
            for i in mid..mid + lo {
                let i = i | cm;
                psi.swap(i, i | tm);
            }
        }
    }
}

fn apply_ccx(psi: &mut [C64], c0: usize, c1: usize, t: usize) {
    let (m0, m1, tm) = (1usize << c0, 1usize << c1, 1usize << t);
    for i in 0..psi.len() {
        if i & m0 != 0 && i & m1 != 0 && i & tm == 0 {
            psi.swap(i, i | tm);
        }
    }
}

fn apply_cp(psi: &mut [C64], a: usize, b: usize, theta: f64) {
    let mask = (1usize << a) | (1usize << b);
    let ph = phase(theta);
    for (i, amp) in psi.iter_mut().enumerate() {
        if i & mask == mask {
            *amp *= ph;
        }
    }
}

fn apply_swap(psi: &mut [C64], a: usize, b: usize) {
    let (am, bm) = (1usize << a, 1usize << b);
    for i in 0..psi.len() {
        if i & am != 0 && i & bm == 0 {
            psi.swap(i, i ^ am ^ bm);
        }
    }
}

/// Apply any non-measurement gate of the IR.
pub(crate) fn apply_gate(psi: &mut [C64], g: &Gate) {
    if let Some(m) = matrix_1q(g) {
        apply_1q(psi, g.qubits()[0], &m);
        return;
    }
    match *g {
        Gate::CX { control, target } => apply_cx(psi, control, target),
        Gate::CCX { c0, c1, target } => apply_ccx(psi, c0, c1, target),
        Gate::CP { a, b, angle } => apply_cp(psi, a, b, angle.radians()),
        Gate::Swap(a, b) => apply_swap(psi, a, b),
        Gate::Measure { .. } | Gate::Barrier(_) => {}
        _ => unreachable!("single-qubit gates handled above"),
    }
}

/// Final state of `c` on `|0…0⟩`, ignoring measurements. Accepts the full
/// source gate set.
pub fn statevector(c: &Circuit) -> Result<Vec<C64>, SimError> {
    c.validate(false)?;
    let n = c.num_qubits();
    if n > MAX_STATEVECTOR_WIDTH {
        return Err(SimError::TooWide {
            width: n,
            limit: MAX_STATEVECTOR_WIDTH,
        });
    }
    let mut psi = vec![ZERO; 1 << n];
    psi[0] = ONE;
    for g in c.gates() {
        apply_gate(&mut psi, g);
    }
    Ok(psi)
}

/// Exact distribution over clbit strings of the noiseless circuit.
/// Measurements are treated as deferred to the end, which is exact because
/// a measured qubit is never operated on again. Entries below 1e-15 are
/// dropped.
pub fn ideal_distribution(c: &Circuit) -> Result<BTreeMap<BitString, f64>, SimError> {
    let psi = statevector(c)?;
    let measures = c.measurements();
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    for (i, amp) in psi.iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let key = measures
            .iter()
            .enumerate()
            .fold(0u64, |k, (j, &(q, _))| k | (((i >> q) & 1) as u64) << j);
        *acc.entry(key).or_insert(0.0) += p;
    }
    Ok(acc
        .into_iter()
        .filter(|&(_, p)| p >= 1e-15)
        .map(|(key, p)| {
            let mut s = BitString::zeros(c.num_clbits());
            for (j, &(_, clbit)) in measures.iter().enumerate() {
                s.set(clbit, key >> j & 1 == 1);
            }
            (s, p)
        })
        .collect())
}
