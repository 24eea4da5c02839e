//! Clifford canaries: copies of a basis circuit with every RZ angle snapped
//! to a multiple of π/2.
//!
//! In the basis `{X, SX, RZ, CX}` the only non-Clifford freedom is the RZ
//! angle, so rounding angles alone yields a classically simulable circuit
//! with the exact same gate positions, CX placement and measurement map.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Angle, Circuit, Gate};

/// Angle tolerance for deciding that an RZ is a Clifford rotation.
pub const CLIFFORD_TOLERANCE: f64 = 1e-12;

const QUARTER_TURNS: [f64; 4] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CanaryError {
    #[error("gate {index} ({name}) is not in the device basis")]
    NotBasis { index: usize, name: &'static str },
}

fn require_basis(c: &Circuit) -> Result<(), CanaryError> {
    match c.gates().iter().enumerate().find(|(_, g)| !g.is_basis()) {
        Some((index, g)) => Err(CanaryError::NotBasis {
            index,
            name: g.name(),
        }),
        None => Ok(()),
    }
}

/// `Some(k)` when `angle` is `k·π/2` (mod 2π) within [`CLIFFORD_TOLERANCE`].
pub fn quarter_turns(angle: Angle) -> Option<u8> {
    let x = angle.radians() / FRAC_PI_2;
    let k = x.round();
    ((x - k).abs() * FRAC_PI_2 <= CLIFFORD_TOLERANCE).then(|| (k as i64).rem_euclid(4) as u8)
}

/// Nearest multiple of π/2. Midpoints (θ ≡ π/4 mod π/2) round up.
pub fn round_to_clifford(angle: Angle) -> Angle {
    let x = angle.radians() / FRAC_PI_2;
    let lower = x.floor();
    let frac = x - lower;
    let k = if (frac - 0.5).abs() * FRAC_PI_2 <= CLIFFORD_TOLERANCE || frac > 0.5 {
        lower + 1.0
    } else {
        lower
    };
    Angle::new(QUARTER_TURNS[(k as i64).rem_euclid(4) as usize])
}

/// Nearest-Clifford canary of a basis circuit. Only RZ angles change.
pub fn make_canary(c: &Circuit) -> Result<Circuit, CanaryError> {
    require_basis(c)?;
    let gates = c
        .gates()
        .iter()
        .map(|g| match *g {
            Gate::RZ(q, a) => Gate::RZ(q, round_to_clifford(a)),
            _ => g.clone(),
        })
        .collect();
    let mut out = Circuit::from_gates(c.num_qubits(), c.num_clbits(), gates);
    out.name = format!("{}-canary", c.name);
    Ok(out)
}

/// Same structure with every RZ replaced by a uniformly random multiple of
/// π/2. Used as the "random Clifford" ablation baseline.
pub fn make_random_canary(c: &Circuit, seed: u64) -> Result<Circuit, CanaryError> {
    require_basis(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates = c
        .gates()
        .iter()
        .map(|g| match *g {
            Gate::RZ(q, _) => Gate::RZ(q, Angle::new(QUARTER_TURNS[rng.random_range(0..4)])),
            _ => g.clone(),
        })
        .collect();
    let mut out = Circuit::from_gates(c.num_qubits(), c.num_clbits(), gates);
    out.name = format!("{}-random-canary", c.name);
    Ok(out)
}

/// True iff every RZ angle is a multiple of π/2 within 1e-12 rad.
pub fn is_clifford(c: &Circuit) -> Result<bool, CanaryError> {
    require_basis(c)?;
    Ok(c.gates().iter().all(|g| match *g {
        Gate::RZ(_, a) => quarter_turns(a).is_some(),
        _ => true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, TAU};

    fn rz_angles(c: &Circuit) -> Vec<f64> {
        c.gates()
            .iter()
            .filter_map(|g| match g {
                Gate::RZ(_, a) => Some(a.radians()),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn rounding_rule() {
        let mut c = Circuit::new(1, 0);
        c.rz(0, 0.2)
            .rz(0, FRAC_PI_4)
            .rz(0, 7.0 * FRAC_PI_4)
            .rz(0, 3.0 * FRAC_PI_4)
            .rz(0, 1.0)
            .rz(0, TAU - 0.1);
        let k = make_canary(&c).unwrap();
        assert_eq!(
            rz_angles(&k),
            vec![0.0, FRAC_PI_2, 0.0, PI, FRAC_PI_2, 0.0]
        );
    }

    #[test]
    fn clifford_circuit_is_its_own_canary() {
        let mut c = Circuit::new(2, 2);
        c.x(0).sx(1).rz(0, PI).rz(1, 3.0 * FRAC_PI_2).cx(0, 1).measure_all();
        assert!(is_clifford(&c).unwrap());
        let k = make_canary(&c).unwrap();
        assert_eq!(k, c);
        assert_eq!(make_canary(&k).unwrap(), k);
    }

    #[test]
    fn cliffordness() {
        let mut c = Circuit::new(2, 0);
        c.x(0).sx(1).cx(0, 1);
        assert!(is_clifford(&c).unwrap());
        c.rz(1, FRAC_PI_4);
        assert!(!is_clifford(&c).unwrap());
        assert!(is_clifford(&make_canary(&c).unwrap()).unwrap());

        let mut src = Circuit::new(1, 0);
        src.h(0);
        assert!(matches!(is_clifford(&src), Err(CanaryError::NotBasis { index: 0, name: "h" })));
        assert!(make_canary(&src).is_err());
    }

    #[test]
    fn random_canary_is_clifford_and_seeded() {
        let mut c = Circuit::new(2, 0);
        for i in 0..20 {
            c.rz(i % 2, 0.1 * i as f64).cx(0, 1);
        }
        let a = make_random_canary(&c, 5).unwrap();
        assert!(is_clifford(&a).unwrap());
        assert_eq!(a, make_random_canary(&c, 5).unwrap());
        assert_eq!(a.cx_count(), c.cx_count());
    }
}
