use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimError;

/// Largest probability produced by jitter or scaling.
pub const MAX_RATE: f64 = 0.5;

/// Uniform error rates used to build a [`NoiseModel`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaseRates {
    pub p1: f64,
    pub p2: f64,
    pub idle_z: f64,
    pub ro01: f64,
    pub ro10: f64,
}

impl Default for BaseRates {
    fn default() -> Self {
        BaseRates {
            p1: 3e-4,
            p2: 8e-3,
            idle_z: 1e-3,
            ro01: 1.5e-2,
            ro10: 1.5e-2,
        }
    }
}

impl BaseRates {
    pub fn zero() -> Self {
        BaseRates {
            p1: 0.0,
            p2: 0.0,
            idle_z: 0.0,
            ro01: 0.0,
            ro10: 0.0,
        }
    }

    /// Every rate multiplied by `factor`, capped at [`MAX_RATE`].
    pub fn scaled(&self, factor: f64) -> Self {
        let f = |x: f64| (x * factor).clamp(0.0, MAX_RATE);
        BaseRates {
            p1: f(self.p1),
            p2: f(self.p2),
            idle_z: f(self.idle_z),
            ro01: f(self.ro01),
            ro10: f(self.ro10),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRate {
    pub a: usize,
    pub b: usize,
    pub p: f64,
}

/// Error parameters of one simulated machine.
///
/// `p1[q]` is the depolarizing probability after each single-qubit gate on
/// `q`, `p2` the two-qubit depolarizing probability per coupled pair,
/// `idle_z[q]` the dephasing probability per CX layer in which `q` idles,
/// and `ro01`/`ro10` the readout flip probabilities P(1|0) and P(0|1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub num_qubits: usize,
    pub p1: Vec<f64>,
    /// Sorted by `(a, b)` with `a < b`.
    pub p2: Vec<EdgeRate>,
    pub idle_z: Vec<f64>,
    pub ro01: Vec<f64>,
    pub ro10: Vec<f64>,
}

impl NoiseModel {
    /// The same rates on every qubit and on every listed pair.
    pub fn uniform(
        num_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        rates: &BaseRates,
    ) -> Self {
        let mut p2: Vec<EdgeRate> = edges
            .into_iter()
            .map(|(a, b)| EdgeRate {
                a: a.min(b),
                b: a.max(b),
                p: rates.p2,
            })
            .collect();
        p2.sort_by_key(|e| (e.a, e.b));
        p2.dedup_by_key(|e| (e.a, e.b));
        NoiseModel {
            num_qubits,
            p1: vec![rates.p1; num_qubits],
            p2,
            idle_z: vec![rates.idle_z; num_qubits],
            ro01: vec![rates.ro01; num_qubits],
            ro10: vec![rates.ro10; num_qubits],
        }
    }

    /// Uniform rates over every pair of qubits.
    pub fn all_to_all(num_qubits: usize, rates: &BaseRates) -> Self {
        let pairs = (0..num_qubits).flat_map(|a| (a + 1..num_qubits).map(move |b| (a, b)));
        Self::uniform(num_qubits, pairs, rates)
    }

    pub fn noiseless(num_qubits: usize) -> Self {
        Self::all_to_all(num_qubits, &BaseRates::zero())
    }

    pub fn p2_for(&self, a: usize, b: usize) -> Option<f64> {
        let key = (a.min(b), a.max(b));
        self.p2
            .binary_search_by_key(&key, |e| (e.a, e.b))
            .ok()
            .map(|i| self.p2[i].p)
    }

    /// Every probability multiplied by `factor`, capped at [`MAX_RATE`].
    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|x| (x * factor).clamp(0.0, MAX_RATE))
    }

    fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        let mut m = self.clone();
        for v in m
            .p1
            .iter_mut()
            .chain(m.p2.iter_mut().map(|e| &mut e.p))
            .chain(m.idle_z.iter_mut())
            .chain(m.ro01.iter_mut())
            .chain(m.ro10.iter_mut())
        {
            *v = f(*v);
        }
        m
    }

    /// Mean of the per-pair two-qubit rates.
    pub fn mean_p2(&self) -> f64 {
        if self.p2.is_empty() {
            return 0.0;
        }
        self.p2.iter().map(|e| e.p).sum::<f64>() / self.p2.len() as f64
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let n = self.num_qubits;
        for (name, v) in [
            ("p1", &self.p1),
            ("idle_z", &self.idle_z),
            ("ro01", &self.ro01),
            ("ro10", &self.ro10),
        ] {
            if v.len() != n {
                return Err(SimError::ModelShape {
                    field: name,
                    len: v.len(),
                    num_qubits: n,
                });
            }
            check_prob(name, v.iter().copied())?;
        }
        check_prob("p2", self.p2.iter().map(|e| e.p))?;
        for w in self.p2.windows(2) {
            if (w[0].a, w[0].b) >= (w[1].a, w[1].b) {
                return Err(SimError::UnsortedEdges);
            }
        }
        for e in &self.p2 {
            if e.a >= e.b || e.b >= n {
                return Err(SimError::BadEdge(e.a, e.b));
            }
        }
        Ok(())
    }
}

fn check_prob(field: &'static str, mut it: impl Iterator<Item = f64>) -> Result<(), SimError> {
    match it.find(|p| !(0.0..=1.0).contains(p)) {
        Some(value) => Err(SimError::Probability { field, value }),
        None => Ok(()),
    }
}

/// `count` jittered copies of `base`: every parameter of every member is
/// multiplied by an independent factor uniform on `[1/jitter, jitter]`, then
/// capped at [`MAX_RATE`].
pub fn make_diverse_ensemble(
    base: &NoiseModel,
    count: usize,
    jitter: f64,
    seed: u64,
) -> Vec<NoiseModel> {
    assert!(jitter >= 1.0, "jitter must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            base.map(|x| {
                let u = if jitter > 1.0 {
                    rng.random_range(1.0 / jitter..=jitter)
                } else {
                    1.0
                };
                (x * u).clamp(0.0, MAX_RATE)
            })
        })
        .collect()
}
