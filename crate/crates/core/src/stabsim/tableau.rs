//! Aaronson–Gottesman stabilizer tableau with bit-packed rows.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers, row `2n` is a
//! scratch row for deterministic measurements. Each row stores its X and Z
//! parts as `words = ceil(n / 64)` consecutive `u64`s, so row products run
//! a word at a time.

use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    // Sign bit per row: 0 for +, 1 for -.
    r: Vec<u8>,
}

/// Exponent of `i` (mod 4) picked up when multiplying the Pauli strings
/// `(x1, z1)` and `(x2, z2)` word by word, as a signed sum.
#[inline]
fn phase_sum(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> i64 {
    let mut sum = 0i64;
    for k in 0..x1.len() {
        let (a, b, c, d) = (x1[k], z1[k], x2[k], z2[k]);
        let plus = (a & b & !c & d) | (a & !b & c & d) | (!a & b & c & !d);
        let minus = (a & b & c & !d) | (a & !b & !c & d) | (!a & b & c & d);
        sum += plus.count_ones() as i64 - minus.count_ones() as i64;
    }
    sum
}

impl Tableau {
    /// The all-zeros state: destabilizer `i` is `X_i`, stabilizer `i` is `Z_i`.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut t = Tableau {
            n,
            words,
            x: vec![0; rows * words],
            z: vec![0; rows * words],
            r: vec![0; rows],
        };
        for i in 0..n {
            t.x[i * words + i / 64] |= 1 << (i % 64);
            t.z[(n + i) * words + i / 64] |= 1 << (i % 64);
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(words: &[u64], row: usize, w: usize, q: usize) -> bool {
        words[row * w + q / 64] >> (q % 64) & 1 == 1
    }

    // Gate kernels are branchless: on a scrambled tableau the bits they
    // read are random, so branches would mispredict half the time.

    pub fn h(&mut self, q: usize) {
        let (w, k, sh) = (self.words, q / 64, q % 64);
        let m = 1u64 << sh;
        for row in 0..2 * self.n {
            let i = row * w + k;
            let (x, z) = (self.x[i], self.z[i]);
            self.r[row] ^= ((x & z) >> sh & 1) as u8;
            let flip = (x ^ z) & m;
            self.x[i] = x ^ flip;
            self.z[i] = z ^ flip;
        }
    }

    pub fn s(&mut self, q: usize) {
        let (w, k, sh) = (self.words, q / 64, q % 64);
        let m = 1u64 << sh;
        for row in 0..2 * self.n {
            let i = row * w + k;
            let x = self.x[i];
            self.r[row] ^= ((x & self.z[i]) >> sh & 1) as u8;
            self.z[i] ^= x & m;
        }
    }

    /// √X: X → X, Z → −Y, Y → Z.
    pub fn sx(&mut self, q: usize) {
        let (w, k, sh) = (self.words, q / 64, q % 64);
        let m = 1u64 << sh;
        for row in 0..2 * self.n {
            let i = row * w + k;
            let z = self.z[i];
            self.r[row] ^= ((z & !self.x[i]) >> sh & 1) as u8;
            self.x[i] ^= z & m;
        }
    }

    pub fn x_gate(&mut self, q: usize) {
        let (w, k, sh) = (self.words, q / 64, q % 64);
        for row in 0..2 * self.n {
            self.r[row] ^= (self.z[row * w + k] >> sh & 1) as u8;
        }
    }

    pub fn z_gate(&mut self, q: usize) {
        let (w, k, sh) = (self.words, q / 64, q % 64);
        for row in 0..2 * self.n {
            self.r[row] ^= (self.x[row * w + k] >> sh & 1) as u8;
        }
    }

    pub fn cx(&mut self, a: usize, b: usize) {
        let w = self.words;
        let (ka, sa) = (a / 64, a % 64);
        let (kb, sb) = (b / 64, b % 64);
        for row in 0..2 * self.n {
            let base = row * w;
            let xa = self.x[base + ka] >> sa & 1;
            let za = self.z[base + ka] >> sa & 1;
            let xb = self.x[base + kb] >> sb & 1;
            let zb = self.z[base + kb] >> sb & 1;
            self.r[row] ^= (xa & zb & (xb ^ za ^ 1)) as u8;
            self.x[base + kb] ^= xa << sb;
            self.z[base + ka] ^= zb << sa;
        }
    }

    /// Left-multiply row `h` by row `i`, tracking the sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let (hs, is) = (h * w, i * w);
        let g = phase_sum(
            &self.x[is..is + w],
            &self.z[is..is + w],
            &self.x[hs..hs + w],
            &self.z[hs..hs + w],
        );
        let total = (2 * self.r[h] as i64 + 2 * self.r[i] as i64 + g).rem_euclid(4);
        // Destabilizer signs are never read, so an anticommuting product
        // (odd exponent) is harmless there.
        debug_assert!(h < self.n || total % 2 == 0, "rowsum of anticommuting rows");
        self.r[h] = (total >> 1) as u8;
        for k in 0..w {
            self.x[hs + k] ^= self.x[is + k];
            self.z[hs + k] ^= self.z[is + k];
        }
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.x.copy_within(src * w..src * w + w, dst * w);
        self.z.copy_within(src * w..src * w + w, dst * w);
        self.r[dst] = self.r[src];
    }

    /// The stabilizer row with an X component on `q`, if the Z-basis
    /// outcome on `q` is random.
    fn random_pivot(&self, q: usize) -> Option<usize> {
        (self.n..2 * self.n).find(|&p| Self::bit(&self.x, p, self.words, q))
    }

    /// Forced outcome of a Z measurement on `q` when it is deterministic.
    pub fn deterministic_outcome(&mut self, q: usize) -> Option<bool> {
        if self.random_pivot(q).is_some() {
            return None;
        }
        let (n, w) = (self.n, self.words);
        let scratch = 2 * n;
        self.x[scratch * w..scratch * w + w].fill(0);
        self.z[scratch * w..scratch * w + w].fill(0);
        self.r[scratch] = 0;
        for i in 0..n {
            if Self::bit(&self.x, i, w, q) {
                self.rowsum(scratch, i + n);
            }
        }
        Some(self.r[scratch] == 1)
    }

    /// Collapse a random measurement at pivot row `p` onto `outcome`.
    fn collapse(&mut self, q: usize, p: usize, outcome: bool) {
        let (n, w) = (self.n, self.words);
        for i in 0..2 * n {
            if i != p && Self::bit(&self.x, i, w, q) {
                self.rowsum(i, p);
            }
        }
        self.copy_row(p - n, p);
        self.x[p * w..p * w + w].fill(0);
        self.z[p * w..p * w + w].fill(0);
        self.z[p * w + q / 64] |= 1 << (q % 64);
        self.r[p] = outcome as u8;
    }

    /// Z-basis measurement of `q`. Returns `(bit, was_random)`; a random
    /// outcome is a fair coin from `rng`.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> (bool, bool) {
        match self.random_pivot(q) {
            Some(p) => {
                let bit = rng.random::<bool>();
                self.collapse(q, p, bit);
                (bit, true)
            }
            None => (self.deterministic_outcome(q).expect("no pivot"), false),
        }
    }

    /// Measure `q` with the outcome forced to `bit`. Returns the probability
    /// of that outcome: 1 or 0 if deterministic, 1/2 if random (and the
    /// state is conditioned on `bit`).
    pub fn measure_forced(&mut self, q: usize, bit: bool) -> f64 {
        match self.random_pivot(q) {
            Some(p) => {
                self.collapse(q, p, bit);
                0.5
            }
            None => {
                if self.deterministic_outcome(q) == Some(bit) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn symplectic(&self, i: usize, j: usize) -> bool {
        let w = self.words;
        let mut parity = 0u32;
        for k in 0..w {
            parity += (self.x[i * w + k] & self.z[j * w + k]).count_ones();
            parity += (self.z[i * w + k] & self.x[j * w + k]).count_ones();
        }
        parity % 2 == 1
    }

    /// Check the tableau invariants: stabilizers commute pairwise,
    /// destabilizer `i` anticommutes exactly with stabilizer `i`, and the
    /// `2n` rows have full rank over GF(2).
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if self.symplectic(n + i, n + j) {
                    return false;
                }
                if self.symplectic(i, n + j) != (i == j) {
                    return false;
                }
            }
        }
        self.rank() == 2 * n
    }

    fn rank(&self) -> usize {
        let (n, w) = (self.n, self.words);
        let mut rows: Vec<Vec<u64>> = (0..2 * n)
            .map(|i| {
                let mut v = self.x[i * w..i * w + w].to_vec();
                v.extend_from_slice(&self.z[i * w..i * w + w]);
                v
            })
            .collect();
        let mut rank = 0;
        for col in 0..2 * w * 64 {
            let (k, m) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][k] & m != 0) else {
                continue;
            };
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i][k] & m != 0 {
                    let pivot = rows[rank].clone();
                    for (a, b) in rows[i].iter_mut().zip(pivot) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_state_measures_zero() {
        let mut t = Tableau::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for q in 0..3 {
            assert_eq!(t.measure(q, &mut rng), (false, false));
        }
        assert!(t.is_valid());
    }

    #[test]
    fn x_flips_deterministically() {
        let mut t = Tableau::new(1);
        t.x_gate(0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(t.measure(0, &mut rng), (true, false));
    }

    #[test]
    fn superposition_is_random_then_repeatable() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mut t = Tableau::new(2);
            t.h(0);
            t.cx(0, 1);
            let (a, random) = t.measure(0, &mut rng);
            assert!(random);
            assert!(t.is_valid());
            assert_eq!(t.measure(0, &mut rng), (a, false));
            assert_eq!(t.measure(1, &mut rng), (a, false));
        }
    }

    #[test]
    fn sx_squares_to_x() {
        let mut t = Tableau::new(1);
        t.sx(0);
        t.sx(0);
        assert_eq!(t.deterministic_outcome(0), Some(true));
        let mut t = Tableau::new(1);
        t.sx(0);
        assert_eq!(t.deterministic_outcome(0), None);
    }

    #[test]
    fn forced_measurement() {
        let mut t = Tableau::new(2);
        t.h(0);
        t.cx(0, 1);
        assert_eq!(t.measure_forced(0, true), 0.5);
        assert_eq!(t.measure_forced(1, false), 0.0);
        assert_eq!(t.measure_forced(1, true), 1.0);
    }

    #[test]
    fn wide_register_crosses_word_boundaries() {
        let mut t = Tableau::new(130);
        t.x_gate(129);
        t.h(64);
        t.cx(64, 129);
        t.cx(129, 3);
        assert!(t.is_valid());
        assert_eq!(t.deterministic_outcome(0), Some(false));
        assert_eq!(t.deterministic_outcome(64), None);
    }
}
