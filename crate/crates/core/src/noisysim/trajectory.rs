//! Monte-Carlo noisy trajectories.
//!
//! A circuit is compiled once per (circuit, model) pair into a list of
//! elementary gates on the active qubits plus a list of noise *sites*, each
//! an independent Bernoulli event. Per shot the events are drawn first, by
//! inverting the cumulative hazard, so shots without any event never touch
//! the state and shots with events start from the noiseless checkpoint
//! just before the first one.
//!
//! Clifford circuits skip state evolution altogether: a Pauli error commutes
//! through the rest of the circuit to a fixed flip of the measured bits, so
//! each site carries precomputed flip masks and the ideal outcome is drawn
//! from the stabilizer state's affine support.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::statevector::{
    apply_1q, apply_cx, apply_x, apply_z, is_diagonal, mat_mul, matrix_1q, pauli, Mat2, C64,
    IDENTITY,
};
use super::{Counts, NoiseModel, SimError};
use crate::canary::quarter_turns;
use crate::circuit::{BitString, Circuit, Gate};
use crate::stabsim::Tableau;

/// Width limit for noisy runs, counted over the qubits a circuit touches.
pub const MAX_NOISY_WIDTH: usize = 16;

const CHECKPOINT_BYTES: usize = 64 << 20;
const BATCH: u64 = 256;
// Keeps the hazard finite for a probability of exactly 1.
const MAX_SITE_PROB: f64 = 1.0 - 1e-12;
// States with at most `dim / SPARSE_DIVISOR` nonzero amplitudes stay sparse.
const SPARSE_DIVISOR: usize = 8;
// Squared magnitude below which a sparse amplitude is dropped.
const PRUNE: f64 = 1e-30;
const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug)]
enum Elem {
    One(usize, Gate),
    Cx(usize, usize),
}

#[derive(Clone, Copy, Debug)]
enum SiteKind {
    One(usize),
    Two(usize, usize),
    Idle(usize),
}

#[derive(Clone, Copy, Debug)]
struct Site {
    // The error acts right after this element.
    elem: usize,
    kind: SiteKind,
}

/// X and Z components of a sampled Pauli on one qubit.
#[derive(Clone, Copy, Debug)]
struct Component {
    q: usize,
    x: bool,
    z: bool,
}

fn components(kind: SiteKind, choice: u8) -> ([Option<Component>; 2], usize) {
    let part = |q, bits: u8| Component {
        q,
        x: bits & 1 == 1,
        z: bits & 2 == 2,
    };
    match kind {
        SiteKind::One(q) => ([Some(part(q, choice)), None], 1),
        SiteKind::Idle(q) => ([Some(part(q, 2)), None], 1),
        SiteKind::Two(a, b) => ([Some(part(a, choice & 3)), Some(part(b, choice >> 2))], 2),
    }
}

struct Frame {
    // Per site: flip masks for X_a, Z_a, X_b, Z_b.
    masks: Vec<[u32; 4]>,
    v0: u32,
    basis: Vec<u32>,
}

enum Block {
    One { q: usize, mats: Vec<Mat2>, fused: Mat2 },
    Cx(usize, usize),
}

struct Dense {
    n: usize,
    blocks: Vec<Block>,
    // Per site and component: (block, number of block constituents before it).
    locs: Vec<[(usize, usize); 2]>,
    stride: usize,
    checkpoints: Vec<Vec<C64>>,
    cdf: Vec<f64>,
    keys: Vec<u32>,
    sparse_limit: usize,
}

/// Per-thread state buffer. While few amplitudes are nonzero the state is a
/// list of `(index, amplitude)` pairs, so permutation-heavy circuits cost
/// per nonzero entry instead of per basis state.
#[derive(Default)]
struct Work {
    dense: Vec<C64>,
    sparse: Vec<(usize, C64)>,
    tmp: Vec<(usize, usize, C64)>,
    is_sparse: bool,
    limit: usize,
}

impl Work {
    fn load(&mut self, start: &[C64], limit: usize) {
        self.limit = limit;
        self.sparse.clear();
        if limit > 0 {
            for (i, &a) in start.iter().enumerate() {
                if a.norm_sqr() > PRUNE {
                    self.sparse.push((i, a));
                    if self.sparse.len() > limit {
                        break;
                    }
                }
            }
        }
        self.is_sparse = limit > 0 && self.sparse.len() <= limit;
        self.dense.clear();
        if !self.is_sparse {
            self.dense.extend_from_slice(start);
        } else {
            self.dense.resize(start.len(), ZERO);
        }
    }

    fn densify(&mut self) {
        self.dense.iter_mut().for_each(|a| *a = ZERO);
        for &(i, a) in &self.sparse {
            self.dense[i] = a;
        }
        self.is_sparse = false;
    }

    fn one(&mut self, q: usize, m: &Mat2) {
        if !self.is_sparse {
            apply_1q(&mut self.dense, q, m);
            return;
        }
        let qm = 1usize << q;
        if is_diagonal(m) {
            for (i, a) in &mut self.sparse {
                let b = *i >> q & 1;
                *a *= m[b][b];
            }
        } else if m[0][0] == ZERO && m[1][1] == ZERO {
            for (i, a) in &mut self.sparse {
                let b = *i >> q & 1;
                *a *= m[1 - b][b];
                *i ^= qm;
            }
        } else {
            // Sum contributions in the dense kernel's order: bit-0 source first.
            self.tmp.clear();
            for &(i, a) in &self.sparse {
                let (b, i0) = (i >> q & 1, i & !qm);
                self.tmp.push((i0, b, m[0][b] * a));
                self.tmp.push((i0 | qm, b, m[1][b] * a));
            }
            self.tmp.sort_unstable_by_key(|&(i, b, _)| (i, b));
            self.sparse.clear();
            let mut k = 0;
            while k < self.tmp.len() {
                let (i, _, mut a) = self.tmp[k];
                k += 1;
                while k < self.tmp.len() && self.tmp[k].0 == i {
                    a += self.tmp[k].2;
                    k += 1;
                }
                if a.norm_sqr() > PRUNE {
                    self.sparse.push((i, a));
                }
            }
            if self.sparse.len() > self.limit {
                self.densify();
            }
        }
    }

    fn cx(&mut self, c: usize, t: usize) {
        if !self.is_sparse {
            apply_cx(&mut self.dense, c, t);
            return;
        }
        for (i, _) in &mut self.sparse {
            if *i >> c & 1 == 1 {
                *i ^= 1 << t;
            }
        }
    }

    fn x(&mut self, q: usize) {
        if !self.is_sparse {
            apply_x(&mut self.dense, q);
            return;
        }
        self.sparse.iter_mut().for_each(|(i, _)| *i ^= 1 << q);
    }

    fn z(&mut self, q: usize) {
        if !self.is_sparse {
            apply_z(&mut self.dense, q);
            return;
        }
        for (i, a) in &mut self.sparse {
            if *i >> q & 1 == 1 {
                *a = -*a;
            }
        }
    }

    fn block(&mut self, block: &Block) {
        match block {
            Block::One { q, fused, .. } => self.one(*q, fused),
            Block::Cx(c, t) => self.cx(*c, *t),
        }
    }

    /// Basis index drawn by scanning cumulative probabilities in index order.
    fn sample(&mut self, u: f64) -> usize {
        let mut acc = 0.0;
        let mut last = 0;
        let mut scan = |i: usize, a: C64| {
            let p = a.norm_sqr();
            if p > 0.0 {
                last = i;
                acc += p;
                return acc > u;
            }
            false
        };
        if self.is_sparse {
            self.sparse.sort_unstable_by_key(|&(i, _)| i);
            for &(i, a) in &self.sparse {
                if scan(i, a) {
                    return i;
                }
            }
        } else {
            for (i, &a) in self.dense.iter().enumerate() {
                if scan(i, a) {
                    return i;
                }
            }
        }
        last
    }
}

enum Engine {
    Frame(Frame),
    Dense(Dense),
}

/// A circuit and noise model compiled for repeated sampling.
pub struct NoisyProgram {
    sites: Vec<Site>,
    hazard: Vec<f64>,
    // Measured compact qubit per key bit, and the clbit it lands in.
    measures: Vec<(usize, usize)>,
    ro01: Vec<f64>,
    ro10: Vec<f64>,
    num_clbits: usize,
    engine: Engine,
}

impl NoisyProgram {
    pub fn compile(c: &Circuit, m: &NoiseModel) -> Result<Self, SimError> {
        Self::compile_with(c, m, false)
    }

    fn compile_with(c: &Circuit, m: &NoiseModel, force_dense: bool) -> Result<Self, SimError> {
        c.validate(true)?;
        m.validate()?;
        if m.num_qubits < c.num_qubits() {
            return Err(SimError::ModelTooSmall {
                model: m.num_qubits,
                circuit: c.num_qubits(),
            });
        }
        let active = c.active_qubits();
        if active.len() > MAX_NOISY_WIDTH {
            return Err(SimError::TooWide {
                width: active.len(),
                limit: MAX_NOISY_WIDTH,
            });
        }
        let mut compact = vec![usize::MAX; c.num_qubits()];
        for (i, &q) in active.iter().enumerate() {
            compact[q] = i;
        }
        let n = active.len();

        let mut elems = Vec::new();
        let mut raw: Vec<(Site, f64)> = Vec::new();
        let mut measures = Vec::new();
        let (mut ro01, mut ro10) = (Vec::new(), Vec::new());
        let mut first_elem = vec![usize::MAX; n];
        let mut busy = 0u32;
        // Idle dephasing for a closed CX layer. Z on a qubit still in |0⟩
        // is a global phase, so those sites are skipped.
        let close_layer = |busy: u32, elem: usize, first_elem: &[usize], raw: &mut Vec<(Site, f64)>| {
            for q in (0..n).filter(|&q| busy >> q & 1 == 0 && first_elem[q] <= elem) {
                let kind = SiteKind::Idle(q);
                raw.push((Site { elem, kind }, m.idle_z[active[q]]));
            }
        };
        for g in c.gates() {
            match *g {
                Gate::Measure { qubit, clbit } => {
                    measures.push((compact[qubit], clbit));
                    ro01.push(m.ro01[qubit]);
                    ro10.push(m.ro10[qubit]);
                }
                Gate::Barrier(_) => {}
                Gate::CX { control, target } => {
                    let p = m
                        .p2_for(control, target)
                        .ok_or(SimError::MissingEdge(control, target))?;
                    let (a, b) = (compact[control], compact[target]);
                    let bits = (1u32 << a) | (1u32 << b);
                    if busy & bits != 0 {
                        close_layer(busy, elems.len() - 1, &first_elem, &mut raw);
                        busy = 0;
                    }
                    busy |= bits;
                    for q in [a, b] {
                        first_elem[q] = first_elem[q].min(elems.len());
                    }
                    let elem = elems.len();
                    elems.push(Elem::Cx(a, b));
                    raw.push((Site { elem, kind: SiteKind::Two(a, b) }, p));
                }
                _ => {
                    let phys = g.qubits()[0];
                    let q = compact[phys];
                    let elem = elems.len();
                    first_elem[q] = first_elem[q].min(elem);
                    elems.push(Elem::One(q, g.map_qubits(|_| q)));
                    raw.push((Site { elem, kind: SiteKind::One(q) }, m.p1[phys]));
                }
            }
        }
        if busy != 0 {
            close_layer(busy, elems.len() - 1, &first_elem, &mut raw);
        }
        let (sites, probs): (Vec<Site>, Vec<f64>) = raw.into_iter().filter(|&(_, p)| p > 0.0).unzip();

        let mut hazard = Vec::with_capacity(probs.len());
        let mut h = 0.0;
        for &p in &probs {
            h += -(1.0 - p.min(MAX_SITE_PROB)).ln();
            hazard.push(h);
        }

        let clifford = elems.iter().all(|e| match e {
            Elem::One(_, Gate::RZ(_, a)) => quarter_turns(*a).is_some(),
            _ => true,
        });
        let engine = if clifford && !force_dense && measures.len() <= 32 {
            Engine::Frame(build_frame(n, &elems, &sites, &measures))
        } else {
            Engine::Dense(build_dense(n, &elems, &sites, &measures))
        };
        Ok(NoisyProgram {
            sites,
            hazard,
            measures,
            ro01,
            ro10,
            num_clbits: c.num_clbits(),
            engine,
        })
    }

    /// Mean number of gate and idle error events per shot.
    pub fn expected_events(&self) -> f64 {
        self.hazard.last().copied().unwrap_or(0.0)
    }

    fn sample_events(&self, rng: &mut ChaCha8Rng, out: &mut Vec<(usize, u8)>) {
        out.clear();
        let h = &self.hazard;
        let (mut base, mut start) = (0.0, 0);
        loop {
            let u: f64 = rng.random();
            let target = base - (1.0 - u).ln();
            let k = start + h[start..].partition_point(|&x| x <= target);
            if k >= h.len() {
                return;
            }
            let choice = match self.sites[k].kind {
                SiteKind::One(_) => rng.random_range(1..4u8),
                SiteKind::Two(..) => rng.random_range(1..16u8),
                SiteKind::Idle(_) => 2,
            };
            out.push((k, choice));
            base = h[k];
            start = k + 1;
        }
    }

    fn shot(&self, shot: u64, seed: u64, events: &mut Vec<(usize, u8)>, work: &mut Work) -> u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shot);
        self.sample_events(&mut rng, events);
        let mut key = match &self.engine {
            Engine::Frame(f) => f.shot(&mut rng, &self.sites, events),
            Engine::Dense(d) => d.shot(&mut rng, &self.sites, events, work),
        };
        for j in 0..self.measures.len() {
            let p = if key >> j & 1 == 0 {
                self.ro01[j]
            } else {
                self.ro10[j]
            };
            if p > 0.0 && rng.random::<f64>() < p {
                key ^= 1 << j;
            }
        }
        key
    }

    /// Sample `shots` noisy shots. Shot `i` uses stream `i` of `seed`.
    pub fn run(&self, shots: u64, seed: u64) -> Counts {
        let batches = shots.div_ceil(BATCH);
        let hist = (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut hist: HashMap<u32, u64> = HashMap::new();
                let mut events = Vec::new();
                let mut work = Work::default();
                for shot in b * BATCH..((b + 1) * BATCH).min(shots) {
                    *hist.entry(self.shot(shot, seed, &mut events, &mut work)).or_insert(0) += 1;
                }
                hist
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            });
        let mut counts = Counts::new(self.num_clbits);
        for (key, n) in hist {
            let mut s = BitString::zeros(self.num_clbits);
            for (j, &(_, clbit)) in self.measures.iter().enumerate() {
                s.set(clbit, key >> j & 1 == 1);
            }
            counts.add(s, n);
        }
        counts
    }
}

fn build_frame(n: usize, elems: &[Elem], sites: &[Site], measures: &[(usize, usize)]) -> Frame {
    // Heisenberg-propagate each measured Z backwards; an error flips bit j
    // iff it anticommutes with observable j at its position.
    let mut obs: Vec<(u32, u32)> = measures.iter().map(|&(q, _)| (0, 1u32 << q)).collect();
    let mut masks = vec![[0u32; 4]; sites.len()];
    let mut next = sites.len();
    for e in (0..elems.len()).rev() {
        while next > 0 && sites[next - 1].elem == e {
            next -= 1;
            let mask_of = |q: usize| {
                let (mut mx, mut mz) = (0u32, 0u32);
                for (j, &(ox, oz)) in obs.iter().enumerate() {
                    mx |= (oz >> q & 1) << j;
                    mz |= (ox >> q & 1) << j;
                }
                (mx, mz)
            };
            masks[next] = match sites[next].kind {
                SiteKind::One(q) | SiteKind::Idle(q) => {
                    let (mx, mz) = mask_of(q);
                    [mx, mz, 0, 0]
                }
                SiteKind::Two(a, b) => {
                    let (ax, az) = mask_of(a);
                    let (bx, bz) = mask_of(b);
                    [ax, az, bx, bz]
                }
            };
        }
        for (ox, oz) in obs.iter_mut() {
            match elems[e] {
                Elem::One(q, Gate::SX(_)) => {
                    if *oz >> q & 1 == 1 {
                        *ox ^= 1 << q;
                    }
                }
                Elem::One(q, Gate::RZ(_, a)) if quarter_turns(a).is_some_and(|k| k % 2 == 1) => {
                    if *ox >> q & 1 == 1 {
                        *oz ^= 1 << q;
                    }
                }
                Elem::Cx(c, t) => {
                    if *ox >> c & 1 == 1 {
                        *ox ^= 1 << t;
                    }
                    if *oz >> t & 1 == 1 {
                        *oz ^= 1 << c;
                    }
                }
                _ => {}
            }
        }
    }

    // Outcomes of a stabilizer state form an affine space: record the
    // all-random-bits-zero outcome and the effect of each random bit.
    let mut t = Tableau::new(n);
    for e in elems {
        match *e {
            Elem::One(_, ref g) => {
                crate::stabsim::apply_clifford(&mut t, g);
            }
            Elem::Cx(c, tq) => t.cx(c, tq),
        }
    }
    let replay = |flip: Option<usize>| {
        let mut t = t.clone();
        let mut key = 0u32;
        let mut random = Vec::new();
        for (j, &(q, _)) in measures.iter().enumerate() {
            let bit = match t.deterministic_outcome(q) {
                Some(b) => b,
                None => {
                    let b = flip == Some(random.len());
                    random.push(j);
                    t.measure_forced(q, b);
                    b
                }
            };
            key |= (bit as u32) << j;
        }
        (key, random.len())
    };
    let (v0, k) = replay(None);
    let basis = (0..k).map(|i| replay(Some(i)).0 ^ v0).collect();
    Frame { masks, v0, basis }
}

impl Frame {
    fn shot(&self, rng: &mut ChaCha8Rng, sites: &[Site], events: &[(usize, u8)]) -> u32 {
        let mut key = self.v0;
        if !self.basis.is_empty() {
            let r: u32 = rng.random();
            for (i, &b) in self.basis.iter().enumerate() {
                if r >> i & 1 == 1 {
                    key ^= b;
                }
            }
        }
        for &(site, choice) in events {
            let m = &self.masks[site];
            let (parts, count) = components(sites[site].kind, choice);
            for (slot, part) in parts.iter().take(count).enumerate() {
                let part = part.expect("component");
                if part.x {
                    key ^= m[2 * slot];
                }
                if part.z {
                    key ^= m[2 * slot + 1];
                }
            }
        }
        key
    }
}

fn build_dense(n: usize, elems: &[Elem], sites: &[Site], measures: &[(usize, usize)]) -> Dense {
    // Fuse runs of single-qubit gates per qubit into blocks.
    let mut blocks = Vec::new();
    let mut elem_loc = vec![(0usize, 0usize); elems.len()];
    let mut pending: Vec<Vec<usize>> = vec![Vec::new(); n];
    let flush = |q: usize, run: &mut Vec<usize>, blocks: &mut Vec<Block>, elem_loc: &mut [(usize, usize)]| {
        if run.is_empty() {
            return;
        }
        let mats: Vec<Mat2> = run
            .iter()
            .map(|&e| match &elems[e] {
                Elem::One(_, g) => matrix_1q(g).expect("basis gate"),
                Elem::Cx(..) => unreachable!(),
            })
            .collect();
        let fused = mats.iter().fold(IDENTITY, |acc, m| mat_mul(m, &acc));
        for (k, &e) in run.iter().enumerate() {
            elem_loc[e] = (blocks.len(), k + 1);
        }
        blocks.push(Block::One { q, mats, fused });
        run.clear();
    };
    for (e, elem) in elems.iter().enumerate() {
        match *elem {
            Elem::One(q, _) => pending[q].push(e),
            Elem::Cx(c, t) => {
                for q in [c, t] {
                    let mut run = std::mem::take(&mut pending[q]);
                    flush(q, &mut run, &mut blocks, &mut elem_loc);
                }
                elem_loc[e] = (blocks.len(), 1);
                blocks.push(Block::Cx(c, t));
            }
        }
    }
    for (q, run) in pending.iter_mut().enumerate() {
        let mut run = std::mem::take(run);
        flush(q, &mut run, &mut blocks, &mut elem_loc);
    }

    // Element indices per qubit, to place idle errors.
    let mut on_qubit: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, elem) in elems.iter().enumerate() {
        match *elem {
            Elem::One(q, _) => on_qubit[q].push(e),
            Elem::Cx(c, t) => {
                on_qubit[c].push(e);
                on_qubit[t].push(e);
            }
        }
    }
    let locs = sites
        .iter()
        .map(|s| match s.kind {
            SiteKind::One(_) => [elem_loc[s.elem], (0, 0)],
            SiteKind::Two(..) => [elem_loc[s.elem], elem_loc[s.elem]],
            SiteKind::Idle(q) => {
                let list = &on_qubit[q];
                let i = list.partition_point(|&e| e <= s.elem);
                [elem_loc[list[i - 1]], (0, 0)]
            }
        })
        .collect();

    let dim = 1usize << n;
    let state_bytes = dim * std::mem::size_of::<C64>();
    let stride = (blocks.len() * state_bytes).div_ceil(CHECKPOINT_BYTES).max(1);
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    psi[0] = C64::new(1.0, 0.0);
    let mut checkpoints = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        if b % stride == 0 {
            checkpoints.push(psi.clone());
        }
        apply_block(&mut psi, block);
    }
    let mut cdf = Vec::with_capacity(dim);
    let mut acc = 0.0;
    for a in &psi {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let keys = (0..dim)
        .map(|i| {
            measures
                .iter()
                .enumerate()
                .fold(0u32, |k, (j, &(q, _))| k | (((i >> q) & 1) as u32) << j)
        })
        .collect();
    Dense {
        n,
        blocks,
        locs,
        stride,
        checkpoints,
        cdf,
        keys,
        sparse_limit: dim / SPARSE_DIVISOR,
    }
}

fn apply_block(psi: &mut [C64], block: &Block) {
    match block {
        Block::One { q, fused, .. } => apply_1q(psi, *q, fused),
        Block::Cx(c, t) => apply_cx(psi, *c, *t),
    }
}

impl Dense {
    fn shot(
        &self,
        rng: &mut ChaCha8Rng,
        sites: &[Site],
        events: &[(usize, u8)],
        work: &mut Work,
    ) -> u32 {
        if events.is_empty() {
            let u: f64 = rng.random::<f64>() * self.cdf.last().copied().unwrap_or(1.0);
            let i = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
            return self.keys[i];
        }
        // (block, offset, component) sorted in execution order.
        let mut ops: Vec<(usize, usize, Component)> = Vec::with_capacity(2 * events.len());
        for &(site, choice) in events {
            let (parts, count) = components(sites[site].kind, choice);
            for (slot, part) in parts.iter().take(count).enumerate() {
                let (b, off) = self.locs[site][slot];
                ops.push((b, off, part.expect("component")));
            }
        }
        ops.sort_by_key(|&(b, off, _)| (b, off));

        let first = ops[0].0;
        let cp = first / self.stride;
        work.load(&self.checkpoints[cp], self.sparse_limit);
        for block in &self.blocks[cp * self.stride..first] {
            work.block(block);
        }
        let mut next = 0;
        for (b, block) in self.blocks.iter().enumerate().skip(first) {
            let end = next + ops[next..].iter().take_while(|o| o.0 == b).count();
            if end == next {
                work.block(block);
                continue;
            }
            match block {
                Block::One { q, mats, .. } => {
                    let mut m = IDENTITY;
                    let mut o = next;
                    for (k, g) in mats.iter().enumerate() {
                        m = mat_mul(g, &m);
                        while o < end && ops[o].1 == k + 1 {
                            let c = ops[o].2;
                            debug_assert_eq!(c.q, *q);
                            m = mat_mul(&pauli(c.x, c.z), &m);
                            o += 1;
                        }
                    }
                    work.one(*q, &m);
                }
                Block::Cx(c, t) => {
                    work.cx(*c, *t);
                    for &(_, _, part) in &ops[next..end] {
                        if part.x {
                            work.x(part.q);
                        }
                        if part.z {
                            work.z(part.q);
                        }
                    }
                }
            }
            next = end;
        }
        debug_assert_eq!(work.dense.len(), 1 << self.n);
        let u: f64 = rng.random();
        self.keys[work.sample(u)]
    }
}

/// Noisy execution of a basis circuit: `shots` independent trajectories
/// under `m`, deterministic in `(seed, shot index)`.
pub fn run_shots(c: &Circuit, m: &NoiseModel, shots: u64, seed: u64) -> Result<Counts, SimError> {
    Ok(NoisyProgram::compile(c, m)?.run(shots, seed))
}

/// As [`run_shots`] but always evolving the statevector, even for
/// Clifford circuits. Used to cross-check the Pauli-frame path.
pub fn run_shots_dense(
    c: &Circuit,
    m: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<Counts, SimError> {
    Ok(NoisyProgram::compile_with(c, m, true)?.run(shots, seed))
}
