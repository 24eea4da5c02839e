use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CouplingGraph, TranspileError};
use crate::circuit::Circuit;

/// Injective map from logical qubit `i` to `physical[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layout {
    physical: Vec<usize>,
    num_physical: usize,
}

impl Layout {
    pub fn new(physical: Vec<usize>, num_physical: usize) -> Result<Self, TranspileError> {
        let mut seen = vec![false; num_physical];
        for &p in &physical {
            if p >= num_physical {
                return Err(TranspileError::LayoutOutOfRange {
                    qubit: p,
                    size: num_physical,
                });
            }
            if seen[p] {
                return Err(TranspileError::LayoutNotInjective(p));
            }
            seen[p] = true;
        }
        Ok(Layout {
            physical,
            num_physical,
        })
    }

    pub fn identity(n: usize, num_physical: usize) -> Self {
        Layout::new((0..n).collect(), num_physical).expect("identity layout fits")
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.physical[logical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.physical
    }

    pub fn num_logical(&self) -> usize {
        self.physical.len()
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }
}

/// Relabel qubits of `c` through `l`. The result spans all
/// `l.num_physical()` qubits; clbits are unchanged.
pub fn apply_layout(c: &Circuit, l: &Layout) -> Result<Circuit, TranspileError> {
    if l.num_logical() != c.num_qubits() {
        return Err(TranspileError::LayoutSize {
            layout: l.num_logical(),
            circuit: c.num_qubits(),
        });
    }
    let gates = c.gates().iter().map(|g| g.map_qubits(|q| l.physical(q))).collect();
    let mut out = Circuit::from_gates(l.num_physical(), c.num_clbits(), gates);
    out.name = c.name.clone();
    Ok(out)
}

/// Grow a random connected node set of size `n`, or `None` if the start
/// node's component is too small.
fn random_connected_set(g: &CouplingGraph, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let total = g.num_physical_qubits();
    let start = rng.random_range(0..total);
    let mut inside = vec![false; total];
    inside[start] = true;
    let mut chosen = vec![start];
    while chosen.len() < n {
        let mut frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().copied())
            .filter(|&v| !inside[v])
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
        if frontier.is_empty() {
            return None;
        }
        let v = frontier[rng.random_range(0..frontier.len())];
        inside[v] = true;
        chosen.push(v);
    }
    Some(chosen)
}

/// `count` distinct layouts of `c` onto connected `c.num_qubits()`-node
/// subgraphs of `g`, deterministic in `seed`.
pub fn random_layouts(
    c: &Circuit,
    g: &CouplingGraph,
    count: usize,
    seed: u64,
) -> Result<Vec<Layout>, TranspileError> {
    let n = c.num_qubits();
    if g.num_physical_qubits() < n {
        return Err(TranspileError::GraphTooSmall {
            graph: g.num_physical_qubits(),
            circuit: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let max_attempts = 1000 + 200 * count;
    for _ in 0..max_attempts {
        if out.len() == count {
            break;
        }
        let Some(mut nodes) = random_connected_set(g, n, &mut rng) else {
            continue;
        };
        nodes.shuffle(&mut rng);
        let layout = Layout::new(nodes, g.num_physical_qubits())?;
        if seen.insert(layout.clone()) {
            out.push(layout);
        }
    }
    if out.len() < count {
        return Err(TranspileError::NotEnoughLayouts {
            requested: count,
            found: out.len(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn identity_layout_keeps_structure() {
        let mut c = Circuit::new(3, 3);
        c.cx(0, 1).rz(2, 0.3).measure_all();
        assert_eq!(apply_layout(&c, &Layout::identity(3, 3)).unwrap(), c);
    }

    #[test]
    fn swapped_layout() {
        let mut c = Circuit::new(2, 0);
        c.cx(0, 1);
        let l = Layout::new(vec![1, 0], 2).unwrap();
        assert_eq!(
            apply_layout(&c, &l).unwrap().gates(),
            &[Gate::CX { control: 1, target: 0 }]
        );
    }

    #[test]
    fn invalid_layouts() {
        assert!(matches!(Layout::new(vec![0, 0], 2), Err(TranspileError::LayoutNotInjective(0))));
        assert!(matches!(Layout::new(vec![3], 2), Err(TranspileError::LayoutOutOfRange { .. })));
        let c = Circuit::new(3, 0);
        assert!(matches!(
            apply_layout(&c, &Layout::identity(2, 5)),
            Err(TranspileError::LayoutSize { .. })
        ));
    }

    #[test]
    fn random_layouts_are_deterministic_and_connected() {
        let c = Circuit::new(4, 0);
        let g = CouplingGraph::heavy_hex_27();
        let a = random_layouts(&c, &g, 10, 7).unwrap();
        let b = random_layouts(&c, &g, 10, 7).unwrap();
        assert_eq!(a, b);
        for l in &a {
            assert!(g.is_connected_on(l.as_slice()));
        }
        assert_ne!(a, random_layouts(&c, &g, 10, 8).unwrap());
    }

    #[test]
    fn exhausting_a_tiny_graph() {
        let c = Circuit::new(2, 0);
        let g = CouplingGraph::line(2);
        // Only two placements exist: [0,1] and [1,0].
        assert_eq!(random_layouts(&c, &g, 2, 1).unwrap().len(), 2);
        assert!(matches!(
            random_layouts(&c, &g, 3, 1),
            Err(TranspileError::NotEnoughLayouts { requested: 3, found: 2 })
        ));
        assert!(matches!(
            random_layouts(&Circuit::new(3, 0), &g, 1, 1),
            Err(TranspileError::GraphTooSmall { .. })
        ));
    }

    #[test]
    fn full_line_placement() {
        let c = Circuit::new(4, 0);
        let g = CouplingGraph::line(4);
        let l = random_layouts(&c, &g, 1, 3).unwrap();
        let mut image = l[0].as_slice().to_vec();
        image.sort_unstable();
        assert_eq!(image, vec![0, 1, 2, 3]);
    }
}
