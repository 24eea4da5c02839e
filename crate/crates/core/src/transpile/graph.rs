use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) out of range for {2} qubits")]
    OutOfRange(usize, usize, usize),
    #[error("line {line}: expected `u v`, got {text:?}")]
    Parse { line: usize, text: String },
    #[error("unknown graph preset {0:?}")]
    UnknownPreset(String),
}

/// Undirected device connectivity over physical qubits `0..num_physical_qubits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct CouplingGraph {
    num_physical_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    num_physical_qubits: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for CouplingGraph {
    type Error = GraphError;
    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        CouplingGraph::new(r.num_physical_qubits, r.edges)
    }
}

impl From<CouplingGraph> for GraphRepr {
    fn from(g: CouplingGraph) -> Self {
        GraphRepr {
            num_physical_qubits: g.num_physical_qubits,
            edges: g.edges.into_iter().collect(),
        }
    }
}

// ibmq_montreal / Falcon r4 connectivity.
const HEAVY_HEX_27: [(usize, usize); 28] = [
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8),
    (6, 7), (7, 10), (8, 9), (8, 11), (10, 12), (11, 14), (12, 13),
    (12, 15), (13, 14), (14, 16), (15, 18), (16, 19), (17, 18), (18, 21),
    (19, 20), (19, 22), (21, 23), (22, 25), (23, 24), (24, 25), (25, 26),
];

impl CouplingGraph {
    pub fn new(
        num_physical_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= num_physical_qubits || v >= num_physical_qubits {
                return Err(GraphError::OutOfRange(u, v, num_physical_qubits));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); num_physical_qubits];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(CouplingGraph {
            num_physical_qubits,
            edges: set,
            adj,
        })
    }

    pub fn line(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid line")
    }

    pub fn ring(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::new(n, edges).expect("valid ring")
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                if c + 1 < cols {
                    edges.push((i, i + 1));
                }
                if r + 1 < rows {
                    edges.push((i, i + cols));
                }
            }
        }
        Self::new(rows * cols, edges).expect("valid grid")
    }

    /// The 27-qubit heavy-hex lattice of the Falcon-generation devices.
    pub fn heavy_hex_27() -> Self {
        Self::new(27, HEAVY_HEX_27).expect("valid heavy-hex")
    }

    /// Named presets: `line:N`, `ring:N`, `grid:RxC`, `heavy-hex-27`.
    pub fn preset(name: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::UnknownPreset(name.to_string());
        if name == "heavy-hex-27" {
            return Ok(Self::heavy_hex_27());
        }
        let (kind, arg) = name.split_once(':').ok_or_else(bad)?;
        match kind {
            "line" => Ok(Self::line(arg.parse().map_err(|_| bad())?)),
            "ring" => Ok(Self::ring(arg.parse().map_err(|_| bad())?)),
            "grid" => {
                let (r, c) = arg.split_once('x').ok_or_else(bad)?;
                Ok(Self::grid(r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?))
            }
            _ => Err(bad()),
        }
    }

    /// Parse the edge-list format: one `u v` pair per line, `#` comments.
    /// The qubit count is one more than the largest index mentioned.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                [u, v] => u.parse::<usize>().ok().zip(v.parse::<usize>().ok()),
                _ => None,
            };
            let (u, v) = parsed.ok_or_else(|| GraphError::Parse {
                line: i + 1,
                text: raw.to_string(),
            })?;
            edges.push((u, v));
        }
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {} physical qubits\n", self.num_physical_qubits);
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn num_physical_qubits(&self) -> usize {
        self.num_physical_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adj[q]
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// BFS shortest path from `from` to `to` inclusive. Neighbors are
    /// expanded in ascending order, so ties go to the lowest index.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let n = self.num_physical_qubits;
        if from >= n || to >= n {
            return None;
        }
        let mut parent = vec![usize::MAX; n];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &v in &self.adj[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[to] == usize::MAX {
            return None;
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Subgraph keeping only edges with both ends in `nodes`. Physical
    /// indices are preserved.
    pub fn induced(&self, nodes: &[usize]) -> CouplingGraph {
        let mut keep = vec![false; self.num_physical_qubits];
        for &q in nodes {
            keep[q] = true;
        }
        let edges = self.edges.iter().copied().filter(|&(u, v)| keep[u] && keep[v]);
        CouplingGraph::new(self.num_physical_qubits, edges).expect("subset of a valid graph")
    }

    /// Whether `nodes` induce a connected subgraph.
    pub fn is_connected_on(&self, nodes: &[usize]) -> bool {
        let Some(&start) = nodes.first() else {
            return true;
        };
        let mut inside = vec![false; self.num_physical_qubits];
        for &q in nodes {
            inside[q] = true;
        }
        let mut seen = vec![false; self.num_physical_qubits];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if inside[v] && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == nodes.len()
    }
}
