//! Vertex separations of small graphs and the systems `S_k` of all
//! separations of order less than `k`.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::sepsys::{SepId, SeparationSystem};

/// Vertex set over vertices `0..n`, one bit per vertex.
pub type VertexSet = u32;

/// Default ceiling on the vertex count for exhaustive enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 12;

/// Representation limit of [`VertexSet`].
pub const MAX_VERTICES: usize = 32;

/// Simple undirected graph without loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "graph",
                size: n,
                cap: MAX_VERTICES,
            });
        }
        let mut adj = vec![0; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!("edge {u} {v} has a vertex outside 0..{n}")));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop at {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { n, adj })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    /// `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        Graph::new(n, &edges).unwrap()
    }

    /// `rows x cols` grid, vertices numbered row-major.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::new(rows * cols, &edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        if self.n == MAX_VERTICES {
            VertexSet::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| ((u + 1)..self.n).filter(move |&v| self.adj[u] >> v & 1 == 1).map(move |v| (u, v)))
            .collect()
    }

    /// Whether some edge joins `x` to `y`.
    fn joins(&self, x: VertexSet, y: VertexSet) -> bool {
        ones(x).any(|v| self.adj[v] & y != 0)
    }

    /// Whether `(a, b)` is a separation of this graph.
    pub fn is_separation(&self, sep: GraphSeparation) -> bool {
        let v = self.vertices();
        sep.a | sep.b == v && sep.a & !v == 0 && sep.b & !v == 0 && !self.joins(sep.a & !sep.b, sep.b & !sep.a)
    }
}

fn ones(set: VertexSet) -> impl Iterator<Item = usize> {
    (0..MAX_VERTICES).filter(move |&i| set >> i & 1 == 1)
}

/// A separation `(A, B)` of a graph: `A ∪ B = V` and no edge between
/// `A \ B` and `B \ A`. Ordered by `(A, B)` as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphSeparation {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl GraphSeparation {
    pub fn new(a: VertexSet, b: VertexSet) -> Self {
        GraphSeparation { a, b }
    }

    pub fn inverse(self) -> Self {
        GraphSeparation { a: self.b, b: self.a }
    }

    /// `|A ∩ B|`
    pub fn order(self) -> usize {
        (self.a & self.b).count_ones() as usize
    }

    /// `(A, B) <= (C, D)` iff `A ⊆ C` and `B ⊇ D`.
    pub fn leq(self, other: Self) -> bool {
        self.a & !other.a == 0 && other.b & !self.b == 0
    }

    pub fn join(self, other: Self) -> Self {
        GraphSeparation {
            a: self.a | other.a,
            b: self.b & other.b,
        }
    }

    pub fn meet(self, other: Self) -> Self {
        GraphSeparation {
            a: self.a & other.a,
            b: self.b | other.b,
        }
    }
}

impl fmt::Display for GraphSeparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |set: VertexSet| ones(set).map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", side(self.a), side(self.b))
    }
}

/// Which corner of two separations to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    Join,
    Meet,
}

pub fn corner(r: GraphSeparation, s: GraphSeparation, which: Corner) -> GraphSeparation {
    match which {
        Corner::Join => r.join(s),
        Corner::Meet => r.meet(s),
    }
}

/// All separations of `g`, both orientations, sorted by `(A, B)`.
pub fn all_separations(g: &Graph, vertex_cap: usize) -> Result<Vec<GraphSeparation>> {
    if g.n > vertex_cap.min(MAX_VERTICES) {
        return Err(Error::CapExceeded {
            what: "graph vertex count",
            size: g.n,
            cap: vertex_cap,
        });
    }
    let v = g.vertices();
    let mut out = Vec::new();
    // B must contain V \ A; the rest of B is any subset of A.
    for a in 0..=u64::from(v) {
        let a = a as VertexSet;
        if a & !v != 0 {
            continue;
        }
        let forced = v & !a;
        let mut extra: VertexSet = 0;
        loop {
            let sep = GraphSeparation::new(a, forced | extra);
            if !g.joins(sep.a & !sep.b, sep.b & !sep.a) {
                out.push(sep);
            }
            if extra == a {
                break;
            }
            extra = (extra.wrapping_sub(a)) & a;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The separation system `S_k` of a graph, with the map between poset ids and
/// graph separations.
#[derive(Debug, Clone)]
pub struct GraphSystem {
    graph: Graph,
    k: usize,
    system: SeparationSystem,
    seps: Vec<GraphSeparation>,
    index: HashMap<GraphSeparation, SepId>,
}

/// Builds `S_k`: every separation of order `< k`, except the degenerate
/// `(V, V)` which would be its own inverse.
pub fn build_sk(g: &Graph, k: usize, vertex_cap: usize) -> Result<GraphSystem> {
    let v = g.vertices();
    let seps: Vec<GraphSeparation> = all_separations(g, vertex_cap)?
        .into_iter()
        .filter(|s| s.order() < k && !(s.a == v && s.b == v))
        .collect();
    let index: HashMap<GraphSeparation, SepId> = seps.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = seps.len();
    let inv = seps.iter().map(|s| index[&s.inverse()]).collect();
    let up = seps
        .iter()
        .map(|&s| {
            let mut row = FixedBitSet::with_capacity(n);
            row.extend(seps.iter().enumerate().filter(|(_, &t)| s.leq(t)).map(|(j, _)| j));
            row
        })
        .collect();
    let labels = seps.iter().enumerate().map(|(i, s)| (i, s.to_string())).collect();
    let system = SeparationSystem::from_parts(inv, up, labels);
    Ok(GraphSystem {
        graph: g.clone(),
        k,
        system,
        seps,
        index,
    })
}

impl GraphSystem {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn system(&self) -> &SeparationSystem {
        &self.system
    }

    pub fn separation(&self, id: SepId) -> GraphSeparation {
        self.seps[id]
    }

    pub fn separations(&self) -> &[GraphSeparation] {
        &self.seps
    }

    pub fn id_of(&self, sep: GraphSeparation) -> Option<SepId> {
        self.index.get(&sep).copied()
    }

    /// Join taken in the universe of all separations, if it lies in `S_k`.
    pub fn universe_join(&self, r: SepId, s: SepId) -> Option<SepId> {
        self.id_of(self.seps[r].join(self.seps[s]))
    }

    /// Meet taken in the universe of all separations, if it lies in `S_k`.
    pub fn universe_meet(&self, r: SepId, s: SepId) -> Option<SepId> {
        self.id_of(self.seps[r].meet(self.seps[s]))
    }

    /// Checks that every pair of oriented separations has its universe join
    /// or meet in the system; returns the first pair failing this.
    pub fn structural_submodularity_witness(&self) -> Option<(SepId, SepId)> {
        structural_submodularity_witness(&self.seps).map(|(r, s)| (self.index[&r], self.index[&s]))
    }
}

/// Structural submodularity of an arbitrary set of separations of one graph,
/// viewed inside the universe of all its separations.
pub fn structural_submodularity_witness(seps: &[GraphSeparation]) -> Option<(GraphSeparation, GraphSeparation)> {
    let present: std::collections::HashSet<GraphSeparation> = seps.iter().copied().collect();
    for (i, &r) in seps.iter().enumerate() {
        for &s in &seps[i + 1..] {
            if !present.contains(&r.join(s)) && !present.contains(&r.meet(s)) {
                return Some((r, s));
            }
        }
    }
    None
}
