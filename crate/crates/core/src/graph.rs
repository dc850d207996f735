//! Weighted graphs with an input/output vertex partition.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::abelian::{FiniteAbelianGroup, GroupElement, GroupError};
use crate::zmod::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("adjacency matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("weights ({i},{j}) and ({j},{i}) differ")]
    Asymmetric { i: usize, j: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} listed more than once")]
    DuplicateVertex(usize),
    #[error("conflicting weights for edge ({0},{1})")]
    ConflictingEdge(usize, usize),
    #[error("every vertex is an input; at least one output is required")]
    NoOutputs,
    #[error("vertex {0} is not an output vertex")]
    NotAnOutput(usize),
    #[error("invalid input set: {0}")]
    InvalidInputs(&'static str),
    #[error("{expected} group elements expected, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A symmetric integer matrix `Γ` with zero diagonal, plus the partition of
/// its vertices into inputs `X` and outputs `Y`.
///
/// Weights are stored unreduced; a weight `w` acts through `χ^w`, so only
/// `w` modulo the group exponent matters once a group is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    gamma: IntMatrix,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

fn normalize_vertex_set(set: &[usize], n: usize) -> Result<Vec<usize>, GraphError> {
    let mut v = set.to_vec();
    v.sort_unstable();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
    }
    if let Some(&bad) = v.iter().find(|&&x| x >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: bad, n });
    }
    Ok(v)
}

impl WeightedGraph {
    pub fn new(gamma: IntMatrix, inputs: &[usize]) -> Result<Self, GraphError> {
        if !gamma.is_square() {
            return Err(GraphError::NotSquare {
                rows: gamma.rows(),
                cols: gamma.cols(),
            });
        }
        let n = gamma.rows();
        for i in 0..n {
            if !gamma[(i, i)].is_zero() {
                return Err(GraphError::SelfLoop(i));
            }
            for j in i + 1..n {
                if gamma[(i, j)] != gamma[(j, i)] {
                    return Err(GraphError::Asymmetric { i, j });
                }
            }
        }
        let inputs = normalize_vertex_set(inputs, n)?;
        let outputs: Vec<usize> = (0..n)
            .filter(|v| inputs.binary_search(v).is_err())
            .collect();
        if outputs.is_empty() {
            return Err(GraphError::NoOutputs);
        }
        Ok(WeightedGraph {
            gamma,
            inputs,
            outputs,
        })
    }

    /// Builds a graph from an undirected edge list. Repeated edges must agree
    /// on their weight.
    pub fn from_edges(
        n: usize,
        inputs: &[usize],
        edges: &[(usize, usize, i64)],
    ) -> Result<Self, GraphError> {
        let mut gamma = IntMatrix::zeros(n, n);
        let mut seen = alloc::vec![false; n * n];
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let w = BigInt::from(w);
            if seen[u * n + v] && gamma[(u, v)] != w {
                return Err(GraphError::ConflictingEdge(u.min(v), u.max(v)));
            }
            seen[u * n + v] = true;
            seen[v * n + u] = true;
            gamma[(u, v)] = w.clone();
            gamma[(v, u)] = w;
        }
        Self::new(gamma, inputs)
    }

    pub fn vertex_count(&self) -> usize {
        self.gamma.rows()
    }

    pub fn gamma(&self) -> &IntMatrix {
        &self.gamma
    }

    pub fn weight(&self, i: usize, j: usize) -> &BigInt {
        &self.gamma[(i, j)]
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// The same weights with a different input set.
    pub fn with_inputs(&self, inputs: &[usize]) -> Result<Self, GraphError> {
        Self::new(self.gamma.clone(), inputs)
    }

    /// Nonzero edges `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, BigInt)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let w = &self.gamma[(u, v)];
                if !w.is_zero() {
                    out.push((u, v, w.clone()));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&u| !self.gamma[(v, u)].is_zero())
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// `Γ[K, L]`: entry `(k, l)` is `Γ(k, l)`, rows and columns in the order
    /// given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        self.gamma.select(rows, cols)
    }
}

/// A set `E ⊆ Y` of output vertices on which errors may act.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorConfiguration(Vec<usize>);

impl ErrorConfiguration {
    /// Validates `E ⊆ Y` for `graph`. Vertices are sorted; duplicates are
    /// rejected.
    pub fn new(graph: &WeightedGraph, vertices: &[usize]) -> Result<Self, GraphError> {
        let v = normalize_vertex_set(vertices, graph.vertex_count())?;
        if let Some(&x) = v.iter().find(|x| graph.inputs.binary_search(x).is_ok()) {
            return Err(GraphError::NotAnOutput(x));
        }
        Ok(ErrorConfiguration(v))
    }

    /// The empty configuration (the isometry condition).
    pub fn empty() -> Self {
        ErrorConfiguration(Vec::new())
    }

    /// Wraps an already sorted vertex list without validation.
    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        ErrorConfiguration(v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `I = Y ∖ E`.
    pub fn complement_in(&self, graph: &WeightedGraph) -> Vec<usize> {
        graph
            .outputs
            .iter()
            .copied()
            .filter(|v| self.0.binary_search(v).is_err())
            .collect()
    }

    /// `X ∪ E` in vertex order.
    pub fn support_in(&self, graph: &WeightedGraph) -> Vec<usize> {
        let mut s: Vec<usize> = graph.inputs.iter().chain(&self.0).copied().collect();
        s.sort_unstable();
        s
    }
}

/// `Γ[K, L]` applied to a tuple of group elements indexed by `L`:
/// `(Σ_l Γ(k, l)·g_l)_k`.
pub fn apply_map(
    m: &IntMatrix,
    group: &FiniteAbelianGroup,
    v: &[GroupElement],
) -> Result<Vec<GroupElement>, GraphError> {
    if v.len() != m.cols() {
        return Err(GraphError::DimensionMismatch {
            expected: m.cols(),
            found: v.len(),
        });
    }
    let mut out = Vec::with_capacity(m.rows());
    for k in 0..m.rows() {
        let mut acc = group.zero();
        for (l, g) in v.iter().enumerate() {
            let coeff = reduce_weight(&m[(k, l)], group.exponent());
            acc = group.add(&acc, &group.scale(coeff, g)?)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// A weight reduced into `[0, modulus)` as a machine integer.
pub(crate) fn reduce_weight(w: &BigInt, modulus: u64) -> i64 {
    let m = BigInt::from(modulus);
    let r = ((w % &m) + &m) % &m;
    r.to_i64().expect("reduced weight fits in i64")
}

/// Fivefold wheel code: input vertex 0 joined to every vertex of the output
/// pentagon 1-2-3-4-5-1, all weights 1.
pub fn wheel_code() -> WeightedGraph {
    let mut edges = Vec::new();
    for v in 1..=5 {
        edges.push((0, v, 1));
        edges.push((v, v % 5 + 1, 1));
    }
    WeightedGraph::from_edges(6, &[0], &edges).expect("wheel code is well formed")
}

/// Tenfold code: each output vertex of the wheel code becomes a pair
/// `{2i-1, 2i}`. Every output is joined to the input 0, to its partner and to
/// all four vertices of the two neighboring pairs on the pentagon of pairs.
pub fn tenfold_code() -> WeightedGraph {
    let pair_of = |v: usize| (v - 1) / 2;
    let mut edges = Vec::new();
    for u in 1..=10 {
        edges.push((0, u, 1));
        for v in u + 1..=10 {
            let (pu, pv) = (pair_of(u), pair_of(v));
            let gap = (pu + 5 - pv) % 5;
            if pu == pv || gap == 1 || gap == 4 {
                edges.push((u, v, 1));
            }
        }
    }
    WeightedGraph::from_edges(11, &[0], &edges).expect("tenfold code is well formed")
}

/// The 8×8 weighted matrix whose off-diagonal 4×4 blocks are all nonsingular;
/// its bad primes are 2, 3, 5 and 11.
pub const MATRIX19: [[i64; 8]; 8] = [
    [0, 0, 1, 0, 1, 1, 1, 0],
    [0, 0, 0, 1, 1, 1, 0, 1],
    [1, 0, 0, 0, 2, 0, -1, 1],
    [0, 1, 0, 0, 0, 1, 2, -2],
    [1, 1, 2, 0, 0, 0, -2, 0],
    [1, 1, 0, 1, 0, 0, 0, -1],
    [1, 0, -1, 2, -2, 0, 0, 0],
    [0, 1, 1, -2, 0, -1, 0, 0],
];

/// The 8-vertex singleton-saturating code with one or two input vertices.
pub fn matrix19_code(inputs: &[usize]) -> Result<WeightedGraph, GraphError> {
    if inputs.is_empty() || inputs.len() > 2 {
        return Err(GraphError::InvalidInputs(
            "expected one or two input vertices",
        ));
    }
    let gamma = IntMatrix::from_rows(&MATRIX19).expect("constant matrix is rectangular");
    WeightedGraph::new(gamma, inputs)
}
