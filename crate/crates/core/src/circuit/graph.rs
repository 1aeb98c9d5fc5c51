use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::CircuitError;

/// Undirected edge stored with the smaller qubit first.
pub type Edge = (usize, usize);

/// Connected, simple qubit-connectivity graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitGraph {
    num_qubits: usize,
    // sorted, normalized; the position is the edge id
    edges: Vec<Edge>,
    // sorted neighbour lists
    adjacency: Vec<Vec<usize>>,
}

pub(crate) fn normalize(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl CircuitGraph {
    pub fn new(num_qubits: usize, edges: Vec<Edge>) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::EmptyGraph);
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for q in [a, b] {
                if q >= num_qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        qubit: q,
                        num_qubits,
                    });
                }
            }
            if a == b {
                return Err(CircuitError::SelfLoop(a));
            }
            norm.push(normalize(a, b));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(CircuitError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &norm {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let g = CircuitGraph {
            num_qubits,
            edges: norm,
            adjacency,
        };
        if !g.is_connected() {
            return Err(CircuitError::Disconnected);
        }
        Ok(g)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbours(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&normalize(a, b)).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_id(a, b).is_some()
    }

    /// Qubits with fewer neighbours than the best-connected qubit. On a
    /// regular graph, where that set would be empty, every qubit counts.
    pub fn boundary(&self) -> Vec<usize> {
        let max = self.max_degree();
        let b: Vec<usize> = (0..self.num_qubits)
            .filter(|&q| self.degree(q) < max)
            .collect();
        if b.is_empty() {
            (0..self.num_qubits).collect()
        } else {
            b
        }
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_qubits];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(q) = queue.pop_front() {
            for &r in &self.adjacency[q] {
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                    queue.push_back(r);
                }
            }
        }
        count == self.num_qubits
    }

    /// Two-colouring of the vertices, if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.num_qubits];
        side[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            for &r in &self.adjacency[q] {
                if side[r] == u8::MAX {
                    side[r] = 1 - side[q];
                    queue.push_back(r);
                } else if side[r] == side[q] {
                    return None;
                }
            }
        }
        Some(side)
    }
}
