//! Circuit intermediate representation.
//!
//! A [`Circuit`] is a connectivity graph plus an ordered list of cycles of
//! non-overlapping two-qubit gates. Single-qubit gates are stored separately,
//! each tagged with the moment it acts in: moment `m` precedes cycle `m`, and
//! moment `depth` follows the last cycle.

mod fuse;
pub mod gates;
mod graph;
pub mod lattice;
pub mod rqc;
mod split;

use alloc::vec::Vec;

use thiserror::Error;

pub use fuse::fuse_single_qubit_gates;
pub use gates::{GateKind, Mat2, Mat4};
pub use graph::{CircuitGraph, Edge};
pub use split::{gate_split, SplitGate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("graph must have at least one qubit")]
    EmptyGraph,
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("gate on pair ({0}, {1}) which is not a graph edge")]
    NotAnEdge(usize, usize),
    #[error("qubit {qubit} used twice in cycle {cycle}")]
    QubitReused { cycle: usize, qubit: usize },
    #[error("single-qubit gate moment {moment} exceeds depth {depth}")]
    MomentOutOfRange { moment: usize, depth: usize },
    #[error("gate matrix has non-finite entries")]
    NonFinite,
    #[error("unknown gate '{0}'")]
    UnknownGate(alloc::string::String),
    #[error("lattice {rows}x{cols} is too small")]
    LatticeTooSmall { rows: usize, cols: usize },
    #[error("unsupported lattice size {0}")]
    UnsupportedSize(usize),
    #[error("bitstring has {actual} bits, circuit has {expected} qubits")]
    BitstringLength { expected: usize, actual: usize },
    #[error("bitstring character '{found}' at position {position} is not 0 or 1")]
    BadBit { position: usize, found: char },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("activation pattern refers to layer {layer}, only {available} exist")]
    BadPattern { layer: usize, available: usize },
    #[error("single-qubit gate set is empty")]
    EmptyGateSet,
    #[error("cycle range {start}..{end} outside depth {depth}")]
    CycleRange {
        start: usize,
        end: usize,
        depth: usize,
    },
}

/// Two-qubit gate acting on `(k, l)`; the first factor of the 4x4 matrix is `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub pair: (usize, usize),
    pub kind: GateKind,
    pub matrix: Mat4,
}

impl Gate {
    pub fn new(pair: (usize, usize), kind: GateKind) -> Self {
        let matrix = kind.matrix();
        Gate { pair, kind, matrix }
    }

    pub fn from_matrix(pair: (usize, usize), matrix: Mat4) -> Self {
        Gate {
            pair,
            kind: GateKind::Matrix,
            matrix,
        }
    }

    /// Conjugate transpose, acting on the same pair.
    pub fn dagger(&self) -> Gate {
        Gate {
            pair: self.pair,
            kind: GateKind::Matrix,
            matrix: gates::dagger4(&self.matrix),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitGate {
    pub qubit: usize,
    pub moment: usize,
    pub matrix: Mat2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    graph: CircuitGraph,
    cycles: Vec<Vec<Gate>>,
    single_qubit: Vec<SingleQubitGate>,
    trailing: Vec<Option<Mat2>>,
}

impl Circuit {
    /// Validates every structural invariant: gate pairs are graph edges, no
    /// qubit is used twice in a cycle, single-qubit moments lie in
    /// `0..=depth`, and all matrices are finite.
    pub fn new(
        graph: CircuitGraph,
        cycles: Vec<Vec<Gate>>,
        single_qubit: Vec<SingleQubitGate>,
    ) -> Result<Self, CircuitError> {
        let n = graph.num_qubits();
        let depth = cycles.len();
        for (ci, cycle) in cycles.iter().enumerate() {
            let mut used = alloc::vec![false; n];
            for g in cycle {
                let (k, l) = g.pair;
                for q in [k, l] {
                    if q >= n {
                        return Err(CircuitError::QubitOutOfRange {
                            qubit: q,
                            num_qubits: n,
                        });
                    }
                }
                if k == l {
                    return Err(CircuitError::SelfLoop(k));
                }
                if graph.edge_id(k, l).is_none() {
                    return Err(CircuitError::NotAnEdge(k, l));
                }
                for q in [k, l] {
                    if used[q] {
                        return Err(CircuitError::QubitReused {
                            cycle: ci,
                            qubit: q,
                        });
                    }
                    used[q] = true;
                }
                if !gates::is_finite(&g.matrix) {
                    return Err(CircuitError::NonFinite);
                }
            }
        }
        for s in &single_qubit {
            if s.qubit >= n {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: s.qubit,
                    num_qubits: n,
                });
            }
            if s.moment > depth {
                return Err(CircuitError::MomentOutOfRange {
                    moment: s.moment,
                    depth,
                });
            }
            if !gates::is_finite(&s.matrix) {
                return Err(CircuitError::NonFinite);
            }
        }
        Ok(Circuit {
            graph,
            cycles,
            single_qubit,
            trailing: alloc::vec![None; n],
        })
    }

    /// Circuit with `depth` empty cycles.
    pub fn identity(graph: CircuitGraph, depth: usize) -> Self {
        let n = graph.num_qubits();
        Circuit {
            graph,
            cycles: alloc::vec![Vec::new(); depth],
            single_qubit: Vec::new(),
            trailing: alloc::vec![None; n],
        }
    }

    pub fn graph(&self) -> &CircuitGraph {
        &self.graph
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_qubits()
    }

    pub fn depth(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycles(&self) -> &[Vec<Gate>] {
        &self.cycles
    }

    pub fn single_qubit_gates(&self) -> &[SingleQubitGate] {
        &self.single_qubit
    }

    /// Per-qubit leftover single-qubit unitary of a fused circuit, applied
    /// after all cycles. Only qubits that no two-qubit gate touches have one.
    pub fn trailing(&self) -> &[Option<Mat2>] {
        &self.trailing
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Single-qubit gates in application order: by moment, then insertion order.
    pub fn single_qubit_in_order(&self) -> Vec<&SingleQubitGate> {
        let mut v: Vec<&SingleQubitGate> = self.single_qubit.iter().collect();
        v.sort_by_key(|s| s.moment);
        v
    }

    pub(crate) fn with_trailing(mut self, trailing: Vec<Option<Mat2>>) -> Self {
        self.trailing = trailing;
        self
    }

    pub(crate) fn parts(&self) -> (&CircuitGraph, &[Vec<Gate>], &[SingleQubitGate]) {
        (&self.graph, &self.cycles, &self.single_qubit)
    }
}
