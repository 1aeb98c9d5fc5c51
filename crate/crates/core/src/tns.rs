//! Tensor network states on an arbitrary connectivity graph.
//!
//! Node `j` holds a tensor whose axis 0 is the physical index of qubit `j`
//! and whose remaining axes follow the sorted neighbour list of `j`, one bond
//! per incident edge. A bond axis is labelled with its edge id, so the two
//! endpoint axes of an edge always share a label.
//!
//! A two-qubit gate is applied as its SVD split `P`/`Q`: `P` is absorbed into
//! one node and `Q` into the other, widening their shared bond by the split
//! rank. The bond is then compressed by an SVD of the lower-index endpoint,
//! which drops numerically zero singular values only. For a qubit still in a
//! product state that SVD has two rows, so the first gate on a fresh pair
//! never leaves a bond wider than 2.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

use crate::bits::Bitstring;
use crate::circuit::{self, gate_split, Circuit, CircuitError, CircuitGraph, Mat2, SplitGate};
use crate::tensor::{contract_pair, svd_factorize, AxisLabel, Tensor, TensorError};
use crate::C64;

/// Physical labels start here; bond labels are edge ids and stay below it.
pub const PHYSICAL_LABEL_BASE: u64 = 1 << 48;

pub fn physical_label(qubit: usize) -> AxisLabel {
    AxisLabel(PHYSICAL_LABEL_BASE + qubit as u64)
}

pub fn bond_label(edge: usize) -> AxisLabel {
    AxisLabel(edge as u64)
}

const GATE_IN: AxisLabel = AxisLabel(u64::MAX - 1);
const GATE_BOND: AxisLabel = AxisLabel(u64::MAX - 2);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TnsError {
    #[error("pair ({0}, {1}) is not a graph edge")]
    NotAnEdge(usize, usize),
    #[error("split gate factors have ranks {p} and {q}")]
    RankMismatch { p: usize, q: usize },
    #[error("split gate factors must have shape (2, 2, rank)")]
    BadSplitShape,
    #[error("qubit {0} out of range")]
    QubitOutOfRange(usize),
    #[error("cycle range {start}..{end} outside depth {depth}")]
    CycleRange {
        start: usize,
        end: usize,
        depth: usize,
    },
    #[error("split cycle {split} outside 0..={depth}")]
    SplitCycle { split: usize, depth: usize },
    #[error("states live on different graphs")]
    GraphMismatch,
    #[error("{0} qubits is too many for a dense state")]
    TooLarge(usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    /// Conjugate-transposed gates, cycles in reverse order.
    Inverse,
}

/// Bond dimension of one edge around a gate application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BondChange {
    pub edge: usize,
    pub before: usize,
    /// Width right after absorbing the split gate.
    pub grown: usize,
    /// Width after compression (equals `grown` when compression is off).
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TnsState {
    graph: CircuitGraph,
    nodes: Vec<Tensor>,
    bond_dims: Vec<usize>,
}

impl TnsState {
    /// Product state `|bits>`: node `j` is `[1, 0]` or `[0, 1]` reshaped to
    /// `2 x 1 x ... x 1`.
    pub fn init_state(graph: &CircuitGraph, bits: &Bitstring) -> Result<Self, TnsError> {
        let n = graph.num_qubits();
        bits.expect_len(n)?;
        let mut nodes = Vec::with_capacity(n);
        for j in 0..n {
            let nb = graph.neighbours(j);
            let mut dims = vec![2];
            dims.extend(std::iter::repeat_n(1, nb.len()));
            let mut labels = vec![physical_label(j)];
            labels.extend(nb.iter().map(|&r| bond_label(graph.edge_id(j, r).unwrap())));
            let mut data = vec![C64::new(0.0, 0.0); 2];
            data[bits.bit(j) as usize] = C64::new(1.0, 0.0);
            nodes.push(Tensor::new(dims, data, labels)?);
        }
        Ok(TnsState {
            graph: graph.clone(),
            nodes,
            bond_dims: vec![1; graph.num_edges()],
        })
    }

    pub fn graph(&self) -> &CircuitGraph {
        &self.graph
    }

    pub fn node(&self, q: usize) -> &Tensor {
        &self.nodes[q]
    }

    pub fn nodes(&self) -> &[Tensor] {
        &self.nodes
    }

    /// Bond dimension per edge id.
    pub fn bond_dims(&self) -> &[usize] {
        &self.bond_dims
    }

    pub fn bond_dim(&self, a: usize, b: usize) -> Option<usize> {
        self.graph.edge_id(a, b).map(|e| self.bond_dims[e])
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims.iter().copied().max().unwrap_or(1)
    }

    /// Axis of node `q` that carries the bond to neighbour `r`.
    pub fn bond_axis(&self, q: usize, r: usize) -> Option<usize> {
        self.graph
            .neighbours(q)
            .binary_search(&r)
            .ok()
            .map(|i| i + 1)
    }

    /// Checks that both endpoints of every edge agree with the bond registry.
    pub fn bonds_consistent(&self) -> bool {
        self.graph.edges().iter().enumerate().all(|(e, &(a, b))| {
            let da = self.nodes[a].dims()[self.bond_axis(a, b).unwrap()];
            let db = self.nodes[b].dims()[self.bond_axis(b, a).unwrap()];
            da == self.bond_dims[e] && db == self.bond_dims[e]
        }) && (0..self.graph.num_qubits()).all(|q| self.nodes[q].rank() == 1 + self.graph.degree(q))
    }

    /// Applies a split two-qubit gate to `(k, l)`, `P` on `k` and `Q` on `l`,
    /// then optionally compresses the shared bond.
    pub fn apply_gate(
        &mut self,
        split: &SplitGate,
        pair: (usize, usize),
        compress: bool,
        tolerance: f64,
    ) -> Result<BondChange, TnsError> {
        let (k, l) = pair;
        let n = self.graph.num_qubits();
        if k >= n || l >= n {
            return Err(TnsError::QubitOutOfRange(k.max(l)));
        }
        let edge = self.graph.edge_id(k, l).ok_or(TnsError::NotAnEdge(k, l))?;
        if split.p.dims().len() != 3
            || split.q.dims().len() != 3
            || split.p.dims()[..2] != [2, 2]
            || split.q.dims()[..2] != [2, 2]
        {
            return Err(TnsError::BadSplitShape);
        }
        let rank = split.p.dims()[2];
        if rank != split.q.dims()[2] {
            return Err(TnsError::RankMismatch {
                p: rank,
                q: split.q.dims()[2],
            });
        }
        let before = self.bond_dims[edge];
        self.absorb_factor(k, l, &split.p)?;
        self.absorb_factor(l, k, &split.q)?;
        let grown = before * rank;
        self.bond_dims[edge] = grown;
        let after = if compress {
            self.compress_edge(k, l, tolerance)?
        } else {
            grown
        };
        Ok(BondChange {
            edge,
            before,
            grown,
            after,
        })
    }

    // A^q[s', ..., (b, g), ...] = sum_s F[s', s, g] A^q[s, ..., b, ...]
    fn absorb_factor(
        &mut self,
        q: usize,
        other: usize,
        factor: &Tensor,
    ) -> Result<(), TensorError> {
        let mut f = factor.clone();
        f.set_labels(vec![physical_label(q), GATE_IN, GATE_BOND])?;
        let node = &self.nodes[q];
        let m = self.bond_axis(q, other).expect("edge checked");
        let t = contract_pair(&f, node, &[(1, 0)])?;
        // t axes: s', g, bonds...; move g right behind bond m
        let rank = node.rank();
        let mut perm = vec![0];
        for ax in 1..rank {
            perm.push(ax + 1);
            if ax == m {
                perm.push(1);
            }
        }
        let t = t.permute(&perm)?;
        let mut dims = node.dims().to_vec();
        dims[m] *= f.dims()[2];
        dims[0] = 2;
        let labels = node.labels().to_vec();
        self.nodes[q] = t.reshape(dims, labels)?;
        Ok(())
    }

    /// SVD-compresses the bond `(k, l)` and returns its new dimension.
    ///
    /// The lower-index endpoint is factored as (every other axis) x (bond);
    /// its left factor replaces it and `diag(s) V` is absorbed into the other
    /// endpoint. Only singular values at or below `tolerance * s_max` are
    /// dropped, so the represented state is unchanged up to that threshold.
    pub fn compress_edge(&mut self, k: usize, l: usize, tolerance: f64) -> Result<usize, TnsError> {
        let edge = self.graph.edge_id(k, l).ok_or(TnsError::NotAnEdge(k, l))?;
        let (a, b) = (k.min(l), k.max(l));
        let ma = self.bond_axis(a, b).unwrap();
        let mb = self.bond_axis(b, a).unwrap();
        let node = &self.nodes[a];
        let rows: Vec<usize> = (0..node.rank()).filter(|&i| i != ma).collect();
        let f = svd_factorize(node, &rows, tolerance)?;
        let kept = f.kept_rank;

        // u: rows..., new  ->  reinsert new at position ma
        let mut perm: Vec<usize> = (0..node.rank() - 1).collect();
        perm.insert(ma, node.rank() - 1);
        let mut u = f.u.permute(&perm)?;
        u.set_labels(node.labels().to_vec())?;

        // sv[new, old] = s_new * vh[new, old]
        let mut sv = f.v;
        let old = sv.dims()[1];
        for (i, z) in sv.data_mut().iter_mut().enumerate() {
            *z *= f.s[i / old];
        }
        sv.set_labels(vec![GATE_BOND, GATE_IN])?;
        let other = &self.nodes[b];
        let t = contract_pair(other, &sv, &[(mb, 1)])?;
        let mut perm: Vec<usize> = (0..other.rank() - 1).collect();
        perm.insert(mb, other.rank() - 1);
        let mut t = t.permute(&perm)?;
        t.set_labels(other.labels().to_vec())?;

        self.nodes[a] = u;
        self.nodes[b] = t;
        self.bond_dims[edge] = kept;
        Ok(kept)
    }

    /// Applies a single-qubit unitary to the physical index of `q`.
    pub fn apply_single(&mut self, q: usize, m: &Mat2) -> Result<(), TnsError> {
        if q >= self.nodes.len() {
            return Err(TnsError::QubitOutOfRange(q));
        }
        let node = &self.nodes[q];
        let gate = Tensor::new(vec![2, 2], m.to_vec(), vec![GATE_BOND, GATE_IN])?;
        let t = contract_pair(&gate, node, &[(1, 0)])?;
        let labels = node.labels().to_vec();
        let mut t = t;
        t.set_labels(labels)?;
        self.nodes[q] = t;
        Ok(())
    }

    /// Applies the two-qubit gates of `cycles` (a fused circuit is expected;
    /// single-qubit gates are ignored here).
    pub fn evolve(
        &mut self,
        circuit: &Circuit,
        cycles: Range<usize>,
        direction: Direction,
        tolerance: f64,
    ) -> Result<Vec<BondChange>, TnsError> {
        let depth = circuit.depth();
        if cycles.start > cycles.end || cycles.end > depth {
            return Err(TnsError::CycleRange {
                start: cycles.start,
                end: cycles.end,
                depth,
            });
        }
        if circuit.graph() != &self.graph {
            return Err(TnsError::GraphMismatch);
        }
        let mut log = Vec::new();
        let order: Vec<usize> = match direction {
            Direction::Forward => cycles.collect(),
            Direction::Inverse => cycles.rev().collect(),
        };
        for c in order {
            for g in &circuit.cycles()[c] {
                let matrix = match direction {
                    Direction::Forward => g.matrix,
                    Direction::Inverse => circuit::gates::dagger4(&g.matrix),
                };
                let split = gate_split(&matrix, tolerance)?;
                log.push(self.apply_gate(&split, g.pair, true, tolerance)?);
            }
        }
        Ok(log)
    }

    /// Dense amplitudes (qubit 0 least significant); for tests and small states.
    pub fn to_dense(&self) -> Result<Vec<C64>, TnsError> {
        let n = self.nodes.len();
        if n > 24 {
            return Err(TnsError::TooLarge(n));
        }
        let mut acc = self.nodes[0].clone();
        for node in &self.nodes[1..] {
            let pairs: Vec<(usize, usize)> = acc
                .labels()
                .iter()
                .enumerate()
                .filter_map(|(i, l)| node.axis_of(*l).map(|j| (i, j)))
                .collect();
            acc = contract_pair(&acc, node, &pairs)?;
        }
        let perm: Vec<usize> = (0..n)
            .rev()
            .map(|q| acc.axis_of(physical_label(q)).unwrap())
            .collect();
        Ok(acc.permute(&perm)?.into_data())
    }
}

/// Result of [`two_sided_evolve`].
#[derive(Debug, Clone)]
pub struct TwoSided {
    /// Front cycles applied to the input bitstring.
    pub phi: TnsState,
    /// Back cycles applied, inverted, to the output bitstring.
    pub psi: TnsState,
    pub phi_log: Vec<BondChange>,
    pub psi_log: Vec<BondChange>,
}

/// Splits the circuit at `split_cycle`: `phi = U_front |in>` and
/// `psi = U_back^dagger |out>`, so that `<psi|phi> = <out|U|in>`.
///
/// Unfused circuits are fused first; leftover per-qubit unitaries act on
/// `phi` after its evolution.
pub fn two_sided_evolve(
    circuit: &Circuit,
    in_bits: &Bitstring,
    out_bits: &Bitstring,
    split_cycle: usize,
    tolerance: f64,
) -> Result<TwoSided, TnsError> {
    let depth = circuit.depth();
    if split_cycle > depth {
        return Err(TnsError::SplitCycle {
            split: split_cycle,
            depth,
        });
    }
    let fused;
    let circuit = if circuit.single_qubit_gates().is_empty() {
        circuit
    } else {
        fused = circuit::fuse_single_qubit_gates(circuit);
        &fused
    };
    let mut phi = TnsState::init_state(circuit.graph(), in_bits)?;
    let mut psi = TnsState::init_state(circuit.graph(), out_bits)?;
    let phi_log = phi.evolve(circuit, 0..split_cycle, Direction::Forward, tolerance)?;
    let psi_log = psi.evolve(circuit, split_cycle..depth, Direction::Inverse, tolerance)?;
    for (q, t) in circuit.trailing().iter().enumerate() {
        if let Some(m) = t {
            phi.apply_single(q, m)?;
        }
    }
    Ok(TwoSided {
        phi,
        psi,
        phi_log,
        psi_log,
    })
}
