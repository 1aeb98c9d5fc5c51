use alloc::vec;
use alloc::vec::Vec;

use super::gates::{identity2, kron2, mul2, mul4, Mat2, Mat4};
use super::{Circuit, Gate, GateKind};

fn on_side(u: &Mat2, first: bool) -> Mat4 {
    if first {
        kron2(u, &identity2())
    } else {
        kron2(&identity2(), u)
    }
}

/// Folds every single-qubit gate into a neighbouring two-qubit gate.
///
/// A single-qubit gate is absorbed into the next two-qubit gate touching its
/// qubit; if none follows, into the previous one. Qubits never touched by a
/// two-qubit gate keep their product as a trailing unitary. The full-circuit
/// unitary is unchanged.
pub fn fuse_single_qubit_gates(c: &Circuit) -> Circuit {
    let (graph, cycles, singles) = c.parts();
    if singles.is_empty() {
        return c.clone();
    }
    let n = graph.num_qubits();
    let mut cycles: Vec<Vec<Gate>> = cycles.to_vec();

    // (cycle, index in cycle) of every two-qubit gate per qubit, in time order
    let mut touches: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ci, cycle) in cycles.iter().enumerate() {
        for (gi, g) in cycle.iter().enumerate() {
            touches[g.pair.0].push((ci, gi));
            touches[g.pair.1].push((ci, gi));
        }
    }

    let ordered = c.single_qubit_in_order();
    let mut before: Vec<(usize, usize, usize)> = Vec::new(); // (single idx, cycle, gate)
    let mut after: Vec<(usize, usize, usize)> = Vec::new();
    let mut trailing: Vec<Option<Mat2>> = c.trailing().to_vec();
    let mut lone: Vec<usize> = Vec::new();
    for (si, s) in ordered.iter().enumerate() {
        let t = &touches[s.qubit];
        let next = t.iter().find(|(ci, _)| *ci >= s.moment);
        match (next, t.last()) {
            (Some(&(ci, gi)), _) => before.push((si, ci, gi)),
            (None, Some(&(ci, gi))) => after.push((si, ci, gi)),
            (None, None) => lone.push(si),
        }
    }

    // G <- G (u on its side), latest first so earlier gates end up rightmost
    for &(si, ci, gi) in before.iter().rev() {
        let s = ordered[si];
        let g = &mut cycles[ci][gi];
        g.matrix = mul4(&g.matrix, &on_side(&s.matrix, g.pair.0 == s.qubit));
        g.kind = GateKind::Matrix;
    }
    for &(si, ci, gi) in &after {
        let s = ordered[si];
        let g = &mut cycles[ci][gi];
        g.matrix = mul4(&on_side(&s.matrix, g.pair.0 == s.qubit), &g.matrix);
        g.kind = GateKind::Matrix;
    }
    for &si in &lone {
        let s = ordered[si];
        let prev = trailing[s.qubit].unwrap_or_else(identity2);
        trailing[s.qubit] = Some(mul2(&s.matrix, &prev));
    }

    Circuit::new(graph.clone(), cycles, Vec::new())
        .expect("fusion preserves circuit structure")
        .with_trailing(trailing)
}

#[cfg(test)]
mod tests {
    use super::super::gates::*;
    use super::super::{CircuitGraph, SingleQubitGate};
    use super::*;

    #[test]
    fn no_singles_is_identity() {
        let g = CircuitGraph::new(2, vec![(0, 1)]).unwrap();
        let c = Circuit::new(g, vec![vec![Gate::new((0, 1), GateKind::Cz)]], vec![]).unwrap();
        assert_eq!(fuse_single_qubit_gates(&c), c);
    }

    #[test]
    fn hadamard_then_cz() {
        let g = CircuitGraph::new(2, vec![(0, 1)]).unwrap();
        let c = Circuit::new(
            g,
            vec![vec![Gate::new((0, 1), GateKind::Cz)]],
            vec![SingleQubitGate {
                qubit: 0,
                moment: 0,
                matrix: hadamard(),
            }],
        )
        .unwrap();
        let f = fuse_single_qubit_gates(&c);
        assert!(f.single_qubit_gates().is_empty());
        let want = mul4(&cz(), &kron2(&hadamard(), &identity2()));
        let got = &f.cycles()[0][0].matrix;
        assert!(got.iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn untouched_qubit_gets_trailing() {
        let g = CircuitGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let c = Circuit::new(
            g,
            vec![vec![Gate::new((0, 1), GateKind::Cz)]],
            vec![
                SingleQubitGate {
                    qubit: 2,
                    moment: 0,
                    matrix: hadamard(),
                },
                SingleQubitGate {
                    qubit: 2,
                    moment: 1,
                    matrix: pauli_x(),
                },
            ],
        )
        .unwrap();
        let f = fuse_single_qubit_gates(&c);
        let t = f.trailing()[2].unwrap();
        let want = mul2(&pauli_x(), &hadamard());
        assert!(t.iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!(f.trailing()[0].is_none());
    }
}
