//! Seeded random-circuit generator in the style of the Sycamore experiments.
//!
//! The couplers are partitioned into layers by a proper edge colouring (a
//! bipartite graph gets exactly max-degree layers). Cycle `i` activates layer
//! `pattern[i % pattern.len()]`; with four layers the default pattern is
//! `ABCDCDAB`. Every cycle is preceded by a layer of random single-qubit
//! rotations, and one more layer follows the last cycle. No qubit receives the
//! same rotation twice in a row.

use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gates::{self, Mat2};
use super::{Circuit, CircuitError, CircuitGraph, Gate, GateKind, SingleQubitGate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateFamily {
    Fsim,
    Cz,
    Iswap,
}

impl FromStr for GateFamily {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fsim" => Ok(GateFamily::Fsim),
            "cz" => Ok(GateFamily::Cz),
            "iswap" => Ok(GateFamily::Iswap),
            other => Err(CircuitError::UnknownGate(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    SqrtX,
    SqrtY,
    SqrtW,
}

impl Rotation {
    pub fn matrix(self) -> Mat2 {
        let p = match self {
            Rotation::SqrtX => gates::pauli_x(),
            Rotation::SqrtY => gates::pauli_y(),
            Rotation::SqrtW => gates::pauli_w(),
        };
        gates::sqrt_of_involution(&p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RqcOptions {
    pub family: GateFamily,
    /// fSim angles used when `family` is [`GateFamily::Fsim`].
    pub fsim_theta: f64,
    pub fsim_phi: f64,
    /// Layer activation sequence; `None` picks the default for the colouring.
    pub pattern: Option<Vec<usize>>,
    pub rotations: Vec<Rotation>,
}

impl Default for RqcOptions {
    fn default() -> Self {
        RqcOptions {
            family: GateFamily::Fsim,
            fsim_theta: core::f64::consts::FRAC_PI_2,
            fsim_phi: core::f64::consts::FRAC_PI_6,
            pattern: None,
            rotations: vec![Rotation::SqrtX, Rotation::SqrtY, Rotation::SqrtW],
        }
    }
}

impl RqcOptions {
    fn gate_kind(&self) -> GateKind {
        match self.family {
            GateFamily::Fsim => GateKind::Fsim {
                theta: self.fsim_theta,
                phi: self.fsim_phi,
            },
            GateFamily::Cz => GateKind::Cz,
            GateFamily::Iswap => GateKind::Iswap,
        }
    }
}

pub fn generate_rqc(
    graph: &CircuitGraph,
    depth: usize,
    seed: u64,
    family: GateFamily,
) -> Result<Circuit, CircuitError> {
    generate_rqc_with(
        graph,
        depth,
        seed,
        &RqcOptions {
            family,
            ..RqcOptions::default()
        },
    )
}

pub fn generate_rqc_with(
    graph: &CircuitGraph,
    depth: usize,
    seed: u64,
    opts: &RqcOptions,
) -> Result<Circuit, CircuitError> {
    if depth == 0 {
        return Err(CircuitError::ZeroDepth);
    }
    if opts.rotations.is_empty() {
        return Err(CircuitError::EmptyGateSet);
    }
    let layers = coupler_layers(graph);
    let pattern = match &opts.pattern {
        Some(p) => p.clone(),
        None => default_pattern(layers.len()),
    };
    if pattern.is_empty() {
        return Err(CircuitError::BadPattern {
            layer: 0,
            available: layers.len(),
        });
    }
    if let Some(&bad) = pattern.iter().find(|&&l| l >= layers.len().max(1)) {
        return Err(CircuitError::BadPattern {
            layer: bad,
            available: layers.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = graph.num_qubits();
    let kind = opts.gate_kind();
    let mut last: Vec<Option<usize>> = vec![None; n];
    let mut singles = Vec::with_capacity(n * (depth + 1));
    let mut cycles = Vec::with_capacity(depth);
    for moment in 0..=depth {
        for (q, prev) in last.iter_mut().enumerate() {
            let choice = pick_rotation(&mut rng, opts.rotations.len(), *prev);
            *prev = Some(choice);
            singles.push(SingleQubitGate {
                qubit: q,
                moment,
                matrix: opts.rotations[choice].matrix(),
            });
        }
        if moment < depth {
            let layer = layers
                .get(pattern[moment % pattern.len()])
                .map(Vec::as_slice)
                .unwrap_or(&[]);
            let cycle: Vec<Gate> = layer
                .iter()
                .map(|&e| Gate::new(graph.edges()[e], kind))
                .collect();
            cycles.push(cycle);
        }
    }
    Circuit::new(graph.clone(), cycles, singles)
}

fn pick_rotation(rng: &mut ChaCha8Rng, count: usize, prev: Option<usize>) -> usize {
    match prev {
        Some(p) if count > 1 => {
            let r = rng.gen_range(0..count - 1);
            if r >= p {
                r + 1
            } else {
                r
            }
        }
        _ => rng.gen_range(0..count),
    }
}

fn default_pattern(layers: usize) -> Vec<usize> {
    if layers == 4 {
        vec![0, 1, 2, 3, 2, 3, 0, 1]
    } else {
        (0..layers.max(1)).collect()
    }
}

/// Partition of the edge ids into matchings. Deterministic.
pub fn coupler_layers(graph: &CircuitGraph) -> Vec<Vec<usize>> {
    let colours = if graph.bipartition().is_some() {
        bipartite_colouring(graph)
    } else {
        greedy_colouring(graph)
    };
    let k = colours.iter().copied().max().map_or(0, |c| c + 1);
    let mut layers = vec![Vec::new(); k];
    for (e, &c) in colours.iter().enumerate() {
        layers[c].push(e);
    }
    layers
}

fn greedy_colouring(graph: &CircuitGraph) -> Vec<usize> {
    let n = graph.num_qubits();
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut colours = Vec::with_capacity(graph.num_edges());
    for &(a, b) in graph.edges() {
        let c = (0..)
            .find(|c| !used[a].contains(c) && !used[b].contains(c))
            .unwrap();
        used[a].push(c);
        used[b].push(c);
        colours.push(c);
    }
    colours
}

// Konig's theorem: recolour an alternating a/b path so that colour a becomes
// free at both endpoints. Uses exactly max-degree colours.
fn bipartite_colouring(graph: &CircuitGraph) -> Vec<usize> {
    let n = graph.num_qubits();
    let delta = graph.max_degree();
    let edges = graph.edges();
    let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; n];
    let mut colour: Vec<usize> = vec![usize::MAX; edges.len()];
    let free =
        |at: &Vec<Vec<Option<usize>>>, v: usize| at[v].iter().position(Option::is_none).unwrap();
    for (e, &(u, v)) in edges.iter().enumerate() {
        let a = free(&at, u);
        if at[v][a].is_some() {
            let b = free(&at, v);
            let mut path = Vec::new();
            let (mut cur, mut col) = (v, a);
            while let Some(pe) = at[cur][col] {
                path.push(pe);
                let (x, y) = edges[pe];
                cur = if x == cur { y } else { x };
                col = if col == a { b } else { a };
            }
            for &pe in &path {
                let (x, y) = edges[pe];
                at[x][colour[pe]] = None;
                at[y][colour[pe]] = None;
            }
            for &pe in &path {
                let (x, y) = edges[pe];
                colour[pe] = if colour[pe] == a { b } else { a };
                at[x][colour[pe]] = Some(pe);
                at[y][colour[pe]] = Some(pe);
            }
        }
        colour[e] = a;
        at[u][a] = Some(e);
        at[v][a] = Some(e);
    }
    colour
}

#[cfg(test)]
mod tests {
    use super::super::lattice::{self, LatticeKind};
    use super::*;
    use proptest::prelude::*;

    fn check_invariants(c: &Circuit) {
        for cycle in c.cycles() {
            let mut used = vec![false; c.num_qubits()];
            for g in cycle {
                assert!(c.graph().has_edge(g.pair.0, g.pair.1));
                assert!(!used[g.pair.0] && !used[g.pair.1]);
                used[g.pair.0] = true;
                used[g.pair.1] = true;
            }
        }
    }

    #[test]
    fn layers_are_matchings_covering_all_edges() {
        for g in [
            lattice::generate_lattice(LatticeKind::Square, 4, 5).unwrap(),
            lattice::generate_lattice(LatticeKind::SycamoreLike, 5, 4).unwrap(),
            lattice::sycamore54().graph,
        ] {
            let layers = coupler_layers(&g);
            assert_eq!(layers.len(), g.max_degree());
            let mut all: Vec<usize> = layers.concat();
            all.sort_unstable();
            assert_eq!(all, (0..g.num_edges()).collect::<Vec<_>>());
            for layer in &layers {
                let mut used = vec![false; g.num_qubits()];
                for &e in layer {
                    let (a, b) = g.edges()[e];
                    assert!(!used[a] && !used[b]);
                    used[a] = true;
                    used[b] = true;
                }
            }
        }
        let tri = CircuitGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(coupler_layers(&tri).len(), 3);
    }

    #[test]
    fn deterministic_and_valid() {
        let g = lattice::generate_lattice(LatticeKind::Square, 2, 2).unwrap();
        let a = generate_rqc(&g, 1, 7, GateFamily::Cz).unwrap();
        check_invariants(&a);
        assert_eq!(a, generate_rqc(&g, 1, 7, GateFamily::Cz).unwrap());
        assert_ne!(a, generate_rqc(&g, 1, 8, GateFamily::Cz).unwrap());
        assert_eq!(a.single_qubit_gates().len(), 4 * 2);
        assert_eq!(
            generate_rqc(&g, 0, 7, GateFamily::Cz).unwrap_err(),
            CircuitError::ZeroDepth
        );
        assert!(matches!(
            "swap".parse::<GateFamily>(),
            Err(CircuitError::UnknownGate(_))
        ));
    }

    #[test]
    fn no_repeated_rotation() {
        let g = lattice::generate_lattice(LatticeKind::Square, 3, 3).unwrap();
        let c = generate_rqc(&g, 6, 1, GateFamily::Fsim).unwrap();
        let singles = c.single_qubit_gates();
        for q in 0..9 {
            let seq: Vec<&SingleQubitGate> = singles.iter().filter(|s| s.qubit == q).collect();
            assert_eq!(seq.len(), 7);
            for w in seq.windows(2) {
                assert_ne!(w[0].matrix, w[1].matrix);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn generated_circuits_validate(seed in any::<u64>(), rows in 2usize..5, cols in 2usize..5, depth in 1usize..10, syc in any::<bool>()) {
            let kind = if syc { LatticeKind::SycamoreLike } else { LatticeKind::Square };
            let g = lattice::generate_lattice(kind, rows, cols).unwrap();
            let c = generate_rqc(&g, depth, seed, GateFamily::Iswap).unwrap();
            check_invariants(&c);
            prop_assert_eq!(c.depth(), depth);
        }
    }
}
