//! Closed overlap networks, cut slicing and path-ordered contraction.
//!
//! Every axis of a network tensor carries the id of its edge as label, so two
//! tensors contract over exactly the labels they share.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::path::{find_optimal_path, PathError, PathNetwork, PathOptions};
use crate::tensor::{contract_pair, contraction_cost, AxisLabel, Tensor, TensorError};
use crate::tns::{bond_label, TnsState};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("states live on different graphs")]
    GraphMismatch,
    #[error("edge {0} is not in the network")]
    UnknownEdge(usize),
    #[error("edge {0} is cut twice")]
    DuplicateCut(usize),
    #[error("cutting edge {0} disconnects the network")]
    CutDisconnects(usize),
    #[error("slice {index} out of range (count {count})")]
    SliceOutOfRange { index: u128, count: u128 },
    #[error("slice count overflows")]
    SliceCountOverflow,
    #[error("path is not a permutation of the nodes")]
    BadPath,
    #[error("tensor {node} does not match the edge registry")]
    Inconsistent { node: usize },
    #[error("no cut set reaches rank cap {max_rank}; best plan cuts {:?}", best.cut_edges)]
    CapUnachievable { max_rank: usize, best: CutPlan },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkEdge {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub extent: usize,
}

/// A closed network: one tensor per node, every axis on a registered edge.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorNetwork {
    nodes: Vec<Tensor>,
    /// Sorted by id.
    edges: Vec<NetworkEdge>,
}

impl TensorNetwork {
    /// Checks that every axis label names a registered edge of the right
    /// extent, incident to that node.
    pub fn new(nodes: Vec<Tensor>, mut edges: Vec<NetworkEdge>) -> Result<Self, NetworkError> {
        edges.sort_by_key(|e| e.id);
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(NetworkError::DuplicateCut(w[0].id));
            }
        }
        let net = TensorNetwork { nodes, edges };
        for (q, t) in net.nodes.iter().enumerate() {
            let incident = net.edges.iter().filter(|e| e.a == q || e.b == q).count();
            let ok = t.rank() == incident
                && t.labels().iter().zip(t.dims()).all(|(l, &d)| {
                    net.edge(l.0 as usize)
                        .is_some_and(|e| (e.a == q || e.b == q) && e.extent == d)
                });
            if !ok {
                return Err(NetworkError::Inconsistent { node: q });
            }
        }
        Ok(net)
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Tensor] {
        &self.nodes
    }

    pub fn edges(&self) -> &[NetworkEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Option<&NetworkEdge> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .ok()
            .map(|i| &self.edges[i])
    }

    /// The symbolic view used by path search.
    pub fn path_network(&self) -> Result<PathNetwork, PathError> {
        PathNetwork::new(
            self.nodes.len(),
            self.edges
                .iter()
                .map(|e| (e.a, e.b, e.extent as u64))
                .collect(),
        )
    }

    fn connected_without(&self, removed: &[usize]) -> bool {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for e in self.edges.iter().filter(|e| !removed.contains(&e.id)) {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &r in &adj[v] {
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                    queue.push_back(r);
                }
            }
        }
        count == n
    }
}

const PSI_LABEL_OFFSET: u64 = 1 << 40;

/// `<psi|phi>` as a closed network: node `j` is
/// `C^j = sum_s A^j[s] conj(B^j[s])`, and the phi and psi bonds of each graph
/// edge merge into one axis of extent `bond_phi * bond_psi`, index
/// `a * bond_psi + b`.
pub fn build_overlap_network(
    phi: &TnsState,
    psi: &TnsState,
) -> Result<TensorNetwork, NetworkError> {
    let graph = phi.graph();
    if graph != psi.graph() {
        return Err(NetworkError::GraphMismatch);
    }
    let mut nodes = Vec::with_capacity(graph.num_qubits());
    for q in 0..graph.num_qubits() {
        let a = phi.node(q);
        let mut b = psi.node(q).conj();
        let shifted: Vec<AxisLabel> = b
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if i == 0 {
                    *l
                } else {
                    AxisLabel(l.0 + PSI_LABEL_OFFSET)
                }
            })
            .collect();
        b.set_labels(shifted)?;
        let t = contract_pair(a, &b, &[(0, 0)])?;
        // t axes: phi bonds (d), psi bonds (d); interleave and merge
        let d = a.rank() - 1;
        let perm: Vec<usize> = (0..d).flat_map(|i| [i, d + i]).collect();
        let t = t.permute(&perm)?;
        let dims: Vec<usize> = (0..d).map(|i| a.dims()[i + 1] * b.dims()[i + 1]).collect();
        let labels = a.labels()[1..].to_vec();
        nodes.push(t.reshape(dims, labels)?);
    }
    let edges = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(id, &(a, b))| NetworkEdge {
            id,
            a,
            b,
            extent: phi.bond_dims()[id] * psi.bond_dims()[id],
        })
        .collect();
    debug_assert!(nodes
        .iter()
        .all(|t| t.labels().iter().all(|l| l.0 < PSI_LABEL_OFFSET)));
    TensorNetwork::new(nodes, edges)
}

/// Edges fixed to one index value per slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPlan {
    pub cut_edges: Vec<usize>,
    pub extents: Vec<usize>,
    pub slice_count: u128,
}

impl CutPlan {
    pub fn empty() -> Self {
        CutPlan {
            cut_edges: Vec::new(),
            extents: Vec::new(),
            slice_count: 1,
        }
    }

    /// Index value of every cut edge in slice `index`; the first cut edge is
    /// the most significant digit.
    pub fn decode(&self, index: u128) -> Result<Vec<usize>, NetworkError> {
        if index >= self.slice_count {
            return Err(NetworkError::SliceOutOfRange {
                index,
                count: self.slice_count,
            });
        }
        let mut rest = index;
        let mut digits = vec![0; self.extents.len()];
        for (d, &x) in digits.iter_mut().zip(&self.extents).rev() {
            *d = (rest % x as u128) as usize;
            rest /= x as u128;
        }
        Ok(digits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutSpec {
    None,
    Explicit(Vec<usize>),
    /// Cut until one slice admits a pruned path with this rank cap.
    Auto {
        max_rank: usize,
        state_budget: Option<usize>,
    },
}

pub fn plan_cuts(net: &TensorNetwork, spec: &CutSpec) -> Result<CutPlan, NetworkError> {
    match spec {
        CutSpec::None => Ok(CutPlan::empty()),
        CutSpec::Explicit(ids) => explicit_plan(net, ids),
        CutSpec::Auto {
            max_rank,
            state_budget,
        } => auto_plan(net, *max_rank, *state_budget),
    }
}

fn explicit_plan(net: &TensorNetwork, ids: &[usize]) -> Result<CutPlan, NetworkError> {
    let mut extents = Vec::with_capacity(ids.len());
    let mut count: u128 = 1;
    for (i, &id) in ids.iter().enumerate() {
        let e = net.edge(id).ok_or(NetworkError::UnknownEdge(id))?;
        if ids[..i].contains(&id) {
            return Err(NetworkError::DuplicateCut(id));
        }
        if !net.connected_without(&ids[..=i]) {
            return Err(NetworkError::CutDisconnects(id));
        }
        extents.push(e.extent);
        count = count
            .checked_mul(e.extent as u128)
            .ok_or(NetworkError::SliceCountOverflow)?;
    }
    Ok(CutPlan {
        cut_edges: ids.to_vec(),
        extents,
        slice_count: count,
    })
}

fn slice_admits(
    net: &TensorNetwork,
    plan: &CutPlan,
    max_rank: usize,
    budget: Option<usize>,
) -> Result<bool, NetworkError> {
    let slice = slice_network(net, plan, 0)?;
    let pn = slice.path_network()?;
    if pn.max_degree() > max_rank {
        return Ok(false);
    }
    let opts = PathOptions {
        state_budget: budget,
        ..PathOptions::pruned(max_rank)
    };
    match find_optimal_path(&pn, &opts) {
        Ok(_) => Ok(true),
        Err(PathError::Exhausted { .. } | PathError::OutOfBudget { .. } | PathError::Overflow) => {
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

// Separators are the edge sets between consecutive BFS layers from a
// pseudo-peripheral node; thinnest first, ties broken towards the middle.
fn auto_plan(
    net: &TensorNetwork,
    max_rank: usize,
    budget: Option<usize>,
) -> Result<CutPlan, NetworkError> {
    let mut plan = CutPlan::empty();
    if slice_admits(net, &plan, max_rank, budget)? {
        return Ok(plan);
    }
    let n = net.num_nodes();
    let mut adj = vec![Vec::new(); n];
    for e in net.edges() {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    let bfs = |start: usize| {
        let mut layer = vec![usize::MAX; n];
        layer[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &r in &adj[v] {
                if layer[r] == usize::MAX {
                    layer[r] = layer[v] + 1;
                    queue.push_back(r);
                }
            }
        }
        layer
    };
    let far = |layer: &[usize]| {
        (0..n)
            .max_by_key(|&q| (layer[q], core::cmp::Reverse(q)))
            .unwrap()
    };
    let start = far(&bfs(far(&bfs(0))));
    let layer = bfs(start);
    let depth = layer.iter().copied().max().unwrap_or(0);

    let mut separators: Vec<(usize, Vec<&NetworkEdge>)> = (0..depth)
        .map(|t| {
            let mut s: Vec<&NetworkEdge> = net
                .edges()
                .iter()
                .filter(|e| layer[e.a].min(layer[e.b]) == t && layer[e.a] != layer[e.b])
                .collect();
            s.sort_by_key(|e| (core::cmp::Reverse(e.extent), e.id));
            (t, s)
        })
        .collect();
    let mid = depth.saturating_sub(1) / 2;
    separators.sort_by_key(|(t, s)| (s.len(), t.abs_diff(mid), *t));

    for (_, sep) in separators {
        for e in sep {
            let mut ids = plan.cut_edges.clone();
            ids.push(e.id);
            if !net.connected_without(&ids) {
                continue;
            }
            plan = explicit_plan(net, &ids)?;
            if slice_admits(net, &plan, max_rank, budget)? {
                return Ok(plan);
            }
        }
    }
    Err(NetworkError::CapUnachievable {
        max_rank,
        best: plan,
    })
}

/// The network with every cut edge fixed to its value in slice `index` and
/// removed from the registry.
pub fn slice_network(
    net: &TensorNetwork,
    plan: &CutPlan,
    index: u128,
) -> Result<TensorNetwork, NetworkError> {
    let digits = plan.decode(index)?;
    let mut nodes = net.nodes.clone();
    for (&id, &v) in plan.cut_edges.iter().zip(&digits) {
        let e = net.edge(id).ok_or(NetworkError::UnknownEdge(id))?;
        for q in [e.a, e.b] {
            let axis = nodes[q]
                .axis_of(bond_label(id))
                .ok_or(NetworkError::Inconsistent { node: q })?;
            nodes[q] = nodes[q].select(axis, v)?;
        }
    }
    let edges = net
        .edges
        .iter()
        .filter(|e| !plan.cut_edges.contains(&e.id))
        .copied()
        .collect();
    Ok(TensorNetwork { nodes, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ContractionStats {
    /// Largest rank among the running intermediate and the first tensor.
    pub peak_rank: usize,
    /// Sum of pairwise contraction costs.
    pub multiplies: u128,
}

/// Absorbs the node tensors one by one in `path` order.
pub fn contract_along_path(
    net: &TensorNetwork,
    path: &[usize],
) -> Result<(C64, ContractionStats), NetworkError> {
    let n = net.num_nodes();
    let mut seen = vec![false; n];
    if path.len() != n
        || path
            .iter()
            .any(|&q| q >= n || core::mem::replace(&mut seen[q], true))
    {
        return Err(NetworkError::BadPath);
    }
    let mut acc = net.nodes[path[0]].clone();
    let mut stats = ContractionStats {
        peak_rank: acc.rank(),
        multiplies: 0,
    };
    for &q in &path[1..] {
        let t = &net.nodes[q];
        let pairs: Vec<(usize, usize)> = acc
            .labels()
            .iter()
            .enumerate()
            .filter_map(|(i, l)| t.axis_of(*l).map(|j| (i, j)))
            .collect();
        let cost = contraction_cost(acc.dims(), t.dims(), &pairs)?;
        stats.multiplies = stats
            .multiplies
            .checked_add(cost)
            .ok_or(PathError::Overflow)?;
        acc = contract_pair(&acc, t, &pairs)?;
        stats.peak_rank = stats.peak_rank.max(acc.rank());
    }
    Ok((acc.scalar_value(), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bitstring;
    use crate::circuit::lattice::{generate_lattice, LatticeKind};
    use crate::circuit::rqc::{generate_rqc, GateFamily};
    use crate::circuit::{fuse_single_qubit_gates, CircuitGraph};
    use crate::oracle::amplitude_oracle;
    use crate::path::path_score;
    use crate::tns::{two_sided_evolve, Direction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_network(rng: &mut ChaCha8Rng, n: usize) -> TensorNetwork {
        let mut pairs = Vec::new();
        for v in 1..n {
            pairs.push((rng.gen_range(0..v), v));
        }
        for a in 0..n {
            for b in a + 1..n {
                if !pairs.contains(&(a, b)) && rng.gen_bool(0.25) {
                    pairs.push((a, b));
                }
            }
        }
        let edges: Vec<NetworkEdge> = pairs
            .iter()
            .enumerate()
            .map(|(id, &(a, b))| NetworkEdge {
                id,
                a,
                b,
                extent: rng.gen_range(1..=3),
            })
            .collect();
        let nodes = (0..n)
            .map(|q| {
                let mine: Vec<&NetworkEdge> =
                    edges.iter().filter(|e| e.a == q || e.b == q).collect();
                let dims: Vec<usize> = mine.iter().map(|e| e.extent).collect();
                let labels = mine.iter().map(|e| bond_label(e.id)).collect();
                let len = dims.iter().product();
                let data = (0..len)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                Tensor::new(dims, data, labels).unwrap()
            })
            .collect();
        TensorNetwork::new(nodes, edges).unwrap()
    }

    fn overlap(circuit_seed: u64, rows: usize, cols: usize, depth: usize) -> (TensorNetwork, C64) {
        let g = generate_lattice(LatticeKind::Square, rows, cols).unwrap();
        let circ = generate_rqc(&g, depth, circuit_seed, GateFamily::Fsim).unwrap();
        let n = g.num_qubits();
        let zero = Bitstring::zeros(n);
        let out = Bitstring::from_index(circuit_seed as usize % (1 << n), n);
        let ts = two_sided_evolve(&circ, &zero, &out, depth / 2, TOL).unwrap();
        let net = build_overlap_network(&ts.phi, &ts.psi).unwrap();
        (net, amplitude_oracle(&circ, &zero, &out).unwrap())
    }

    #[test]
    fn product_state_overlaps() {
        let g = CircuitGraph::new(2, vec![(0, 1)]).unwrap();
        let zero = TnsState::init_state(&g, &"00".parse().unwrap()).unwrap();
        let net = build_overlap_network(&zero, &zero).unwrap();
        assert!(net.nodes().iter().all(|t| t.len() == 1));
        assert_eq!(contract_along_path(&net, &[0, 1]).unwrap().0, c(1.0, 0.0));
        let one = TnsState::init_state(&g, &"10".parse().unwrap()).unwrap();
        let net = build_overlap_network(&zero, &one).unwrap();
        assert_eq!(contract_along_path(&net, &[1, 0]).unwrap().0, c(0.0, 0.0));
        let other = TnsState::init_state(
            &CircuitGraph::new(2, vec![(0, 1)]).unwrap(),
            &"00".parse().unwrap(),
        )
        .unwrap();
        assert!(build_overlap_network(&zero, &other).is_ok());
        let tri = CircuitGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let three = TnsState::init_state(&tri, &"000".parse().unwrap()).unwrap();
        assert_eq!(
            build_overlap_network(&zero, &three).unwrap_err(),
            NetworkError::GraphMismatch
        );
    }

    #[test]
    fn single_node_scalar() {
        let net = TensorNetwork::new(vec![Tensor::scalar(c(0.5, -2.0))], vec![]).unwrap();
        assert_eq!(contract_along_path(&net, &[0]).unwrap().0, c(0.5, -2.0));
        assert_eq!(
            contract_along_path(&net, &[]).unwrap_err(),
            NetworkError::BadPath
        );
    }

    #[test]
    fn overlap_matches_oracle() {
        let (net, want) = overlap(5, 2, 5, 6);
        let pn = net.path_network().unwrap();
        let r = find_optimal_path(&pn, &PathOptions::unpruned()).unwrap();
        let (got, stats) = contract_along_path(&net, &r.path).unwrap();
        assert!((got - want).norm() < 1e-10, "{got} vs {want}");
        assert_eq!(stats.multiplies, r.score);
        assert_eq!(stats.peak_rank, r.peak_rank);
    }

    #[test]
    fn overlap_symmetry() {
        let g = generate_lattice(LatticeKind::Square, 2, 3).unwrap();
        let circ = fuse_single_qubit_gates(&generate_rqc(&g, 4, 9, GateFamily::Iswap).unwrap());
        let mut a = TnsState::init_state(&g, &"010110".parse().unwrap()).unwrap();
        let mut b = TnsState::init_state(&g, &"111000".parse().unwrap()).unwrap();
        a.evolve(&circ, 0..2, Direction::Forward, TOL).unwrap();
        b.evolve(&circ, 1..4, Direction::Inverse, TOL).unwrap();
        let path: Vec<usize> = (0..6).collect();
        let (ab, _) = contract_along_path(&build_overlap_network(&a, &b).unwrap(), &path).unwrap();
        let (ba, _) = contract_along_path(&build_overlap_network(&b, &a).unwrap(), &path).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn order_independence_and_cost_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(2..7);
            let net = random_network(&mut rng, n);
            let pn = net.path_network().unwrap();
            let fwd: Vec<usize> = (0..n).collect();
            let rev: Vec<usize> = (0..n).rev().collect();
            let (x, sx) = contract_along_path(&net, &fwd).unwrap();
            let (y, sy) = contract_along_path(&net, &rev).unwrap();
            assert!((x - y).norm() <= 1e-12 * x.norm().max(1.0));
            assert_eq!(sx.multiplies, path_score(&pn, &fwd).unwrap().0);
            assert_eq!(sy.multiplies, path_score(&pn, &rev).unwrap().0);
        }
    }

    #[test]
    fn slice_sum_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let n = rng.gen_range(4..9);
            let net = random_network(&mut rng, n);
            let path: Vec<usize> = (0..n).collect();
            let (whole, _) = contract_along_path(&net, &path).unwrap();
            // cut the non-tree edges, which never disconnect
            let extra: Vec<usize> = net
                .edges()
                .iter()
                .filter(|e| e.id >= n - 1)
                .map(|e| e.id)
                .take(3)
                .collect();
            let plan = plan_cuts(&net, &CutSpec::Explicit(extra.clone())).unwrap();
            assert_eq!(
                plan.slice_count,
                extra
                    .iter()
                    .map(|&id| net.edge(id).unwrap().extent as u128)
                    .product::<u128>()
            );
            let mut sum = c(0.0, 0.0);
            for i in 0..plan.slice_count {
                let s = slice_network(&net, &plan, i).unwrap();
                assert_eq!(s.edges().len(), net.edges().len() - extra.len());
                sum += contract_along_path(&s, &path).unwrap().0;
            }
            assert!((sum - whole).norm() <= 1e-12 * whole.norm().max(1.0));
        }
    }

    #[test]
    fn plan_errors_and_decoding() {
        let g = generate_lattice(LatticeKind::Square, 2, 2).unwrap();
        let s = TnsState::init_state(&g, &"0000".parse().unwrap()).unwrap();
        let net = build_overlap_network(&s, &s).unwrap();
        assert_eq!(
            plan_cuts(&net, &CutSpec::Explicit(vec![9])).unwrap_err(),
            NetworkError::UnknownEdge(9)
        );
        assert_eq!(
            plan_cuts(&net, &CutSpec::Explicit(vec![0, 0])).unwrap_err(),
            NetworkError::DuplicateCut(0)
        );
        assert!(matches!(
            plan_cuts(&net, &CutSpec::Explicit(vec![0, 1, 2])),
            Err(NetworkError::CutDisconnects(_))
        ));
        let unchanged = slice_network(&net, &CutPlan::empty(), 0).unwrap();
        assert_eq!(unchanged, net);
        assert!(slice_network(&net, &CutPlan::empty(), 1).is_err());
        let plan = CutPlan {
            cut_edges: vec![0, 1],
            extents: vec![2, 3],
            slice_count: 6,
        };
        assert_eq!(plan.decode(0).unwrap(), vec![0, 0]);
        assert_eq!(plan.decode(4).unwrap(), vec![1, 1]);
        assert_eq!(plan.decode(5).unwrap(), vec![1, 2]);
        assert!(plan.decode(6).is_err());
    }

    #[test]
    fn auto_cuts() {
        let (net, want) = overlap(2, 3, 4, 8);
        let generous = plan_cuts(
            &net,
            &CutSpec::Auto {
                max_rank: 12,
                state_budget: None,
            },
        )
        .unwrap();
        assert_eq!(generous.slice_count, 1);
        let pn = net.path_network().unwrap();
        let need =
            find_optimal_path(&pn, &PathOptions::pruned(pn.max_degree())).map(|r| r.peak_rank);
        let cap = pn.max_degree();
        match plan_cuts(
            &net,
            &CutSpec::Auto {
                max_rank: cap,
                state_budget: Some(200_000),
            },
        ) {
            Ok(plan) => {
                if need.is_err() {
                    assert!(plan.slice_count > 1);
                }
                let first = slice_network(&net, &plan, 0)
                    .unwrap()
                    .path_network()
                    .unwrap();
                let path = find_optimal_path(&first, &PathOptions::pruned(cap))
                    .unwrap()
                    .path;
                let mut sum = c(0.0, 0.0);
                for i in 0..plan.slice_count {
                    sum += contract_along_path(&slice_network(&net, &plan, i).unwrap(), &path)
                        .unwrap()
                        .0;
                }
                assert!((sum - want).norm() < 1e-10);
            }
            Err(NetworkError::CapUnachievable { best, .. }) => assert!(best.slice_count >= 1),
            Err(e) => panic!("{e}"),
        }
    }
}
