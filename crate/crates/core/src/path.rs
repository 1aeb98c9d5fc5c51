//! Contraction-order search over a symbolic network.
//!
//! A path is a linear absorption order `i_1, i_2, ..., i_N`: the tensor of
//! `i_{m+1}` is contracted into the running intermediate of `i_1..i_m`. The
//! cost of one step is the multiply count of that pairwise contraction and a
//! path's score is the sum over its steps.
//!
//! The search is best-first over partial paths. The cost of absorbing a node
//! depends only on the set already absorbed, never on its order, so the first
//! time a subset is popped it carries its cheapest score and later arrivals at
//! the same subset are dropped. Optional pruning keeps the search tractable
//! on large lattices: seeding only from boundary nodes, a cap on the rank of
//! every intermediate, and a rule that allows at most one isolated node beside
//! the connected part of the path.
//!
//! Queue order is (score ascending, path length descending, path
//! lexicographically ascending), so runs are deterministic.

use alloc::collections::{BTreeSet, BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::circuit::CircuitGraph;

/// Subsets are bitsets, which bounds the node count.
pub const MAX_NODES: usize = 128;

/// Node count accepted by [`exhaustive_path_oracle`].
pub const EXHAUSTIVE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("network has {nodes} nodes, limit is {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("network has no nodes")]
    Empty,
    #[error("edge ({0}, {1}) is invalid")]
    BadEdge(usize, usize),
    #[error("edge extent must be at least 1")]
    ZeroExtent,
    #[error("network is not connected")]
    NotConnected,
    #[error("rank cap {cap} is below the largest node rank {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("seed {0} is not a node")]
    BadSeed(usize),
    #[error("no seeds given")]
    NoSeeds,
    #[error("no full path under the constraints; largest subset reached has {} nodes: {largest:?}", largest.len())]
    Exhausted { largest: Vec<usize> },
    #[error("search state budget of {budget} exceeded")]
    OutOfBudget { budget: usize },
    #[error("path score overflowed 128 bits")]
    Overflow,
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
}

/// Nodes and weighted edges; no tensor data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathNetwork {
    num_nodes: usize,
    edges: Vec<(usize, usize, u64)>,
    /// `(neighbour, edge id)` per node, sorted.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl PathNetwork {
    /// Parallel edges are allowed and count separately towards rank.
    pub fn new(num_nodes: usize, edges: Vec<(usize, usize, u64)>) -> Result<Self, PathError> {
        if num_nodes == 0 {
            return Err(PathError::Empty);
        }
        if num_nodes > MAX_NODES {
            return Err(PathError::TooLarge {
                nodes: num_nodes,
                limit: MAX_NODES,
            });
        }
        let mut adjacency = vec![Vec::new(); num_nodes];
        for (e, &(a, b, x)) in edges.iter().enumerate() {
            if a >= num_nodes || b >= num_nodes || a == b {
                return Err(PathError::BadEdge(a, b));
            }
            if x == 0 {
                return Err(PathError::ZeroExtent);
            }
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let net = PathNetwork {
            num_nodes,
            edges,
            adjacency,
        };
        if net.components(net.full()) != 1 {
            return Err(PathError::NotConnected);
        }
        Ok(net)
    }

    /// The circuit graph with every edge at extent `extent`.
    pub fn uniform(graph: &CircuitGraph, extent: u64) -> Result<Self, PathError> {
        PathNetwork::new(
            graph.num_qubits(),
            graph.edges().iter().map(|&(a, b)| (a, b, extent)).collect(),
        )
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// Rank of the node tensor.
    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_nodes)
            .map(|q| self.degree(q))
            .max()
            .unwrap_or(0)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].iter().any(|&(r, _)| r == b)
    }

    /// Nodes of less than maximal degree; every node if all degrees agree.
    pub fn boundary(&self) -> Vec<usize> {
        let max = self.max_degree();
        let b: Vec<usize> = (0..self.num_nodes)
            .filter(|&q| self.degree(q) < max)
            .collect();
        if b.is_empty() {
            (0..self.num_nodes).collect()
        } else {
            b
        }
    }

    fn full(&self) -> u128 {
        if self.num_nodes == 128 {
            u128::MAX
        } else {
            (1u128 << self.num_nodes) - 1
        }
    }

    /// Connected components of the subgraph induced by `set`.
    fn components(&self, set: u128) -> usize {
        let mut seen = 0u128;
        let mut count = 0;
        for start in 0..self.num_nodes {
            if set & bit(start) == 0 || seen & bit(start) != 0 {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([start]);
            seen |= bit(start);
            while let Some(v) = queue.pop_front() {
                for &(r, _) in &self.adjacency[v] {
                    if set & bit(r) != 0 && seen & bit(r) == 0 {
                        seen |= bit(r);
                        queue.push_back(r);
                    }
                }
            }
        }
        count
    }

    fn touches(&self, q: usize, set: u128) -> bool {
        self.adjacency[q].iter().any(|&(r, _)| set & bit(r) != 0)
    }

    /// Rank, open-axis extent product and cost of absorbing `q` into `set`.
    fn step(&self, set: u128, frontier: Option<u128>, rank: usize, q: usize) -> Step {
        let mut shared_rank = 0;
        let mut shared = 1u128;
        let mut fresh_rank = 0;
        let mut fresh: Option<u128> = Some(1);
        for &(r, e) in &self.adjacency[q] {
            let x = self.edges[e].2 as u128;
            if set & bit(r) != 0 {
                shared_rank += 1;
                shared = shared.saturating_mul(x);
            } else {
                fresh_rank += 1;
                fresh = fresh.and_then(|f| f.checked_mul(x));
            }
        }
        let cost = frontier.zip(fresh).and_then(|(f, g)| f.checked_mul(g));
        let frontier = frontier
            .zip(fresh)
            .and_then(|(f, g)| (f / shared).checked_mul(g));
        Step {
            rank: rank - shared_rank + fresh_rank,
            frontier,
            cost,
        }
    }
}

fn bit(q: usize) -> u128 {
    1u128 << q
}

struct Step {
    rank: usize,
    frontier: Option<u128>,
    cost: Option<u128>,
}

/// A partial path with its accumulated score and connectivity flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathState {
    pub path: Vec<usize>,
    pub score: u128,
    /// `None` when the absorbed nodes are connected, otherwise the one
    /// isolated node.
    pub isolated: Option<usize>,
}

impl PathState {
    pub fn seed(q: usize) -> Self {
        PathState {
            path: vec![q],
            score: 0,
            isolated: None,
        }
    }
}

/// Cost of absorbing `next` into the intermediate of `path`.
pub fn score_increment(net: &PathNetwork, path: &[usize], next: usize) -> Result<u128, PathError> {
    let set = subset_of(net, path)?;
    if next >= net.num_nodes || set & bit(next) != 0 {
        return Err(PathError::InvalidPath(
            "next node is absent or already absorbed",
        ));
    }
    let (frontier, rank) = frontier_of(net, set);
    net.step(set, frontier, rank, next)
        .cost
        .ok_or(PathError::Overflow)
}

/// Total score of a full or partial path and the largest intermediate rank.
pub fn path_score(net: &PathNetwork, path: &[usize]) -> Result<(u128, usize), PathError> {
    subset_of(net, path)?;
    let mut set = 0u128;
    let mut score = 0u128;
    let mut peak = path.first().map_or(0, |&q| net.degree(q));
    for (i, &q) in path.iter().enumerate() {
        if i > 0 {
            let (frontier, rank) = frontier_of(net, set);
            let s = net.step(set, frontier, rank, q);
            score = s
                .cost
                .and_then(|c| c.checked_add(score))
                .ok_or(PathError::Overflow)?;
            peak = peak.max(s.rank);
        }
        set |= bit(q);
    }
    Ok((score, peak))
}

fn subset_of(net: &PathNetwork, path: &[usize]) -> Result<u128, PathError> {
    let mut set = 0u128;
    for &q in path {
        if q >= net.num_nodes {
            return Err(PathError::InvalidPath("node out of range"));
        }
        if set & bit(q) != 0 {
            return Err(PathError::InvalidPath("repeated node"));
        }
        set |= bit(q);
    }
    Ok(set)
}

fn frontier_of(net: &PathNetwork, set: u128) -> (Option<u128>, usize) {
    let mut product: Option<u128> = Some(1);
    let mut rank = 0;
    for &(a, b, x) in &net.edges {
        if (set & bit(a) != 0) != (set & bit(b) != 0) {
            rank += 1;
            product = product.and_then(|p| p.checked_mul(x as u128));
        }
    }
    (product, rank)
}

/// `None` if the nodes of `path` induce a connected subgraph, otherwise the
/// single isolated node. When both parts are single nodes the later one is
/// the isolated one.
pub fn connectivity(path: &[usize], net: &PathNetwork) -> Result<Option<usize>, PathError> {
    let set = subset_of(net, path)?;
    if path.is_empty() {
        return Err(PathError::InvalidPath("empty path"));
    }
    match net.components(set) {
        1 => Ok(None),
        2 => {
            let lone: Vec<usize> = path
                .iter()
                .copied()
                .filter(|&q| !net.touches(q, set & !bit(q)))
                .collect();
            lone.last().map(|&q| Some(q)).ok_or(PathError::InvalidPath(
                "two components, neither a single node",
            ))
        }
        _ => Err(PathError::InvalidPath("more than one isolated component")),
    }
}

/// Candidate next nodes of `state` under the rank cap and, if enabled, the
/// connectivity rule.
pub fn neighbours(
    state: &PathState,
    net: &PathNetwork,
    max_rank: Option<usize>,
    connectivity_rule: bool,
) -> Vec<usize> {
    let set = match subset_of(net, &state.path) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let (frontier, rank) = frontier_of(net, set);
    (0..net.num_nodes)
        .filter(|&q| set & bit(q) == 0)
        .filter(|&q| allowed(net, set, state.isolated, q, connectivity_rule).is_some())
        .filter(|&q| max_rank.is_none_or(|m| net.step(set, frontier, rank, q).rank <= m))
        .collect()
}

/// The new isolated flag if `q` may join, `None` if it may not.
#[allow(clippy::option_option)]
fn allowed(
    net: &PathNetwork,
    set: u128,
    isolated: Option<usize>,
    q: usize,
    rule: bool,
) -> Option<Option<usize>> {
    if !rule {
        return Some(None);
    }
    match isolated {
        None if net.touches(q, set) => Some(None),
        None => Some(Some(q)),
        Some(iso) => {
            let rest = set & !bit(iso);
            (net.adjacent(q, iso) && net.touches(q, rest)).then_some(None)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seeds {
    /// [`PathNetwork::boundary`].
    Boundary,
    All,
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathOptions {
    pub seeds: Seeds,
    /// Largest intermediate rank allowed; `None` for no cap.
    pub max_rank: Option<usize>,
    pub connectivity_rule: bool,
    /// Ceiling on states pushed to the queue.
    pub state_budget: Option<usize>,
}

impl PathOptions {
    /// All seeds, no cap, no connectivity rule: the exact minimum.
    pub fn unpruned() -> Self {
        PathOptions {
            seeds: Seeds::All,
            max_rank: None,
            connectivity_rule: false,
            state_budget: None,
        }
    }

    /// Boundary seeds, the connectivity rule and the given cap.
    pub fn pruned(max_rank: usize) -> Self {
        PathOptions {
            seeds: Seeds::Boundary,
            max_rank: Some(max_rank),
            connectivity_rule: true,
            state_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathResult {
    pub path: Vec<usize>,
    pub score: u128,
    pub peak_rank: usize,
    /// Distinct subsets finalized before the full path was popped.
    pub expanded: usize,
}

#[derive(Debug, PartialEq, Eq)]
struct Entry {
    score: u128,
    path: Vec<u8>,
    set: u128,
    isolated: Option<usize>,
    rank: usize,
    frontier: Option<u128>,
    peak: usize,
}

impl Ord for Entry {
    // BinaryHeap pops the greatest: lower score, then longer path, then the
    // lexicographically smaller path count as greater
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .cmp(&self.score)
            .then_with(|| self.path.len().cmp(&other.path.len()))
            .then_with(|| other.path.cmp(&self.path))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn find_optimal_path(net: &PathNetwork, opts: &PathOptions) -> Result<PathResult, PathError> {
    let n = net.num_nodes;
    if let Some(cap) = opts.max_rank {
        if cap < net.max_degree() {
            return Err(PathError::CapTooSmall {
                cap,
                needed: net.max_degree(),
            });
        }
    }
    let seeds = match &opts.seeds {
        Seeds::Boundary => net.boundary(),
        Seeds::All => (0..n).collect(),
        Seeds::Explicit(s) => {
            if let Some(&bad) = s.iter().find(|&&q| q >= n) {
                return Err(PathError::BadSeed(bad));
            }
            s.clone()
        }
    };
    if seeds.is_empty() {
        return Err(PathError::NoSeeds);
    }

    let full = net.full();
    let mut queue = BinaryHeap::new();
    let mut pushed = 0usize;
    for &q in &seeds {
        let (frontier, rank) = frontier_of(net, bit(q));
        queue.push(Entry {
            score: 0,
            path: vec![q as u8],
            set: bit(q),
            isolated: None,
            rank,
            frontier,
            peak: rank,
        });
        pushed += 1;
    }
    let mut visited: BTreeSet<u128> = BTreeSet::new();
    let mut largest: Vec<u8> = Vec::new();
    let mut overflowed = false;

    while let Some(top) = queue.pop() {
        if !visited.insert(top.set) {
            continue;
        }
        if top.path.len() > largest.len() {
            largest = top.path.clone();
        }
        if top.set == full {
            debug_assert!(queue.iter().all(|e| e.score >= top.score));
            return Ok(PathResult {
                path: top.path.iter().map(|&q| q as usize).collect(),
                score: top.score,
                peak_rank: top.peak,
                expanded: visited.len(),
            });
        }
        for q in 0..n {
            if top.set & bit(q) != 0 || visited.contains(&(top.set | bit(q))) {
                continue;
            }
            let Some(isolated) = allowed(net, top.set, top.isolated, q, opts.connectivity_rule)
            else {
                continue;
            };
            let s = net.step(top.set, top.frontier, top.rank, q);
            if opts.max_rank.is_some_and(|m| s.rank > m) {
                continue;
            }
            let Some(score) = s.cost.and_then(|c| c.checked_add(top.score)) else {
                overflowed = true;
                continue;
            };
            if let Some(budget) = opts.state_budget {
                if pushed >= budget {
                    return Err(PathError::OutOfBudget { budget });
                }
            }
            pushed += 1;
            let mut path = top.path.clone();
            path.push(q as u8);
            queue.push(Entry {
                score,
                path,
                set: top.set | bit(q),
                isolated,
                rank: s.rank,
                frontier: s.frontier,
                peak: top.peak.max(s.rank),
            });
        }
    }
    if overflowed {
        return Err(PathError::Overflow);
    }
    Err(PathError::Exhausted {
        largest: largest.iter().map(|&q| q as usize).collect(),
    })
}

/// Upper bound on treewidth from min-degree elimination.
pub fn treewidth_upper_bound(net: &PathNetwork) -> usize {
    let n = net.num_nodes;
    let mut adj: Vec<u128> = (0..n)
        .map(|q| net.adjacency[q].iter().fold(0, |m, &(r, _)| m | bit(r)))
        .collect();
    let mut alive = net.full();
    let mut width = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&q| alive & bit(q) != 0)
            .min_by_key(|&q| ((adj[q] & alive).count_ones(), q))
            .unwrap();
        let nb = adj[v] & alive;
        width = width.max(nb.count_ones() as usize);
        for (u, a) in adj.iter_mut().enumerate() {
            if nb & bit(u) != 0 {
                *a |= nb & !bit(u);
            }
        }
        alive &= !bit(v);
    }
    width
}

/// Treewidth bound plus one, raised to the largest node rank if needed.
pub fn default_max_rank(net: &PathNetwork) -> usize {
    (treewidth_upper_bound(net) + 1).max(net.max_degree())
}

/// Runs the search with `opts`, raising the rank cap by one after every
/// exhausted attempt. The cap starts at `opts.max_rank`, or
/// [`default_max_rank`] if that is `None`. Returns the result and the cap that
/// produced it.
pub fn find_path_escalating(
    net: &PathNetwork,
    opts: &PathOptions,
) -> Result<(PathResult, usize), PathError> {
    let mut cap = opts
        .max_rank
        .unwrap_or_else(|| default_max_rank(net))
        .max(net.max_degree());
    let ceiling = net.edges.len().max(net.max_degree());
    loop {
        let attempt = PathOptions {
            max_rank: Some(cap),
            ..opts.clone()
        };
        match find_optimal_path(net, &attempt) {
            Ok(r) => return Ok((r, cap)),
            Err(PathError::Exhausted { largest }) if cap >= ceiling => {
                return Err(PathError::Exhausted { largest })
            }
            Err(PathError::Exhausted { .. }) => cap += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Minimum score over every ordering, with the lexicographically first
/// minimizer. Evaluates each step from the edge lists directly.
pub fn exhaustive_path_oracle(net: &PathNetwork) -> Result<(Vec<usize>, u128), PathError> {
    let n = net.num_nodes;
    if n > EXHAUSTIVE_LIMIT {
        return Err(PathError::TooLarge {
            nodes: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut best: Option<(Vec<usize>, u128)> = None;
    let mut path = Vec::with_capacity(n);
    let mut used = vec![false; n];
    permute(net, &mut path, &mut used, Vec::new(), 0, &mut best)?;
    Ok(best.expect("at least one ordering"))
}

fn permute(
    net: &PathNetwork,
    path: &mut Vec<usize>,
    used: &mut [bool],
    open: Vec<usize>,
    score: u128,
    best: &mut Option<(Vec<usize>, u128)>,
) -> Result<(), PathError> {
    let n = net.num_nodes;
    if path.len() == n {
        if best.as_ref().is_none_or(|(_, s)| score < *s) {
            *best = Some((path.clone(), score));
        }
        return Ok(());
    }
    for q in 0..n {
        if used[q] {
            continue;
        }
        let axes: Vec<usize> = net.adjacency[q].iter().map(|&(_, e)| e).collect();
        let (score, open_next) = if path.is_empty() {
            (0, axes)
        } else {
            // Cost(A, B) = unpaired(A) * unpaired(B) * shared
            let ext = |e: &usize| net.edges[*e].2 as u128;
            let shared: Vec<usize> = open.iter().copied().filter(|e| axes.contains(e)).collect();
            let mut cost = 1u128;
            for e in open
                .iter()
                .filter(|e| !shared.contains(e))
                .chain(axes.iter().filter(|e| !shared.contains(e)))
                .chain(&shared)
            {
                cost = cost.checked_mul(ext(e)).ok_or(PathError::Overflow)?;
            }
            let mut next: Vec<usize> = open
                .iter()
                .copied()
                .filter(|e| !shared.contains(e))
                .collect();
            next.extend(axes.iter().copied().filter(|e| !shared.contains(e)));
            (score.checked_add(cost).ok_or(PathError::Overflow)?, next)
        };
        used[q] = true;
        path.push(q);
        permute(net, path, used, open_next, score, best)?;
        path.pop();
        used[q] = false;
    }
    Ok(())
}
