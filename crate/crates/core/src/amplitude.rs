//! End-to-end single-amplitude computation.
//!
//! [`prepare_amplitude`] does all the sequential work (fusion, two-sided
//! evolution, the overlap network, cut planning and the path search on slice
//! 0). Slices are then independent; [`Prepared::contract_slice`] may be called
//! from any number of threads and [`Prepared::combine`] sums the results in
//! the order given.

use alloc::vec::Vec;

use crate::bits::Bitstring;
use crate::circuit::{fuse_single_qubit_gates, Circuit};
use crate::network::{
    build_overlap_network, contract_along_path, plan_cuts, slice_network, ContractionStats,
    CutPlan, CutSpec, NetworkError, TensorNetwork,
};
use crate::path::{default_max_rank, find_path_escalating, path_score, PathOptions, Seeds};
use crate::tns::two_sided_evolve;
use crate::{Error, C64, DEFAULT_SVD_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutMode {
    None,
    /// Cut until one slice fits the rank cap.
    Auto,
    /// Edge ids of the circuit graph.
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeOptions {
    /// Cycles before this index evolve the input state; `None` is `depth / 2`.
    pub split_cycle: Option<usize>,
    pub cuts: CutMode,
    /// Rank cap for path search and automatic cuts; `None` derives it from
    /// the network's treewidth bound.
    pub max_rank: Option<usize>,
    pub tolerance: f64,
    /// Ceiling on search states per path search.
    pub state_budget: Option<usize>,
    /// Use this contraction order instead of searching.
    pub path: Option<Vec<usize>>,
}

impl Default for AmplitudeOptions {
    fn default() -> Self {
        AmplitudeOptions {
            split_cycle: None,
            cuts: CutMode::None,
            max_rank: None,
            tolerance: DEFAULT_SVD_TOLERANCE,
            state_budget: Some(4_000_000),
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplitudeStats {
    /// Largest intermediate rank actually contracted.
    pub peak_rank: usize,
    /// Multiplies summed over all slices.
    pub multiplies: u128,
    pub slice_count: u128,
    pub cut_edges: Vec<usize>,
    pub path: Vec<usize>,
    /// Search score of the path on one slice.
    pub path_score: u128,
    /// Rank cap the path was found under.
    pub max_rank: usize,
    pub split_cycle: usize,
    /// Largest bond of either state after evolution.
    pub max_bond: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Amplitude {
    pub amplitude: C64,
    pub stats: AmplitudeStats,
}

/// Everything needed to contract the slices of one amplitude.
#[derive(Debug, Clone)]
pub struct Prepared {
    network: TensorNetwork,
    plan: CutPlan,
    path: Vec<usize>,
    path_score: u128,
    max_rank: usize,
    split_cycle: usize,
    max_bond: usize,
}

impl Prepared {
    pub fn network(&self) -> &TensorNetwork {
        &self.network
    }

    pub fn plan(&self) -> &CutPlan {
        &self.plan
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn slice_count(&self) -> u128 {
        self.plan.slice_count
    }

    pub fn contract_slice(&self, index: u128) -> Result<(C64, ContractionStats), Error> {
        let slice = slice_network(&self.network, &self.plan, index)?;
        Ok(contract_along_path(&slice, &self.path)?)
    }

    /// Sums slice results in iteration order.
    pub fn combine<I: IntoIterator<Item = (C64, ContractionStats)>>(self, results: I) -> Amplitude {
        let mut amplitude = C64::new(0.0, 0.0);
        let mut peak_rank = 0;
        let mut multiplies = 0u128;
        for (v, s) in results {
            amplitude += v;
            peak_rank = peak_rank.max(s.peak_rank);
            multiplies = multiplies.saturating_add(s.multiplies);
        }
        Amplitude {
            amplitude,
            stats: AmplitudeStats {
                peak_rank,
                multiplies,
                slice_count: self.plan.slice_count,
                cut_edges: self.plan.cut_edges,
                path: self.path,
                path_score: self.path_score,
                max_rank: self.max_rank,
                split_cycle: self.split_cycle,
                max_bond: self.max_bond,
            },
        }
    }
}

pub fn prepare_amplitude(
    circuit: &Circuit,
    in_bits: &Bitstring,
    out_bits: &Bitstring,
    opts: &AmplitudeOptions,
) -> Result<Prepared, Error> {
    let split_cycle = opts.split_cycle.unwrap_or(circuit.depth() / 2);
    let fused = fuse_single_qubit_gates(circuit);
    let ts = two_sided_evolve(&fused, in_bits, out_bits, split_cycle, opts.tolerance)?;
    let max_bond = ts.phi.max_bond().max(ts.psi.max_bond());
    let network = build_overlap_network(&ts.phi, &ts.psi)?;
    let uncut = network.path_network()?;
    let cap = opts.max_rank.unwrap_or_else(|| default_max_rank(&uncut));
    let spec = match &opts.cuts {
        CutMode::None => CutSpec::None,
        CutMode::Auto => CutSpec::Auto {
            max_rank: cap,
            state_budget: opts.state_budget,
        },
        CutMode::Explicit(ids) => CutSpec::Explicit(ids.clone()),
    };
    let plan = plan_cuts(&network, &spec)?;
    let first = slice_network(&network, &plan, 0)?.path_network()?;
    let (path, path_score, max_rank) = match &opts.path {
        Some(p) => {
            if p.len() != first.num_nodes() {
                return Err(NetworkError::BadPath.into());
            }
            let (score, peak) = path_score(&first, p)?;
            (p.clone(), score, peak)
        }
        None => {
            let search = PathOptions {
                seeds: Seeds::Boundary,
                max_rank: Some(cap.max(first.max_degree())),
                connectivity_rule: true,
                state_budget: opts.state_budget,
            };
            let (r, used) = find_path_escalating(&first, &search)?;
            (r.path, r.score, used)
        }
    };
    Ok(Prepared {
        network,
        plan,
        path,
        path_score,
        max_rank,
        split_cycle,
        max_bond,
    })
}

/// `<out| U |in>` with every slice contracted on the calling thread.
pub fn compute_amplitude(
    circuit: &Circuit,
    in_bits: &Bitstring,
    out_bits: &Bitstring,
    opts: &AmplitudeOptions,
) -> Result<Amplitude, Error> {
    let prepared = prepare_amplitude(circuit, in_bits, out_bits, opts)?;
    let results = (0..prepared.slice_count())
        .map(|i| prepared.contract_slice(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(prepared.combine(results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::lattice::{generate_lattice, LatticeKind};
    use crate::circuit::rqc::{generate_rqc, GateFamily};
    use crate::circuit::CircuitGraph;
    use crate::oracle::amplitude_oracle;
    use crate::tns::TnsError;

    #[test]
    fn identity_circuit() {
        let g = generate_lattice(LatticeKind::Square, 2, 2).unwrap();
        let c = Circuit::identity(g, 3);
        let bits: Bitstring = "0101".parse().unwrap();
        let a = compute_amplitude(&c, &bits, &bits, &AmplitudeOptions::default()).unwrap();
        assert!((a.amplitude - C64::new(1.0, 0.0)).norm() < 1e-14);
        let other: Bitstring = "0111".parse().unwrap();
        let a = compute_amplitude(&c, &bits, &other, &AmplitudeOptions::default()).unwrap();
        assert!(a.amplitude.norm() < 1e-14);
    }

    #[test]
    fn single_qubit_graph() {
        let g = CircuitGraph::new(1, vec![]).unwrap();
        let c = Circuit::identity(g, 1);
        let z: Bitstring = "0".parse().unwrap();
        assert!(
            (compute_amplitude(&c, &z, &z, &AmplitudeOptions::default())
                .unwrap()
                .amplitude
                - C64::new(1.0, 0.0))
            .norm()
                < 1e-14
        );
    }

    #[test]
    fn matches_oracle_with_and_without_cuts() {
        let g = generate_lattice(LatticeKind::SycamoreLike, 3, 4).unwrap();
        let c = generate_rqc(&g, 6, 21, GateFamily::Fsim).unwrap();
        let zero = Bitstring::zeros(12);
        let out = Bitstring::from_index(0b1011_0010_0110, 12);
        let want = amplitude_oracle(&c, &zero, &out).unwrap();
        let plain = compute_amplitude(&c, &zero, &out, &AmplitudeOptions::default()).unwrap();
        assert!((plain.amplitude - want).norm() < 1e-10);
        assert_eq!(plain.stats.slice_count, 1);
        assert_eq!(plain.stats.multiplies, plain.stats.path_score);

        let cut = AmplitudeOptions {
            cuts: CutMode::Explicit(vec![g.num_edges() - 1]),
            ..AmplitudeOptions::default()
        };
        let sliced = compute_amplitude(&c, &zero, &out, &cut).unwrap();
        assert!((sliced.amplitude - want).norm() < 1e-10);
        assert!(sliced.stats.slice_count > 1 || sliced.stats.cut_edges.len() == 1);

        let auto = AmplitudeOptions {
            cuts: CutMode::Auto,
            max_rank: Some(4),
            ..AmplitudeOptions::default()
        };
        match compute_amplitude(&c, &zero, &out, &auto) {
            Ok(a) => assert!((a.amplitude - want).norm() < 1e-10),
            Err(Error::Network(NetworkError::CapUnachievable { .. })) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn split_cycles_agree() {
        let g = generate_lattice(LatticeKind::Square, 3, 3).unwrap();
        let c = generate_rqc(&g, 5, 2, GateFamily::Iswap).unwrap();
        let zero = Bitstring::zeros(9);
        let out = Bitstring::from_index(0b101100111, 9);
        let amps: Vec<C64> = [0, 2, 5]
            .iter()
            .map(|&s| {
                compute_amplitude(
                    &c,
                    &zero,
                    &out,
                    &AmplitudeOptions {
                        split_cycle: Some(s),
                        ..Default::default()
                    },
                )
                .unwrap()
                .amplitude
            })
            .collect();
        assert!((amps[0] - amps[1]).norm() < 1e-10 && (amps[1] - amps[2]).norm() < 1e-10);
        let bad = AmplitudeOptions {
            split_cycle: Some(6),
            ..Default::default()
        };
        assert!(matches!(
            compute_amplitude(&c, &zero, &out, &bad),
            Err(Error::Tns(TnsError::SplitCycle { .. }))
        ));
    }

    #[test]
    fn explicit_path() {
        let g = generate_lattice(LatticeKind::Square, 2, 3).unwrap();
        let c = generate_rqc(&g, 4, 1, GateFamily::Cz).unwrap();
        let zero = Bitstring::zeros(6);
        let opts = AmplitudeOptions {
            path: Some(vec![5, 4, 3, 2, 1, 0]),
            ..Default::default()
        };
        let a = compute_amplitude(&c, &zero, &zero, &opts).unwrap();
        assert!((a.amplitude - amplitude_oracle(&c, &zero, &zero).unwrap()).norm() < 1e-10);
        let bad = AmplitudeOptions {
            path: Some(vec![0, 1]),
            ..Default::default()
        };
        assert!(compute_amplitude(&c, &zero, &zero, &bad).is_err());
    }
}
