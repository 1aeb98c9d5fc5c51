//! Brute-force state-vector simulator used as the correctness reference.
//!
//! Works directly on the circuit description and the `2^N` amplitude array;
//! shares no code with the tensor kernels. Qubit 0 is the least significant
//! bit of the amplitude index.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bits::Bitstring;
use crate::circuit::{Circuit, CircuitError, Mat2, Mat4};
use crate::C64;

pub const DEFAULT_QUBIT_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{qubits} qubits exceeds the state-vector cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn basis(bits: &Bitstring) -> Self {
        let n = bits.len();
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
        amplitudes[bits.to_index()] = C64::new(1.0, 0.0);
        StateVector {
            num_qubits: n,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, bits: &Bitstring) -> C64 {
        self.amplitudes[bits.to_index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn apply_single(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit != 0 {
                continue;
            }
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | bit];
            self.amplitudes[i] = m[0] * a0 + m[1] * a1;
            self.amplitudes[i | bit] = m[2] * a0 + m[3] * a1;
        }
    }

    /// `m` is ordered with qubit `k` as the more significant factor.
    pub fn apply_two(&mut self, k: usize, l: usize, m: &Mat4) {
        let bk = 1usize << k;
        let bl = 1usize << l;
        for i in 0..self.amplitudes.len() {
            if i & (bk | bl) != 0 {
                continue;
            }
            let idx = [i, i | bl, i | bk, i | bk | bl];
            let v = idx.map(|j| self.amplitudes[j]);
            for (r, &j) in idx.iter().enumerate() {
                self.amplitudes[j] = (0..4).map(|c| m[r * 4 + c] * v[c]).sum();
            }
        }
    }
}

pub fn full_state_evolve(
    circuit: &Circuit,
    in_bits: &Bitstring,
) -> Result<StateVector, OracleError> {
    full_state_evolve_capped(circuit, in_bits, DEFAULT_QUBIT_CAP)
}

pub fn full_state_evolve_capped(
    circuit: &Circuit,
    in_bits: &Bitstring,
    cap: usize,
) -> Result<StateVector, OracleError> {
    let n = circuit.num_qubits();
    if n > cap {
        return Err(OracleError::TooManyQubits { qubits: n, cap });
    }
    in_bits.expect_len(n)?;
    let mut psi = StateVector::basis(in_bits);
    let singles = circuit.single_qubit_in_order();
    let mut next = 0;
    for moment in 0..=circuit.depth() {
        while next < singles.len() && singles[next].moment == moment {
            psi.apply_single(singles[next].qubit, &singles[next].matrix);
            next += 1;
        }
        if let Some(cycle) = circuit.cycles().get(moment) {
            for g in cycle {
                psi.apply_two(g.pair.0, g.pair.1, &g.matrix);
            }
        }
    }
    for (q, t) in circuit.trailing().iter().enumerate() {
        if let Some(m) = t {
            psi.apply_single(q, m);
        }
    }
    Ok(psi)
}

/// `<out| U |in>` by full state-vector evolution.
pub fn amplitude_oracle(
    circuit: &Circuit,
    in_bits: &Bitstring,
    out_bits: &Bitstring,
) -> Result<C64, OracleError> {
    out_bits.expect_len(circuit.num_qubits())?;
    Ok(full_state_evolve(circuit, in_bits)?.amplitude(out_bits))
}
