//! Sample-count estimate for verifying a noisy run.
//!
//! The circuit fidelity is the product of per-gate and per-readout success
//! probabilities, `F = prod_g (1 - e_g) * prod_q (1 - e_q)`, accumulated as a
//! sum of logarithms. Distinguishing `F` from zero at three standard
//! deviations takes `N_s >= (3 / F)^2` bitstrings.

use thiserror::Error;

use crate::circuit::Circuit;
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorkloadError {
    #[error("error rate {name} = {value} outside [0, 1)")]
    BadRate { name: &'static str, value: f64 },
    #[error("fidelity underflows double precision (ln F = {log_fidelity})")]
    Underflow { log_fidelity: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    /// Single-qubit gate error.
    pub e1: f64,
    /// Two-qubit gate error.
    pub e2: f64,
    /// Readout error per measured qubit.
    pub eq: f64,
}

impl ErrorModel {
    /// Rates reported for the Sycamore processor.
    pub const SYCAMORE: ErrorModel = ErrorModel {
        e1: 0.0016,
        e2: 0.0062,
        eq: 0.038,
    };

    pub const NOISELESS: ErrorModel = ErrorModel {
        e1: 0.0,
        e2: 0.0,
        eq: 0.0,
    };

    pub fn validate(&self) -> Result<(), WorkloadError> {
        for (name, value) in [("e1", self.e1), ("e2", self.e2), ("eq", self.eq)] {
            if !(0.0..1.0).contains(&value) {
                return Err(WorkloadError::BadRate { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkloadEstimate {
    pub fidelity: f64,
    pub log_fidelity: f64,
    /// `(3 / F)^2` before rounding.
    pub samples_exact: f64,
    /// `ceil((3 / F)^2)`.
    pub samples: f64,
    /// `1 / sqrt(samples)`.
    pub sigma: f64,
    pub single_qubit_gates: usize,
    pub two_qubit_gates: usize,
    pub readouts: usize,
}

/// Counts as written: single-qubit gates (plus any fused trailing unitary),
/// two-qubit gates, and one readout per qubit.
pub fn estimate_workload(
    circuit: &Circuit,
    model: &ErrorModel,
) -> Result<WorkloadEstimate, WorkloadError> {
    let singles = circuit.single_qubit_gates().len() + circuit.trailing().iter().flatten().count();
    estimate_from_counts(
        singles,
        circuit.two_qubit_gate_count(),
        circuit.num_qubits(),
        model,
    )
}

pub fn estimate_from_counts(
    single_qubit_gates: usize,
    two_qubit_gates: usize,
    readouts: usize,
    model: &ErrorModel,
) -> Result<WorkloadEstimate, WorkloadError> {
    model.validate()?;
    let log_fidelity = single_qubit_gates as f64 * math::ln_1p(-model.e1)
        + two_qubit_gates as f64 * math::ln_1p(-model.e2)
        + readouts as f64 * math::ln_1p(-model.eq);
    let fidelity = math::exp(log_fidelity);
    // ln((3/F)^2) = 2 ln 3 - 2 ln F
    let samples_exact = math::exp(2.0 * math::ln(3.0) - 2.0 * log_fidelity);
    if fidelity == 0.0 || !samples_exact.is_finite() {
        return Err(WorkloadError::Underflow { log_fidelity });
    }
    let samples = math::ceil(samples_exact);
    Ok(WorkloadEstimate {
        fidelity,
        log_fidelity,
        samples_exact,
        samples,
        sigma: 1.0 / math::sqrt(samples),
        single_qubit_gates,
        two_qubit_gates,
        readouts,
    })
}
