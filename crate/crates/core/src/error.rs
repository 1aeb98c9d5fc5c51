use thiserror::Error;

use crate::circuit::CircuitError;
use crate::network::NetworkError;
use crate::path::PathError;
use crate::tensor::TensorError;
use crate::tns::TnsError;

/// Any failure surfaced by the amplitude pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Tns(#[from] TnsError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
    #[error(transparent)]
    Workload(#[from] crate::workload::WorkloadError),
}
