//! Single-amplitude simulation of random quantum circuits on arbitrary
//! qubit-connectivity graphs.
//!
//! A circuit is evolved as a pair of tensor network states: the front half of
//! the cycles acts forward on the input bitstring, the back half acts inverted
//! on the output bitstring. Every two-qubit gate is split by SVD and followed
//! by an SVD compression of the bond it touched. The two states are glued into
//! a closed network over the physical indexes, optionally sliced along a few
//! cut edges, and contracted along a linear path found by a best-first dynamic
//! program over qubit subsets.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, parallel drivers and
//! the command-line tool live in the `rqcsim` crate.
//!
//! ```
//! use rqcsim_core::circuit::{lattice, rqc};
//! use rqcsim_core::amplitude::{compute_amplitude, AmplitudeOptions};
//! use rqcsim_core::oracle::amplitude_oracle;
//!
//! let graph = lattice::generate_lattice(lattice::LatticeKind::Square, 2, 3).unwrap();
//! let circuit = rqc::generate_rqc(&graph, 4, 11, rqc::GateFamily::Fsim).unwrap();
//! let bits_in = "000000".parse().unwrap();
//! let bits_out = "010110".parse().unwrap();
//! let out = compute_amplitude(&circuit, &bits_in, &bits_out, &AmplitudeOptions::default()).unwrap();
//! let expected = amplitude_oracle(&circuit, &bits_in, &bits_out).unwrap();
//! assert!((out.amplitude - expected).norm() < 1e-10);
//! ```
#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod amplitude;
pub mod bits;
pub mod circuit;
mod error;
pub mod linalg;
mod math;
pub mod network;
pub mod oracle;
pub mod path;
pub mod tensor;
pub mod tns;
pub mod workload;

pub use bits::Bitstring;
pub use error::Error;
pub use num_complex::Complex64 as C64;
pub use tensor::{AxisLabel, Tensor, TensorError};

/// Default relative singular-value threshold used by every SVD in the pipeline.
pub const DEFAULT_SVD_TOLERANCE: f64 = 1e-12;
