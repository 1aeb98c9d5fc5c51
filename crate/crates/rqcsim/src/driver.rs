//! Thread-pool drivers over (bitstring x slice) tasks.
//!
//! Each bitstring is prepared on one worker; its slices are then contracted
//! in parallel and summed in slice order, so results do not depend on the
//! worker count or on completion order.

use std::time::Instant;

use rayon::prelude::*;
use rqcsim_core::amplitude::{prepare_amplitude, Amplitude, AmplitudeOptions};
use rqcsim_core::circuit::Circuit;
use rqcsim_core::network::NetworkError;
use rqcsim_core::{Bitstring, Error};

#[derive(Debug, Clone)]
pub struct AmplitudeRecord {
    pub bits_in: Bitstring,
    pub bits_out: Bitstring,
    pub result: Amplitude,
    pub wall_time_ms: f64,
}

pub fn thread_pool(
    workers: Option<usize>,
) -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w.max(1));
    }
    b.build()
}

pub fn amplitude_one(
    circuit: &Circuit,
    bits_in: &Bitstring,
    bits_out: &Bitstring,
    opts: &AmplitudeOptions,
) -> Result<AmplitudeRecord, Error> {
    let start = Instant::now();
    let prepared = prepare_amplitude(circuit, bits_in, bits_out, opts)?;
    let count =
        usize::try_from(prepared.slice_count()).map_err(|_| NetworkError::SliceCountOverflow)?;
    let slices = (0..count)
        .into_par_iter()
        .map(|i| prepared.contract_slice(i as u128))
        .collect::<Result<Vec<_>, _>>()?;
    let result = prepared.combine(slices);
    Ok(AmplitudeRecord {
        bits_in: bits_in.clone(),
        bits_out: bits_out.clone(),
        result,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// One result per output bitstring, in input order.
pub fn amplitudes(
    pool: &rayon::ThreadPool,
    circuit: &Circuit,
    bits_in: &Bitstring,
    outs: &[Bitstring],
    opts: &AmplitudeOptions,
) -> Vec<Result<AmplitudeRecord, Error>> {
    pool.install(|| {
        outs.par_iter()
            .map(|out| amplitude_one(circuit, bits_in, out, opts))
            .collect()
    })
}
