//! File formats, thread-pool drivers and the command-line front end for
//! [`rqcsim_core`].

pub mod cli;
pub mod config;
pub mod driver;
pub mod format;
pub mod pathfile;

/// Bundled example inputs.
pub mod fixtures {
    /// Random fSim circuit of depth 8 on the 54-qubit processor layout, seed 7.
    pub const SYCAMORE54_D8: &str = include_str!("../data/sycamore54_d8.json");
    /// Cut edges for [`SYCAMORE54_D8`].
    pub const SYCAMORE54_D8_CUTS: &str = include_str!("../data/sycamore54_d8_cuts.json");
}
