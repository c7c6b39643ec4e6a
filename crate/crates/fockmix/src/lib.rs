//! Truncated-Fock-space toolkit for hybrid CV-DV entanglement generated by
//! mixing a single-mode squeezed vacuum with a delocalized photon on a beam
//! splitter and resolving the photon number in the measuring port.
//!
//! The crate is organized around the stages of that scheme:
//!
//! - [`numerics`]: log-domain combinatorics and the certified series for the
//!   normalization functions Z^{(k)} and G_k^{(1)}.
//! - [`states`]: squeezed vacuum, photonic qubits, and the heralded CV states
//!   of definite parity with their photon statistics.
//! - [`hybrid`]: the heralded hybrid entangled states, distortion factor,
//!   negativity and success probabilities.
//! - [`gates`]: controlled-Z analysis — rotation decomposition, unit-distortion
//!   level lines, beam-splitter parameter optimization, gate scenarios.
//! - [`detector`]: inefficient photon-number-resolving detection — POVM
//!   elements, the second-order mixed output, fidelity and detected rates.
//! - [`oracle`]: brute-force validation via the exact beam-splitter unitary
//!   on truncated Fock spaces and partial-transpose negativity.

pub mod detector;
pub mod error;
pub mod gates;
pub mod hybrid;
pub mod numerics;
pub mod oracle;
pub mod states;

pub use error::{Error, Result};
pub use numerics::SeriesConfig;
pub use states::{
    BeamSplitterSpec, DVQubit, DvForm, FockVector, Parity, ReducedSqueezing, SqueezingSpec,
};
