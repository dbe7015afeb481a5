//! Simulation of quantum teleportation through local polarization-dephasing
//! channels.
//!
//! The auxiliary photon pair carries polarization qubits whose frequencies act
//! as local environments. Programmed spectral phases hybrid-entangle the two
//! degrees of freedom so that the dephasing met at the end of the protocol
//! restores coherence instead of destroying it.
//!
//! Modules, bottom-up:
//! - [`spectra`]: frequency grids, single-photon and joint spectral amplitudes.
//! - [`optics`]: spectral phase profiles, SLM pixelation, birefringent elements.
//! - [`hybrid_state`]: polarization-frequency states, partial traces, the
//!   decoherence function.
//! - [`metrics`]: fidelity, concurrence, purity and maximal CHSH value.
//! - [`protocol`]: Bell projection, corrections, full teleportation runs and
//!   purification sweeps.

// `!(x > 0.0)` is the NaN-rejecting check used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hybrid_state;
pub mod metrics;
pub mod optics;
pub mod protocol;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Center wavelength of the photons used throughout the presets (m).
pub const LAMBDA0: f64 = 780e-9;

/// Converts a vacuum wavelength (m) to frequency (Hz).
pub fn wavelength_to_frequency(wavelength: f64) -> f64 {
    SPEED_OF_LIGHT / wavelength
}

/// Frequency interval (Hz) covered by a wavelength window `width` centered at `center` (both m).
pub fn wavelength_window_to_bandwidth(center: f64, width: f64) -> f64 {
    SPEED_OF_LIGHT / (center - width / 2.0) - SPEED_OF_LIGHT / (center + width / 2.0)
}

/// The three photons of the protocol, in the order used for polarization labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Photon {
    /// Carries the qubit to be teleported; its frequency is not modeled.
    Teleportee,
    /// Alice's auxiliary photon.
    Alice,
    /// Bob's auxiliary photon.
    Bob,
}

impl Photon {
    /// Index of the frequency environment carried by this photon, if any.
    pub fn env_axis(self) -> Option<usize> {
        match self {
            Photon::Teleportee => None,
            Photon::Alice => Some(0),
            Photon::Bob => Some(1),
        }
    }
}
