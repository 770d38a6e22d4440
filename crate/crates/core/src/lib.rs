//! Quantum-limited optical pulse timing toolkit.
//!
//! Propagates a classical pulse envelope through lossy, dispersive, Kerr-nonlinear
//! fiber links with the split-step spectral method, tracks the classical pulse
//! moments (photon number, RMS width, chirp, RMS bandwidth), and integrates the
//! semiclassical second-moment equations for the pulse position and momentum
//! operators to obtain the timing jitter, its diffusive / chirp-induced /
//! Gordon-Haus decomposition, and the squeezing ratio relative to the standard
//! quantum limit. Closed-form companions (adiabatic soliton paths, linear and
//! soliton transmission solutions, jointly Gaussian states) live in [`analytic`].
//!
//! Canonical units throughout the public API:
//! time in ps, length in m, dispersion in ps²/m, loss in 1/m (natural log),
//! Kerr coefficient in ps/m, |A|² in photons/ps. Conversions from datasheet
//! quantities (dB/km, n₂, A_eff, λ₀, pulse energy) happen only in [`units`].

pub mod analytic;
pub mod error;
pub mod fiber;
pub mod grid;
pub mod jitter;
pub mod moments;
pub mod ssfm;
pub mod units;

pub use error::{CoreError, Result};
