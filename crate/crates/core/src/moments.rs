//! Classical pulse moments N(z), Δt(z), C(z), Δω(z) extracted from an
//! envelope — the drive terms of the timing-jitter equations.
//!
//! Definitions (about the intensity centroid t̄ and spectral centroid ω̄):
//!
//! ```text
//! N   = ∫|A|²dt
//! Δt² = (1/N)∫(t - t̄)²|A|²dt
//! Δω² = (1/N)∫(ω - ω̄)²|a(ω)|²dω
//! C   = -(2/N)·Im∫(t - t̄)·A*·∂A/∂t dt
//! ```
//!
//! The chirp form follows from the symmetrized cross moment
//! (1/N)∫A*[t(i∂_t) + (i∂_t)t]A dt by integration by parts; it is zero for a
//! transform-limited pulse and equals 2Δω²(0)∫β dz in a linear dispersive run.

use crate::error::{CoreError, Result};
use crate::grid::{spectral_photon_number, Envelope, SpectralTransform};
use crate::jitter::JitterState;

/// Classical moment set at one propagation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseMoments {
    /// Photon number N (dimensionless).
    pub n_photons: f64,
    /// RMS pulse width Δt (ps).
    pub dt_rms_ps: f64,
    /// Chirp factor C (dimensionless).
    pub chirp: f64,
    /// RMS bandwidth Δω (1/ps).
    pub domega_rms_per_ps: f64,
    /// Intensity centroid ⟨t⟩ (ps); diagnostic, ≈ 0 in the retarded frame.
    pub centroid_ps: f64,
    /// Spectral centroid ⟨ω⟩ (1/ps); diagnostic, ≈ 0 in the envelope frame.
    pub mean_omega_per_ps: f64,
}

impl PulseMoments {
    /// Construct directly from known values (analytic drive paths).
    pub fn from_values(n_photons: f64, dt_rms_ps: f64, chirp: f64, domega_rms_per_ps: f64) -> Self {
        Self {
            n_photons,
            dt_rms_ps,
            chirp,
            domega_rms_per_ps,
            centroid_ps: 0.0,
            mean_omega_per_ps: 0.0,
        }
    }

    /// Midpoint estimate between two sampled moment sets; second moments are
    /// averaged on their squares.
    pub fn midpoint(a: &Self, b: &Self) -> Self {
        Self {
            n_photons: 0.5 * (a.n_photons + b.n_photons),
            dt_rms_ps: (0.5 * (a.dt_rms_ps * a.dt_rms_ps + b.dt_rms_ps * b.dt_rms_ps)).sqrt(),
            chirp: 0.5 * (a.chirp + b.chirp),
            domega_rms_per_ps: (0.5
                * (a.domega_rms_per_ps * a.domega_rms_per_ps
                    + b.domega_rms_per_ps * b.domega_rms_per_ps))
                .sqrt(),
            centroid_ps: 0.5 * (a.centroid_ps + b.centroid_ps),
            mean_omega_per_ps: 0.5 * (a.mean_omega_per_ps + b.mean_omega_per_ps),
        }
    }
}

/// Extract all moments from an envelope. The time derivative entering the
/// chirp is computed spectrally, consistent with the propagator.
pub fn measure(envelope: &Envelope, xf: &mut SpectralTransform) -> Result<PulseMoments> {
    let grid = envelope.grid;
    let dt = grid.dt_ps();
    let n = envelope.photon_number();
    if !(n > 0.0) || !n.is_finite() {
        return Err(CoreError::Domain(format!(
            "moments undefined for photon number {n}"
        )));
    }

    let mut centroid = 0.0;
    for (k, a) in envelope.samples.iter().enumerate() {
        centroid += grid.time(k) * a.norm_sqr();
    }
    centroid *= dt / n;

    let mut m2_t = 0.0;
    for (k, a) in envelope.samples.iter().enumerate() {
        let d = grid.time(k) - centroid;
        m2_t += d * d * a.norm_sqr();
    }
    m2_t *= dt / n;

    let spectrum = xf.to_spectrum(envelope)?;
    let dw = grid.domega_per_ps();
    let n_spec = spectral_photon_number(&grid, &spectrum);
    let mut mean_w = 0.0;
    for (j, a) in spectrum.iter().enumerate() {
        mean_w += grid.omega(j) * a.norm_sqr();
    }
    mean_w *= dw / n_spec;
    let mut m2_w = 0.0;
    for (j, a) in spectrum.iter().enumerate() {
        let d = grid.omega(j) - mean_w;
        m2_w += d * d * a.norm_sqr();
    }
    m2_w *= dw / n_spec;

    // Derivative ∂A/∂t from the spectrum already in hand (-iω multiplier).
    let mut dspec = spectrum;
    for (j, s) in dspec.iter_mut().enumerate() {
        *s *= num_complex::Complex64::new(0.0, -grid.omega(j));
    }
    let deriv = xf.from_spectrum(&dspec)?.samples;
    let mut cross = 0.0;
    for (k, (a, da)) in envelope.samples.iter().zip(&deriv).enumerate() {
        cross += (grid.time(k) - centroid) * (a.conj() * da).im;
    }
    let chirp = -2.0 * cross * dt / n;

    Ok(PulseMoments {
        n_photons: n,
        dt_rms_ps: m2_t.sqrt(),
        chirp,
        domega_rms_per_ps: m2_w.sqrt(),
        centroid_ps: centroid,
        mean_omega_per_ps: mean_w,
    })
}

/// Initial jitter second moments for coherent-field statistics:
/// ⟨T²⟩ = Δt²/N, ⟨Ω²⟩ = Δω²/N, ⟨TΩ+ΩT⟩ = C/N.
pub fn coherent_jitter_init(moments: &PulseMoments) -> JitterState {
    let n = moments.n_photons;
    JitterState::with_initial_moments(
        moments.dt_rms_ps * moments.dt_rms_ps / n,
        moments.chirp / n,
        moments.domega_rms_per_ps * moments.domega_rms_per_ps / n,
    )
}
