//! Physical constants and conversions from datasheet quantities into the
//! canonical unit system (time ps, length m, β ps²/m, α 1/m, κ ps/m).
//!
//! Datasheet inputs (dB/km, n₂ in m²/W, A_eff in m², λ₀ in m, energy in J)
//! are converted here and nowhere else; every other module works in canonical
//! units exclusively.

use crate::error::{CoreError, Result};

/// CODATA-level constants, fixed in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum (m/s).
    pub c_light: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    pub pi: f64,
}

/// CODATA 2018 values.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    c_light: 299_792_458.0,
    hbar: 1.054_571_817e-34,
    pi: std::f64::consts::PI,
};

/// Seconds per picosecond.
pub const S_PER_PS: f64 = 1e-12;

/// Carrier angular frequency ω₀ = 2πc/λ₀ (rad/s) for a vacuum wavelength in m.
pub fn omega0_from_lambda(lambda0_m: f64) -> Result<f64> {
    if lambda0_m <= 0.0 {
        return Err(CoreError::Domain(format!(
            "wavelength must be positive, got {lambda0_m} m"
        )));
    }
    Ok(2.0 * CONSTANTS.pi * CONSTANTS.c_light / lambda0_m)
}

/// Photon energy ħω₀ (J) at a vacuum wavelength in m.
pub fn photon_energy(lambda0_m: f64) -> Result<f64> {
    Ok(CONSTANTS.hbar * omega0_from_lambda(lambda0_m)?)
}

/// Convert a power attenuation figure in dB/km to the natural-log amplitude
/// loss coefficient α in 1/m (the field decays as e^{-αz/2}, power as e^{-αz}).
pub fn alpha_from_db_per_km(a_db_per_km: f64) -> Result<f64> {
    if a_db_per_km < 0.0 {
        return Err(CoreError::Domain(format!(
            "loss must be non-negative (gain is not modeled), got {a_db_per_km} dB/km"
        )));
    }
    Ok(a_db_per_km * std::f64::consts::LN_10 / 10.0 / 1000.0)
}

/// Kerr coefficient κ = ħω₀ · ω₀n₂/(c·A_eff) in canonical ps/m.
///
/// κ·(photons/ps) then has units 1/m, so κ|A|²A is a per-meter rate in the
/// envelope equation.
pub fn kappa_from_fiber(n2_m2_per_w: f64, a_eff_m2: f64, lambda0_m: f64) -> Result<f64> {
    if n2_m2_per_w <= 0.0 || a_eff_m2 <= 0.0 || lambda0_m <= 0.0 {
        return Err(CoreError::Domain(format!(
            "fiber parameters must be positive: n2 = {n2_m2_per_w} m^2/W, \
             A_eff = {a_eff_m2} m^2, lambda0 = {lambda0_m} m"
        )));
    }
    let omega0 = omega0_from_lambda(lambda0_m)?;
    let kappa_s_per_m =
        CONSTANTS.hbar * omega0 * omega0 * n2_m2_per_w / (CONSTANTS.c_light * a_eff_m2);
    Ok(kappa_s_per_m / S_PER_PS)
}

/// Photon number N = E/(ħω₀) for a pulse energy in J.
pub fn photon_number_from_energy(energy_j: f64, lambda0_m: f64) -> Result<f64> {
    if energy_j < 0.0 {
        return Err(CoreError::Domain(format!(
            "pulse energy must be non-negative, got {energy_j} J"
        )));
    }
    Ok(energy_j / photon_energy(lambda0_m)?)
}

/// Pulse energy E = N·ħω₀ in J.
pub fn energy_from_photon_number(n_photons: f64, lambda0_m: f64) -> Result<f64> {
    if n_photons < 0.0 {
        return Err(CoreError::Domain(format!(
            "photon number must be non-negative, got {n_photons}"
        )));
    }
    Ok(n_photons * photon_energy(lambda0_m)?)
}

/// Convert a dispersion value in ps²/km (the usual datasheet unit) to ps²/m.
pub fn beta_from_ps2_per_km(beta_ps2_per_km: f64) -> f64 {
    beta_ps2_per_km * 1e-3
}
