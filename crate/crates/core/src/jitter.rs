//! Timing-jitter evolution: the second moments ⟨T²⟩, ⟨TΩ+ΩT⟩, ⟨Ω²⟩ of the
//! pulse position and momentum operators under loss, dispersion, and Kerr
//! nonlinearity, integrated as a first-order accumulator cascade driven by
//! the classical pulse moments.
//!
//! With vacuum-reservoir loss noise the momentum variance grows as
//! ⟨Ω²(z)⟩ = ⟨Ω²(0)⟩ + ∫ αΔω²/N dz', and the position variance acquires,
//! besides the quantum-dispersion terms driven by the initial moments,
//! three noise components:
//!
//! ```text
//! diffusive      ∫ αΔt²/N dz'
//! chirp-induced  ∫ β(z') ∫ αC/N dz'' dz'          (can be negative)
//! Gordon-Haus    2∫ β(z') ∫ β(z'') ∫ αΔω²/N dz''' dz'' dz'
//! ```
//!
//! The nested integrals are recast as the cascade (g1, g2, c1): one forward
//! pass, no history storage, identical by differentiation. Each accumulator is
//! advanced with a midpoint-consistent rule so the whole pass is second order
//! in the step, matching the split-step propagator.

use crate::moments::PulseMoments;

/// Running second-moment state plus per-component accumulators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterState {
    /// ⟨T²(0)⟩ (ps²).
    pub t2_init_ps2: f64,
    /// ⟨T(0)Ω(0)+Ω(0)T(0)⟩ (dimensionless).
    pub sym_init_ps: f64,
    /// ⟨Ω²(0)⟩ (1/ps²).
    pub omega2_init_per_ps2: f64,
    /// Net dispersion ∫β dz (ps²).
    pub d_net_ps2: f64,
    /// Momentum-variance growth g1 = ∫αΔω²/N dz (1/ps²).
    pub g1_per_ps2: f64,
    /// Middle Gordon-Haus accumulator g2 = ∫β·g1 dz (dimensionless).
    pub g2: f64,
    /// Gordon-Haus jitter 2∫β·g2 dz (ps²).
    pub t2_gh_ps2: f64,
    /// Chirp-noise accumulator c1 = ∫αC/N dz (dimensionless).
    pub c1: f64,
    /// Chirp-induced jitter ∫β·c1 dz (ps²); may be negative.
    pub t2_chirp_ps2: f64,
    /// Diffusive jitter ∫αΔt²/N dz (ps²).
    pub t2_diff_ps2: f64,
}

impl JitterState {
    /// Fresh state from initial second moments; all accumulators zero.
    pub fn with_initial_moments(t2_ps2: f64, sym: f64, omega2_per_ps2: f64) -> Self {
        Self {
            t2_init_ps2: t2_ps2,
            sym_init_ps: sym,
            omega2_init_per_ps2: omega2_per_ps2,
            d_net_ps2: 0.0,
            g1_per_ps2: 0.0,
            g2: 0.0,
            t2_gh_ps2: 0.0,
            c1: 0.0,
            t2_chirp_ps2: 0.0,
            t2_diff_ps2: 0.0,
        }
    }

    /// Advance every accumulator across one step of length `dz_m`, with the
    /// dispersion `beta` (ps²/m), loss `alpha` (1/m), and classical `moments`
    /// all sampled at the step midpoint.
    pub fn advance(&mut self, dz_m: f64, beta_ps2_per_m: f64, alpha_per_m: f64, moments: &PulseMoments) {
        debug_assert!(dz_m > 0.0);
        let n = moments.n_photons;
        let dt2 = moments.dt_rms_ps * moments.dt_rms_ps;
        let dw2 = moments.domega_rms_per_ps * moments.domega_rms_per_ps;

        // Inner integrands of the nested integrals.
        let f_omega = alpha_per_m * dw2 / n;
        let f_chirp = alpha_per_m * moments.chirp / n;
        let f_diff = alpha_per_m * dt2 / n;

        // Inner accumulators stepped through their midpoints so the outer
        // integrals see second-order-accurate integrand values.
        let g1_mid = self.g1_per_ps2 + 0.5 * f_omega * dz_m;
        self.g1_per_ps2 += f_omega * dz_m;

        let g2_mid = self.g2 + 0.5 * beta_ps2_per_m * g1_mid * dz_m;
        self.g2 += beta_ps2_per_m * g1_mid * dz_m;
        self.t2_gh_ps2 += 2.0 * beta_ps2_per_m * g2_mid * dz_m;

        let c1_mid = self.c1 + 0.5 * f_chirp * dz_m;
        self.c1 += f_chirp * dz_m;
        self.t2_chirp_ps2 += beta_ps2_per_m * c1_mid * dz_m;

        self.t2_diff_ps2 += f_diff * dz_m;
        self.d_net_ps2 += beta_ps2_per_m * dz_m;
    }

    /// Quantum-dispersion part: initial jitter carried through net dispersion.
    pub fn t2_init_dispersive_ps2(&self) -> f64 {
        self.t2_init_ps2
            + self.sym_init_ps * self.d_net_ps2
            + self.omega2_init_per_ps2 * self.d_net_ps2 * self.d_net_ps2
    }

    /// Total position variance ⟨T²(z)⟩ (ps²): sum of the quantum-dispersion
    /// part and the three noise components.
    pub fn total_t2(&self) -> f64 {
        self.t2_init_dispersive_ps2() + self.t2_diff_ps2 + self.t2_chirp_ps2 + self.t2_gh_ps2
    }

    /// Total momentum variance ⟨Ω²(z)⟩ (1/ps²).
    pub fn total_omega2(&self) -> f64 {
        self.omega2_init_per_ps2 + self.g1_per_ps2
    }

    /// Position-side report against the quantum limits at the current point.
    pub fn report(&self, moments: &PulseMoments) -> JitterReport {
        let n = moments.n_photons;
        let dw2 = moments.domega_rms_per_ps * moments.domega_rms_per_ps;
        let sql = 1.0 / (4.0 * n * dw2);
        let heisenberg = 1.0 / (4.0 * n * n * dw2);
        let total = self.total_t2();
        let r = total / sql;
        JitterReport {
            t2_total_ps2: total,
            t2_init_dispersive_ps2: self.t2_init_dispersive_ps2(),
            t2_diff_ps2: self.t2_diff_ps2,
            t2_chirp_ps2: self.t2_chirp_ps2,
            t2_gh_ps2: self.t2_gh_ps2,
            omega2_total_per_ps2: self.total_omega2(),
            sql_t2_ps2: sql,
            heisenberg_t2_ps2: heisenberg,
            squeezing_ratio_r: r,
            r_db: 10.0 * r.log10(),
        }
    }

    /// Momentum-side report: ⟨Ω²⟩ against 1/(4NΔt²) and 1/(4N²Δt²).
    pub fn momentum_report(&self, moments: &PulseMoments) -> MomentumReport {
        let n = moments.n_photons;
        let dt2 = moments.dt_rms_ps * moments.dt_rms_ps;
        let sql = 1.0 / (4.0 * n * dt2);
        MomentumReport {
            omega2_total_per_ps2: self.total_omega2(),
            sql_omega2_per_ps2: sql,
            heisenberg_omega2_per_ps2: sql / n,
        }
    }
}

/// Position-variance summary at one propagation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterReport {
    pub t2_total_ps2: f64,
    pub t2_init_dispersive_ps2: f64,
    pub t2_diff_ps2: f64,
    pub t2_chirp_ps2: f64,
    pub t2_gh_ps2: f64,
    pub omega2_total_per_ps2: f64,
    /// Standard quantum limit 1/(4NΔω²) at the same point.
    pub sql_t2_ps2: f64,
    /// Heisenberg limit 1/(4N²Δω²) at the same point.
    pub heisenberg_t2_ps2: f64,
    /// Squeezing ratio R = ⟨T²⟩·4NΔω²; R < 1 beats the standard quantum limit.
    pub squeezing_ratio_r: f64,
    pub r_db: f64,
}

/// Momentum-variance summary at one propagation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumReport {
    pub omega2_total_per_ps2: f64,
    pub sql_omega2_per_ps2: f64,
    pub heisenberg_omega2_per_ps2: f64,
}
