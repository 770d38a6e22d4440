//! Closed-form results: the adiabatic soliton path, the three transmission
//! regimes (linear non-dispersive, linear dispersive, frozen-moment soliton),
//! rough Gordon-Haus estimates, the jointly Gaussian multiphoton state, and
//! the exact Heisenberg limit under Fock statistics.
//!
//! Everything here is cross-validated against the jitter-engine integration
//! under matching assumptions; divergent limits are reported as explicit
//! infinities rather than errors so sweeps can render the asymptotes.

use crate::error::{CoreError, Result};
use crate::fiber::{DispersionProfile, FiberSegment};
use std::f64::consts::PI;

/// e^x - 1 - x - x²/2, evaluated without cancellation for small |x|.
fn expm1_beyond_quadratic(x: f64) -> f64 {
    if x.abs() > 0.35 {
        return x.exp_m1() - x - 0.5 * x * x;
    }
    // Σ_{k>=3} x^k/k!
    let mut term = x * x * x / 6.0;
    let mut acc = term;
    let mut k = 4.0;
    while term.abs() > 1e-18 * acc.abs().max(f64::MIN_POSITIVE) {
        term *= x / k;
        acc += term;
        k += 1.0;
    }
    acc
}

/// Adiabatic fundamental-soliton path along one anomalous-dispersion segment:
/// τ(z) = 2|β(z)|/(κN(z)) with N(z) = N₀e^{-αz}, and the sech closed forms
/// Δt = (π/2√3)τ, Δω = 1/(√3τ) (so Δt·Δω = π/6 pointwise).
#[derive(Debug, Clone, Copy)]
pub struct AdiabaticSolitonPath {
    profile: DispersionProfile,
    length_m: f64,
    n0: f64,
    kappa_ps_per_m: f64,
    alpha_per_m: f64,
}

impl AdiabaticSolitonPath {
    pub fn new(segment: &FiberSegment, n0: f64) -> Result<Self> {
        segment.validate()?;
        if !(n0 > 0.0) || !(segment.kappa_ps_per_m > 0.0) {
            return Err(CoreError::Domain(format!(
                "soliton path needs positive photon number and Kerr coefficient, \
                 got N = {n0}, kappa = {} ps/m",
                segment.kappa_ps_per_m
            )));
        }
        // β must stay negative over the whole segment; both profile kinds
        // are monotone, so the endpoints decide.
        let b0 = segment.dispersion.beta(0.0);
        let b1 = segment.dispersion.beta(segment.length_m);
        if b0 >= 0.0 || b1 >= 0.0 {
            return Err(CoreError::Domain(format!(
                "adiabatic soliton path needs anomalous dispersion throughout, \
                 got beta = {b0}..{b1} ps²/m"
            )));
        }
        Ok(Self {
            profile: segment.dispersion,
            length_m: segment.length_m,
            n0,
            kappa_ps_per_m: segment.kappa_ps_per_m,
            alpha_per_m: segment.alpha_per_m,
        })
    }

    pub fn length_m(&self) -> f64 {
        self.length_m
    }

    pub fn photon_number(&self, z_m: f64) -> f64 {
        self.n0 * (-self.alpha_per_m * z_m).exp()
    }

    pub fn tau_ps(&self, z_m: f64) -> f64 {
        2.0 * self.profile.beta(z_m).abs() / (self.kappa_ps_per_m * self.photon_number(z_m))
    }

    /// Peak amplitude A₀ = √(N/2τ) in (photons/ps)^(1/2).
    pub fn peak_amplitude(&self, z_m: f64) -> f64 {
        (self.photon_number(z_m) / (2.0 * self.tau_ps(z_m))).sqrt()
    }

    pub fn dt_rms_ps(&self, z_m: f64) -> f64 {
        PI / (2.0 * 3.0_f64.sqrt()) * self.tau_ps(z_m)
    }

    pub fn domega_rms_per_ps(&self, z_m: f64) -> f64 {
        1.0 / (3.0_f64.sqrt() * self.tau_ps(z_m))
    }

    pub fn soliton_period_m(&self, z_m: f64) -> f64 {
        let tau = self.tau_ps(z_m);
        PI / 2.0 * tau * tau / self.profile.beta(z_m).abs()
    }

    /// Ideal bandwidth-narrowing factor Δω(0)/Δω(L) = e^{-αL}|β(L)|/|β(0)|
    /// over the full segment.
    pub fn bandwidth_narrowing(&self) -> f64 {
        self.domega_rms_per_ps(0.0) / self.domega_rms_per_ps(self.length_m)
    }
}

/// Ideal lossless squeezing ratio after full compression and compensation:
/// R = (π²/9)·β²(0)/β²(L).
pub fn ideal_squeezing_ratio(beta0_ps2_per_m: f64, beta_l_ps2_per_m: f64) -> Result<f64> {
    if beta0_ps2_per_m == 0.0 || beta_l_ps2_per_m == 0.0 {
        return Err(CoreError::Domain(
            "squeezing ratio needs nonzero dispersion at both ends".into(),
        ));
    }
    let ratio = beta0_ps2_per_m / beta_l_ps2_per_m;
    Ok(PI * PI / 9.0 * ratio * ratio)
}

/// Linear non-dispersive transmission: ⟨T²(z)⟩ = ⟨T²(0)⟩ + (Δt²(0)/N(z))(1 - e^{-αz}).
pub fn linear_nondispersive_t2(t2_0_ps2: f64, dt0_ps: f64, n0: f64, alpha_per_m: f64, z_m: f64) -> f64 {
    let decay = (-alpha_per_m * z_m).exp();
    t2_0_ps2 + dt0_ps * dt0_ps / (n0 * decay) * (1.0 - decay)
}

/// Normalized form: R(z) = R(0)e^{-αz} + tbp(0)·(1 - e^{-αz}), where tbp is
/// the time-bandwidth product 4Δt²Δω² of the input (≈ 1 classically; the
/// jointly Gaussian expression otherwise). Divergent tbp yields an infinite R
/// for any αz > 0.
pub fn lossy_r(r0: f64, tbp0: f64, alpha_per_m: f64, z_m: f64) -> f64 {
    let x = alpha_per_m * z_m;
    if x == 0.0 {
        return r0;
    }
    let decay = (-x).exp();
    r0 * decay + tbp0 * (1.0 - decay)
}

/// Initial conditions for the linear dispersive closed forms.
#[derive(Debug, Clone, Copy)]
pub struct LinearDispersiveInit {
    pub t2_0_ps2: f64,
    pub sym_0: f64,
    pub omega2_0_per_ps2: f64,
    pub dt2_0_ps2: f64,
    pub chirp_0: f64,
    pub domega2_0_per_ps2: f64,
    pub n_0: f64,
}

/// Classical moment evolution in a lossy linear dispersive run, as functions
/// of the net dispersion D(z) = ∫β dz (ps²): Δt²(z), C(z), Δω²(z).
pub fn linear_dispersive_moments(init: &LinearDispersiveInit, d_net_ps2: f64) -> (f64, f64, f64) {
    let dt2 = init.dt2_0_ps2
        + init.chirp_0 * d_net_ps2
        + init.domega2_0_per_ps2 * d_net_ps2 * d_net_ps2;
    let chirp = init.chirp_0 + 2.0 * init.domega2_0_per_ps2 * d_net_ps2;
    (dt2, chirp, init.domega2_0_per_ps2)
}

/// Position variance in a lossy linear dispersive run (constant α):
/// quantum dispersion plus the dispersed diffusive term Δt²(z)(1-e^{-αz})/N(z).
pub fn linear_dispersive_t2(
    init: &LinearDispersiveInit,
    d_net_ps2: f64,
    alpha_per_m: f64,
    z_m: f64,
) -> f64 {
    let (dt2_z, _, _) = linear_dispersive_moments(init, d_net_ps2);
    let decay = (-alpha_per_m * z_m).exp();
    init.t2_0_ps2
        + init.sym_0 * d_net_ps2
        + init.omega2_0_per_ps2 * d_net_ps2 * d_net_ps2
        + dt2_z / (init.n_0 * decay) * (1.0 - decay)
}

/// Normalized linear-dispersive ratio for an initially jointly Gaussian state,
/// in terms of the effective propagation distance ζ = Δω²(0)·D(z):
/// R(z) = [R(0) + 4ζ²/R(0)]e^{-αz} + [tbp(0) + 4ζ²](1 - e^{-αz}).
pub fn linear_dispersive_r_gaussian(r0: f64, tbp0: f64, zeta: f64, alpha_per_m: f64, z_m: f64) -> f64 {
    let x = alpha_per_m * z_m;
    let qd = 4.0 * zeta * zeta;
    if x == 0.0 {
        return r0 + qd / r0;
    }
    let decay = (-x).exp();
    (r0 + qd / r0) * decay + (tbp0 + qd) * (1.0 - decay)
}

/// Explicit solution for a constant-dispersion soliton with frozen moments
/// (C = 0, Δt and Δω constant, ⟨TΩ+ΩT⟩(0) = 0):
///
/// ```text
/// ⟨T²(z)⟩ = ⟨T²(0)⟩ + ⟨Ω²(0)⟩β²z² + (Δt²(0)/N(0))(e^{αz}-1)
///           + (2β²Δω²(0)/N(0))·[(e^{αz}-1)/α² - z/α - z²/2]
/// ```
#[allow(clippy::too_many_arguments)]
pub fn soliton_constant_disp_t2(
    t2_0_ps2: f64,
    omega2_0_per_ps2: f64,
    dt0_ps: f64,
    domega0_per_ps: f64,
    n0: f64,
    beta_ps2_per_m: f64,
    alpha_per_m: f64,
    z_m: f64,
) -> f64 {
    let quantum_dispersion = omega2_0_per_ps2 * beta_ps2_per_m * beta_ps2_per_m * z_m * z_m;
    if alpha_per_m == 0.0 {
        return t2_0_ps2 + quantum_dispersion;
    }
    let x = alpha_per_m * z_m;
    let diffusive = dt0_ps * dt0_ps / n0 * x.exp_m1();
    let gh = 2.0 * beta_ps2_per_m * beta_ps2_per_m * domega0_per_ps * domega0_per_ps / n0
        * expm1_beyond_quadratic(x)
        / (alpha_per_m * alpha_per_m);
    t2_0_ps2 + quantum_dispersion + diffusive + gh
}

/// Normalized constant-dispersion soliton ratio, assuming the sech relations
/// 4⟨T²(0)⟩⟨Ω²(0)⟩ = (π²/9)/N²(0) and frozen Δω:
///
/// ```text
/// R(z) = R(0)e^{-αz} + (π⁴/81)(z/Λ)²e^{-αz}/R(0) + (π²/9)(1 - e^{-αz})
///        + (2π²/9)(e^{-αz}/Λ²)[(e^{αz}-1)/α² - z/α - z²/2]
/// ```
pub fn soliton_r_normalized(r0: f64, lambda_m: f64, alpha_per_m: f64, z_m: f64) -> f64 {
    let zl = z_m / lambda_m;
    if alpha_per_m == 0.0 {
        return r0 + PI.powi(4) / 81.0 * zl * zl / r0;
    }
    let x = alpha_per_m * z_m;
    let decay = (-x).exp();
    r0 * decay
        + PI.powi(4) / 81.0 * zl * zl * decay / r0
        + PI * PI / 9.0 * (1.0 - decay)
        + 2.0 * PI * PI / 9.0 * decay / (lambda_m * lambda_m)
            * expm1_beyond_quadratic(x)
            / (alpha_per_m * alpha_per_m)
}

/// Low-loss simplification (αΛ ≪ 1, αz ≪ 1) of [`soliton_r_normalized`]:
/// R(z) ≈ R(0) + (π⁴/81)(z/Λ)²/R(0) + (π²/9)(αz) + (π²/27)(z/Λ)²(αz).
pub fn soliton_r_lowloss(r0: f64, lambda_m: f64, alpha_per_m: f64, z_m: f64) -> f64 {
    let zl = z_m / lambda_m;
    let x = alpha_per_m * z_m;
    r0 + PI.powi(4) / 81.0 * zl * zl / r0 + PI * PI / 9.0 * x + PI * PI / 27.0 * zl * zl * x
}

/// Order-of-magnitude Gordon-Haus estimates for a constant-dispersion soliton
/// span of length L compensated by a short fiber of length L'.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhEstimates {
    /// Dispersion-managed jitter αΔω²(0)β²L²(L+L')/(6N(0)) in ps².
    pub managed_t2_ps2: f64,
    /// Managed jitter over the standard quantum limit: (π²/54)(L/Λ)²(αL).
    pub managed_normalized: f64,
    /// Rough uncompensated first-fiber ratio (L/Λ)²(αL).
    pub rough_first_fiber: f64,
    /// Keeping the managed contribution below R requires
    /// L³ ≪ (54/π²)(Λ²/α)·R; this is the bound per unit R, in m³.
    pub length_bound_m3_per_r: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn gh_estimates(
    l_m: f64,
    l_prime_m: f64,
    beta_ps2_per_m: f64,
    alpha_per_m: f64,
    domega0_per_ps: f64,
    n0: f64,
    lambda_m: f64,
) -> Result<GhEstimates> {
    if l_prime_m > l_m {
        return Err(CoreError::Domain(format!(
            "the estimate assumes a short compensating fiber, got L' = {l_prime_m} m \
             vs L = {l_m} m"
        )));
    }
    let zl = l_m / lambda_m;
    let al = alpha_per_m * l_m;
    Ok(GhEstimates {
        managed_t2_ps2: alpha_per_m
            * domega0_per_ps
            * domega0_per_ps
            * beta_ps2_per_m
            * beta_ps2_per_m
            * l_m
            * l_m
            * (l_m + l_prime_m)
            / (6.0 * n0),
        managed_normalized: PI * PI / 54.0 * zl * zl * al,
        rough_first_fiber: zl * zl * al,
        length_bound_m3_per_r: 54.0 / (PI * PI) * lambda_m * lambda_m / alpha_per_m,
    })
}

/// N-photon state with a jointly Gaussian spectral amplitude: B sets the
/// collective mean-frequency spread (⟨Ω²⟩ = B²), b the relative per-photon
/// spread. b → 0 reaches the Heisenberg limit, B² = b²/N the standard quantum
/// limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointlyGaussianState {
    pub n_photons: u64,
    /// B (1/ps), > 0.
    pub mean_spread_per_ps: f64,
    /// b (1/ps), ≥ 0; zero is allowed only for the queries that stay finite.
    pub relative_spread_per_ps: f64,
}

impl JointlyGaussianState {
    pub fn new(n_photons: u64, mean_spread_per_ps: f64, relative_spread_per_ps: f64) -> Result<Self> {
        if n_photons < 1 {
            return Err(CoreError::Domain("state needs at least one photon".into()));
        }
        if !(mean_spread_per_ps > 0.0) {
            return Err(CoreError::Domain(format!(
                "B must be positive, got {mean_spread_per_ps} /ps"
            )));
        }
        if relative_spread_per_ps < 0.0 {
            return Err(CoreError::Domain(format!(
                "b must be non-negative, got {relative_spread_per_ps} /ps"
            )));
        }
        Ok(Self {
            n_photons,
            mean_spread_per_ps,
            relative_spread_per_ps,
        })
    }
}

/// Second moments of the jointly Gaussian state. Infinite entries signal the
/// divergent b → 0 pulse width (maximal coincident-frequency correlation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianStateMoments {
    pub omega2_per_ps2: f64,
    pub t2_ps2: f64,
    pub domega2_per_ps2: f64,
    pub dt2_ps2: f64,
    /// Time-bandwidth product 4Δt²Δω².
    pub tbp: f64,
}

pub fn gaussian_state_moments(state: &JointlyGaussianState) -> GaussianStateMoments {
    let n = state.n_photons as f64;
    let b2 = state.mean_spread_per_ps * state.mean_spread_per_ps;
    let bs2 = state.relative_spread_per_ps * state.relative_spread_per_ps;
    let rel = 1.0 - 1.0 / n;
    let omega2 = b2;
    let t2 = 1.0 / (4.0 * n * n * b2);
    let domega2 = b2 + rel * bs2;
    let dt2 = if rel == 0.0 {
        // Single photon: no relative coordinate.
        t2
    } else if bs2 == 0.0 {
        f64::INFINITY
    } else {
        t2 + rel / (4.0 * bs2)
    };
    GaussianStateMoments {
        omega2_per_ps2: omega2,
        t2_ps2: t2,
        domega2_per_ps2: domega2,
        dt2_ps2: dt2,
        tbp: 4.0 * dt2 * domega2,
    }
}

/// Squeezing ratio of the jointly Gaussian state: R = Δω²/(N·⟨Ω²⟩).
pub fn gaussian_state_r(state: &JointlyGaussianState) -> f64 {
    let m = gaussian_state_moments(state);
    m.domega2_per_ps2 / (state.n_photons as f64 * m.omega2_per_ps2)
}

/// Time-bandwidth product as a function of (R, N):
/// 4Δt²Δω² = R/N + (1 - 1/N)²/(1 - 1/(NR)).
/// Returns infinity on the Heisenberg boundary R ≤ 1/N (where Δt diverges).
pub fn tbp_from_r(r: f64, n: f64) -> f64 {
    let denom = 1.0 - 1.0 / (n * r);
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let rel = 1.0 - 1.0 / n;
    r / n + rel * rel / denom
}

/// Lossy squeezing-ratio evolution for an initial jointly Gaussian state:
/// R(z) = R(0)e^{-αz} + tbp(0)·(1 - e^{-αz}).
pub fn gaussian_lossy_r(state: &JointlyGaussianState, alpha_per_m: f64, z_m: f64) -> f64 {
    let r0 = gaussian_state_r(state);
    let tbp0 = gaussian_state_moments(state).tbp;
    lossy_r(r0, tbp0, alpha_per_m, z_m)
}

/// Exact Heisenberg limit on the position variance for Fock photon
/// statistics, where ⟨N̂⁻²⟩ = 1/N² exactly: ⟨T²⟩_H = 1/(4N²Δω′²). Only Fock
/// statistics are implemented; general photon statistics would need a state
/// model beyond this module.
pub fn exact_heisenberg_t2(n_photons: u64, domega_prime_per_ps: f64) -> Result<f64> {
    if n_photons < 1 {
        return Err(CoreError::Domain(
            "the inverse-photon-number operator needs at least one photon".into(),
        ));
    }
    if !(domega_prime_per_ps > 0.0) {
        return Err(CoreError::Domain(format!(
            "bandwidth must be positive, got {domega_prime_per_ps} /ps"
        )));
    }
    let n = n_photons as f64;
    Ok(1.0 / (4.0 * n * n * domega_prime_per_ps * domega_prime_per_ps))
}
