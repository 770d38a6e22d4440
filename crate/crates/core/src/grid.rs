//! Uniform time/frequency grid, the complex envelope container, and the
//! discrete spectral transform pair.
//!
//! Transform convention: the envelope and its spectrum are related by
//!
//! ```text
//! A(t) = (1/√2π) ∫ dω a(ω) e^{-iωt},    a(ω) = (1/√2π) ∫ dt A(t) e^{+iωt}
//! ```
//!
//! so a time derivative maps to multiplication by -iω on the spectrum. The
//! discrete pair is unitary: Σ|A_k|²·dt = Σ|a_j|²·dω exactly (Parseval), and
//! both grids are centered on zero. |A|² is a photon flux in photons/ps.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{CoreError, Result};

/// Uniform time grid with 2^k points and the matching centered frequency grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    n_points: usize,
    dt_ps: f64,
    t_center_ps: f64,
}

impl TimeGrid {
    pub fn new(n_points: usize, dt_ps: f64, t_center_ps: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(CoreError::Config(format!(
                "grid size must be a power of two >= 2, got {n_points}"
            )));
        }
        if !(dt_ps > 0.0) {
            return Err(CoreError::Config(format!(
                "grid spacing must be positive, got {dt_ps} ps"
            )));
        }
        Ok(Self {
            n_points,
            dt_ps,
            t_center_ps,
        })
    }

    /// Grid covering `window_ps` centered on zero.
    pub fn from_window(n_points: usize, window_ps: f64) -> Result<Self> {
        if !(window_ps > 0.0) {
            return Err(CoreError::Config(format!(
                "window must be positive, got {window_ps} ps"
            )));
        }
        Self::new(n_points, window_ps / n_points as f64, 0.0)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dt_ps(&self) -> f64 {
        self.dt_ps
    }

    pub fn t_center_ps(&self) -> f64 {
        self.t_center_ps
    }

    pub fn window_ps(&self) -> f64 {
        self.n_points as f64 * self.dt_ps
    }

    /// Frequency spacing dω = 2π/(n·dt) in rad/ps.
    pub fn domega_per_ps(&self) -> f64 {
        2.0 * PI / (self.n_points as f64 * self.dt_ps)
    }

    /// Time sample t_k = t_center + (k - n/2)·dt.
    pub fn time(&self, k: usize) -> f64 {
        self.t_center_ps + (k as f64 - (self.n_points / 2) as f64) * self.dt_ps
    }

    /// Frequency sample ω_j = (j - n/2)·dω, centered on zero (envelope frame).
    pub fn omega(&self, j: usize) -> f64 {
        (j as f64 - (self.n_points / 2) as f64) * self.domega_per_ps()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|k| self.time(k))
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|j| self.omega(j))
    }
}

/// Complex envelope samples on a [`TimeGrid`]; |A|² has units photons/ps.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub grid: TimeGrid,
    pub samples: Vec<Complex64>,
}

impl Envelope {
    pub fn new(grid: TimeGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(CoreError::Config(format!(
                "sample count {} does not match grid size {}",
                samples.len(),
                grid.n_points()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    /// Photon number N = Σ|A_k|²·dt.
    pub fn photon_number(&self) -> f64 {
        self.samples.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dt_ps()
    }

    pub fn is_finite(&self) -> bool {
        self.samples
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

/// Fundamental sech pulse √(N/2τ)·sech((t - t_c)/τ) carrying exactly
/// `n_photons` photons. Closed-form moments: Δt = (π/2√3)τ, Δω = 1/(√3τ).
pub fn make_sech_soliton(grid: TimeGrid, tau_ps: f64, n_photons: f64) -> Result<Envelope> {
    if !(tau_ps > 0.0) {
        return Err(CoreError::Domain(format!(
            "sech width must be positive, got {tau_ps} ps"
        )));
    }
    if grid.window_ps() < 30.0 * tau_ps {
        return Err(CoreError::Config(format!(
            "window {} ps too small for tau = {} ps; need >= 30 tau or moment \
             integrals are truncated",
            grid.window_ps(),
            tau_ps
        )));
    }
    let peak = (n_photons / (2.0 * tau_ps)).sqrt();
    let samples = (0..grid.n_points())
        .map(|k| {
            let x = (grid.time(k) - grid.t_center_ps()) / tau_ps;
            Complex64::new(peak / x.cosh(), 0.0)
        })
        .collect();
    Envelope::new(grid, samples)
}

/// Transform-limited Gaussian pulse e^{-t²/2τ²} scaled to `n_photons` photons.
pub fn make_gaussian(grid: TimeGrid, tau_ps: f64, n_photons: f64) -> Result<Envelope> {
    if !(tau_ps > 0.0) {
        return Err(CoreError::Domain(format!(
            "gaussian width must be positive, got {tau_ps} ps"
        )));
    }
    if grid.window_ps() < 20.0 * tau_ps {
        return Err(CoreError::Config(format!(
            "window {} ps too small for tau = {} ps",
            grid.window_ps(),
            tau_ps
        )));
    }
    // ∫ e^{-t²/τ²} dt = √π τ
    let peak = (n_photons / (PI.sqrt() * tau_ps)).sqrt();
    let samples = (0..grid.n_points())
        .map(|k| {
            let x = (grid.time(k) - grid.t_center_ps()) / tau_ps;
            Complex64::new(peak * (-0.5 * x * x).exp(), 0.0)
        })
        .collect();
    Envelope::new(grid, samples)
}

/// Reusable FFT plans and scratch for the unitary transform pair on one grid.
///
/// Uses centered indexing on both sides: the length-n/2 rotations before and
/// after the raw FFT map the zero-centered grids onto the FFT's native order.
pub struct SpectralTransform {
    grid: TimeGrid,
    // to_spectrum needs the e^{+iωt} kernel, which is rustfft's inverse direction
    analysis: Arc<dyn Fft<f64>>,
    synthesis: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
}

impl SpectralTransform {
    pub fn new(grid: TimeGrid) -> Self {
        let mut planner = FftPlanner::new();
        let analysis = planner.plan_fft_inverse(grid.n_points());
        let synthesis = planner.plan_fft_forward(grid.n_points());
        Self {
            grid,
            analysis,
            synthesis,
            buf: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    fn check_grid(&self, grid: &TimeGrid) -> Result<()> {
        if *grid != self.grid {
            return Err(CoreError::Config(
                "envelope grid does not match the transform plan".into(),
            ));
        }
        Ok(())
    }

    /// Spectrum samples a(ω_j) = (dt/√2π) Σ_k A_k e^{+iω_j t_k}.
    pub fn to_spectrum(&mut self, envelope: &Envelope) -> Result<Vec<Complex64>> {
        self.check_grid(&envelope.grid)?;
        let n = self.grid.n_points();
        let half = n / 2;
        self.buf.copy_from_slice(&envelope.samples);
        self.buf.rotate_left(half);
        self.analysis.process(&mut self.buf);
        self.buf.rotate_left(half);
        let scale = self.grid.dt_ps() / (2.0 * PI).sqrt();
        let tc = self.grid.t_center_ps();
        let mut out = std::mem::replace(&mut self.buf, vec![Complex64::default(); n]);
        if tc == 0.0 {
            for v in out.iter_mut() {
                *v *= scale;
            }
        } else {
            for (j, v) in out.iter_mut().enumerate() {
                let phase = Complex64::from_polar(scale, self.grid.omega(j) * tc);
                *v *= phase;
            }
        }
        Ok(out)
    }

    /// Inverse of [`Self::to_spectrum`]: A_k = (dω/√2π) Σ_j a_j e^{-iω_j t_k}.
    pub fn from_spectrum(&mut self, spectrum: &[Complex64]) -> Result<Envelope> {
        let n = self.grid.n_points();
        if spectrum.len() != n {
            return Err(CoreError::Config(format!(
                "spectrum length {} does not match grid size {n}",
                spectrum.len()
            )));
        }
        let half = n / 2;
        let tc = self.grid.t_center_ps();
        if tc == 0.0 {
            self.buf.copy_from_slice(spectrum);
        } else {
            for (j, (dst, src)) in self.buf.iter_mut().zip(spectrum).enumerate() {
                *dst = src * Complex64::from_polar(1.0, -self.grid.omega(j) * tc);
            }
        }
        self.buf.rotate_left(half);
        self.synthesis.process(&mut self.buf);
        self.buf.rotate_left(half);
        let scale = self.grid.domega_per_ps() / (2.0 * PI).sqrt();
        let samples = std::mem::replace(&mut self.buf, vec![Complex64::default(); n]);
        let samples = samples.into_iter().map(|v| v * scale).collect();
        Envelope::new(self.grid, samples)
    }

    /// Spectrally accurate time derivative ∂A/∂t (multiplication by -iω).
    pub fn derivative_t(&mut self, envelope: &Envelope) -> Result<Vec<Complex64>> {
        let mut spec = self.to_spectrum(envelope)?;
        for (j, s) in spec.iter_mut().enumerate() {
            *s *= Complex64::new(0.0, -self.grid.omega(j));
        }
        Ok(self.from_spectrum(&spec)?.samples)
    }
}

/// Photon number evaluated on a spectrum: Σ|a_j|²·dω.
pub fn spectral_photon_number(grid: &TimeGrid, spectrum: &[Complex64]) -> f64 {
    spectrum.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.domega_per_ps()
}
