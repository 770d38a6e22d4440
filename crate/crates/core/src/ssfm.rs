//! Split-step spectral integrator for the classical envelope equation
//!
//! ```text
//! i∂A/∂z = (β(z)/2)∂²A/∂t² - κ|A|²A - (iα/2)A
//! ```
//!
//! with loss, z-dependent dispersion, and Kerr nonlinearity. Each step is a
//! symmetric split: half linear step in the frequency domain with the
//! multiplier exp(+iβ(z_mid)ω²dz/4 - αdz/4), a full nonlinear step
//! exp(+iκ|A|²dz) in the time domain, then the second half linear step with
//! the same midpoint β. Loss lives inside the linear operator, so the photon
//! number decays exactly as N(0)e^{-∫α} — the jitter drive terms divide by N
//! and are sensitive to it.
//!
//! The jitter accumulators are advanced every step from the midpoint estimate
//! of the measured moments, and full records are emitted on the requested
//! cadence.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::fiber::{FiberLink, FiberSegment};
use crate::grid::{Envelope, SpectralTransform, TimeGrid};
use crate::jitter::JitterState;
use crate::moments::{measure, PulseMoments};

/// Fixed step size and record cadence for one propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub dz_m: f64,
    pub record_every_m: f64,
}

impl StepControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.dz_m > 0.0) {
            return Err(CoreError::Config(format!(
                "step size must be positive, got {} m",
                self.dz_m
            )));
        }
        if self.record_every_m < self.dz_m {
            return Err(CoreError::Config(format!(
                "record cadence {} m must be at least the step size {} m",
                self.record_every_m, self.dz_m
            )));
        }
        Ok(())
    }
}

/// Optional per-record payloads.
#[derive(Debug, Clone, Copy, Default)]
pub struct PropagationOptions {
    /// Store |A(t)|² and |a(ω)|² with every record (large).
    pub keep_profiles: bool,
}

/// Intensity and spectral-density snapshot at one record point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSnapshot {
    /// |A(t_k)|² in photons/ps.
    pub intensity: Vec<f64>,
    /// |a(ω_j)|² in photons·ps.
    pub spectral_density: Vec<f64>,
}

/// State sampled at one z along the run; records are strictly increasing in z.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationRecord {
    pub z_m: f64,
    pub moments: PulseMoments,
    pub jitter: JitterState,
    pub profile: Option<ProfileSnapshot>,
}

/// Full result of a propagation run.
#[derive(Debug)]
pub struct PropagationRun {
    pub records: Vec<PropagationRecord>,
    pub final_envelope: Envelope,
}

/// Estimated minimum soliton period along the link, used to police the step
/// size. In anomalous nonlinear segments the width follows the fundamental
/// soliton attractor τ = 2|β|/(κN); elsewhere the entry width is carried.
pub fn min_soliton_period_m(link: &FiberLink, tau0_ps: f64, n0: f64) -> Option<f64> {
    const SAMPLES: usize = 64;
    let mut tau_carry = tau0_ps;
    let mut min_period = f64::INFINITY;
    let mut n_entry = n0;
    for seg in link.segments() {
        let mut tau_end = tau_carry;
        for i in 0..=SAMPLES {
            let z_local = seg.length_m * i as f64 / SAMPLES as f64;
            let beta = seg.dispersion.beta(z_local);
            if beta == 0.0 || seg.kappa_ps_per_m <= 0.0 {
                continue;
            }
            let n_z = n_entry * (-seg.alpha_per_m * z_local).exp();
            let tau = if beta < 0.0 && n_z > 0.0 {
                2.0 * beta.abs() / (seg.kappa_ps_per_m * n_z)
            } else {
                tau_carry
            };
            let period = std::f64::consts::PI / 2.0 * tau * tau / beta.abs();
            if period < min_period {
                min_period = period;
            }
            if i == SAMPLES {
                tau_end = tau;
            }
        }
        tau_carry = tau_end;
        n_entry *= (-seg.alpha_per_m * seg.length_m).exp();
    }
    min_period.is_finite().then_some(min_period)
}

/// Frequency samples in FFT-native (wrapped) order: bins 0..n/2 carry
/// non-negative ω, bins n/2..n the negative tail.
fn native_omega_sq(grid: &TimeGrid) -> Vec<f64> {
    let n = grid.n_points();
    let dw = grid.domega_per_ps();
    (0..n)
        .map(|j| {
            let idx = if j < n / 2 {
                j as f64
            } else {
                j as f64 - n as f64
            };
            let w = idx * dw;
            w * w
        })
        .collect()
}

/// In-place split-step workspace on one grid.
pub struct SplitStepper {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    omega_sq: Vec<f64>,
    half_linear: Vec<Complex64>,
    half_key: (f64, f64, f64),
    inv_n: f64,
}

impl SplitStepper {
    pub fn new(grid: TimeGrid) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n_points());
        let inv = planner.plan_fft_inverse(grid.n_points());
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            fwd,
            inv,
            scratch: vec![Complex64::default(); scratch_len],
            omega_sq: native_omega_sq(&grid),
            half_linear: vec![Complex64::default(); grid.n_points()],
            half_key: (f64::NAN, f64::NAN, f64::NAN),
            inv_n: 1.0 / grid.n_points() as f64,
        }
    }

    fn prepare_half_linear(&mut self, beta_mid: f64, alpha: f64, dz: f64) {
        let key = (beta_mid, alpha, dz);
        if key == self.half_key {
            return;
        }
        let mag = (-alpha * dz / 4.0).exp();
        for (h, w2) in self.half_linear.iter_mut().zip(&self.omega_sq) {
            *h = Complex64::from_polar(mag, beta_mid * w2 * dz / 4.0);
        }
        self.half_key = key;
    }

    fn apply_half_linear(&mut self, samples: &mut [Complex64]) {
        // Analysis direction carries e^{+iωt}; the ω-dependent multiplier is
        // symmetric in bin order, so no center-shifting is needed.
        self.inv.process_with_scratch(samples, &mut self.scratch);
        for (a, h) in samples.iter_mut().zip(&self.half_linear) {
            *a *= h;
        }
        self.fwd.process_with_scratch(samples, &mut self.scratch);
        // The raw transform pair scales by n.
        for a in samples.iter_mut() {
            *a *= self.inv_n;
        }
    }

    /// Advance the envelope by one symmetric split step across [z, z+dz]
    /// inside `segment`, with β evaluated at the step midpoint.
    pub fn step(
        &mut self,
        envelope: &mut Envelope,
        segment: &FiberSegment,
        z_local_m: f64,
        dz_m: f64,
    ) -> Result<()> {
        if !(dz_m > 0.0) {
            return Err(CoreError::Config(format!(
                "step size must be positive, got {dz_m} m"
            )));
        }
        if z_local_m + dz_m > segment.length_m * (1.0 + 1e-12) {
            return Err(CoreError::Config(format!(
                "step [{z_local_m}, {}] m leaves the segment of length {} m",
                z_local_m + dz_m,
                segment.length_m
            )));
        }
        let beta_mid = segment.dispersion.beta(z_local_m + dz_m / 2.0);
        self.prepare_half_linear(beta_mid, segment.alpha_per_m, dz_m);

        self.apply_half_linear(&mut envelope.samples);
        let kappa = segment.kappa_ps_per_m;
        if kappa != 0.0 {
            for a in envelope.samples.iter_mut() {
                let phase = kappa * a.norm_sqr() * dz_m;
                *a *= Complex64::from_polar(1.0, phase);
            }
        }
        self.apply_half_linear(&mut envelope.samples);
        Ok(())
    }
}

/// Walk the whole link, advancing the jitter state from moments sampled every
/// step, and emit records at the requested cadence (z = 0 and the link end
/// are always included).
pub fn propagate(
    mut envelope: Envelope,
    link: &FiberLink,
    control: &StepControl,
    init: JitterState,
    opts: &PropagationOptions,
) -> Result<PropagationRun> {
    control.validate()?;
    if !envelope.is_finite() {
        return Err(CoreError::Numerical {
            z_m: 0.0,
            detail: "input envelope contains non-finite samples".into(),
        });
    }

    let grid = envelope.grid;
    let mut xf = SpectralTransform::new(grid);
    let mut stepper = SplitStepper::new(grid);

    let m0 = measure(&envelope, &mut xf)?;
    // Step-size sanity against the estimated soliton scale.
    let tau0 = m0.dt_rms_ps * 2.0 * 3.0_f64.sqrt() / std::f64::consts::PI;
    if let Some(period) = min_soliton_period_m(link, tau0, m0.n_photons) {
        if control.dz_m > period / 200.0 {
            return Err(CoreError::Config(format!(
                "step {} m too coarse: estimated minimum soliton period {:.1} m \
                 requires dz <= {:.3} m",
                control.dz_m,
                period,
                period / 200.0
            )));
        }
    }

    let mut records = Vec::new();
    let mut state = init;
    let mut m_prev = m0;
    let snapshot = |env: &Envelope, xf: &mut SpectralTransform| -> Result<ProfileSnapshot> {
        let spec = xf.to_spectrum(env)?;
        Ok(ProfileSnapshot {
            intensity: env.samples.iter().map(|a| a.norm_sqr()).collect(),
            spectral_density: spec.iter().map(|a| a.norm_sqr()).collect(),
        })
    };
    let profile0 = opts
        .keep_profiles
        .then(|| snapshot(&envelope, &mut xf))
        .transpose()?;
    records.push(PropagationRecord {
        z_m: 0.0,
        moments: m0,
        jitter: state,
        profile: profile0,
    });

    let total = link.total_length_m();
    let mut z_global = 0.0;
    let mut next_record = control.record_every_m;
    const REL_TOL: f64 = 1e-9;

    for segment in link.segments() {
        let mut z_local = 0.0;
        let len = segment.length_m;
        while z_local < len * (1.0 - REL_TOL) {
            let h = control.dz_m.min(len - z_local);
            let beta_mid = segment.dispersion.beta(z_local + h / 2.0);
            stepper.step(&mut envelope, segment, z_local, h)?;
            z_local += h;
            z_global += h;

            if !envelope.is_finite() {
                return Err(CoreError::Numerical {
                    z_m: z_global,
                    detail: "split step produced non-finite samples".into(),
                });
            }

            let m_new = measure(&envelope, &mut xf)?;
            let drive = PulseMoments::midpoint(&m_prev, &m_new);
            state.advance(h, beta_mid, segment.alpha_per_m, &drive);
            m_prev = m_new;

            while z_global + total * REL_TOL >= next_record
                && next_record <= total * (1.0 + REL_TOL)
            {
                let profile = opts
                    .keep_profiles
                    .then(|| snapshot(&envelope, &mut xf))
                    .transpose()?;
                records.push(PropagationRecord {
                    z_m: z_global,
                    moments: m_new,
                    jitter: state,
                    profile,
                });
                next_record += control.record_every_m;
            }
        }
    }

    // Always include the link end.
    if records
        .last()
        .map(|r| r.z_m < total * (1.0 - REL_TOL))
        .unwrap_or(true)
    {
        let profile = opts
            .keep_profiles
            .then(|| snapshot(&envelope, &mut xf))
            .transpose()?;
        records.push(PropagationRecord {
            z_m: z_global,
            moments: m_prev,
            jitter: state,
            profile,
        });
    }

    Ok(PropagationRun {
        records,
        final_envelope: envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::DispersionProfile;
    use crate::grid::{make_gaussian, make_sech_soliton};
    use approx::assert_relative_eq;

    fn single_segment(
        length: f64,
        alpha: f64,
        kappa: f64,
        beta: f64,
    ) -> FiberLink {
        FiberLink::new(vec![FiberSegment {
            length_m: length,
            alpha_per_m: alpha,
            kappa_ps_per_m: kappa,
            dispersion: DispersionProfile::Constant {
                beta_ps2_per_m: beta,
            },
        }])
        .unwrap()
    }

    /// Linear propagation is exact in the spectral representation: a dispersed
    /// Gaussian must match the analytic solution to roundoff.
    #[test]
    fn dispersed_gaussian_matches_analytic() {
        let grid = TimeGrid::from_window(2048, 64.0).unwrap();
        let tau = 1.0;
        let env = make_gaussian(grid, tau, 1e6).unwrap();
        let beta = -4.25e-3;
        let link = single_segment(200.0, 0.0, 0.0, beta);
        let control = StepControl {
            dz_m: 0.5,
            record_every_m: 200.0,
        };
        let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
        let run = propagate(env.clone(), &link, &control, init, &Default::default()).unwrap();

        // A(z,t) = A0·(τ²/(τ²-iβz))^{1/2}·exp(-t²/(2(τ²-iβz))) for e^{-t²/2τ²} input.
        let d = Complex64::new(tau * tau, -beta * 200.0);
        let peak0 = env.samples[1024].re;
        let mut max_err = 0.0_f64;
        for (k, a) in run.final_envelope.samples.iter().enumerate() {
            let t = grid.time(k);
            let analytic =
                peak0 * (tau * tau / d).sqrt() * (-t * t / (2.0 * d)).exp();
            max_err = max_err.max((a - analytic).norm());
        }
        assert!(max_err < 1e-8 * peak0, "max err {max_err}");
    }

    /// Pure self-phase modulation: |A| unchanged, phase rotated by κ|A|²z.
    #[test]
    fn pure_spm_closed_form() {
        let grid = TimeGrid::from_window(1024, 64.0).unwrap();
        let env = make_sech_soliton(grid, 1.0, 1.9e7).unwrap();
        let kappa = 4.5e-10;
        let z = 500.0;
        let link = single_segment(z, 0.0, kappa, 0.0);
        let control = StepControl {
            dz_m: 1.0,
            record_every_m: z,
        };
        let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
        let run = propagate(env.clone(), &link, &control, init, &Default::default()).unwrap();
        let peak = env.samples.iter().map(|a| a.norm()).fold(0.0, f64::max);
        for (a0, a1) in env.samples.iter().zip(&run.final_envelope.samples) {
            let expected = a0 * Complex64::from_polar(1.0, kappa * a0.norm_sqr() * z);
            assert!((a1 - expected).norm() < 1e-9 * peak);
        }
    }

    #[test]
    fn loss_decays_photon_number_exactly() {
        let grid = TimeGrid::from_window(1024, 64.0).unwrap();
        let env = make_sech_soliton(grid, 1.0, 1.9e7).unwrap();
        let alpha = 9.2103e-5;
        let link = single_segment(1000.0, alpha, 4.5e-10, -4.25e-3);
        let control = StepControl {
            dz_m: 0.5,
            record_every_m: 100.0,
        };
        let n0 = env.photon_number();
        let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
        let run = propagate(env, &link, &control, init, &Default::default()).unwrap();
        for rec in &run.records {
            assert_relative_eq!(
                rec.moments.n_photons,
                n0 * (-alpha * rec.z_m).exp(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn lossless_photon_number_conserved() {
        let grid = TimeGrid::from_window(1024, 64.0).unwrap();
        let env = make_sech_soliton(grid, 1.0, 1.9e7).unwrap();
        let link = single_segment(739.0, 0.0, 4.5024e-10, -4.25e-3);
        let control = StepControl {
            dz_m: 0.5,
            record_every_m: 739.0,
        };
        let n0 = env.photon_number();
        let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
        let run = propagate(env, &link, &control, init, &Default::default()).unwrap();
        assert_relative_eq!(
            run.final_envelope.photon_number(),
            n0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn non_finite_input_is_numerical_error() {
        let grid = TimeGrid::from_window(256, 32.0).unwrap();
        let mut env = make_sech_soliton(grid, 0.5, 1e6).unwrap();
        env.samples[10] = Complex64::new(f64::NAN, 0.0);
        let link = single_segment(10.0, 0.0, 0.0, 0.0);
        let control = StepControl {
            dz_m: 1.0,
            record_every_m: 10.0,
        };
        let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
        match propagate(env, &link, &control, init, &Default::default()) {
            Err(CoreError::Numerical { z_m, .. }) => assert_eq!(z_m, 0.0),
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }

    #[test]
    fn coarse_step_is_rejected() {
        let grid = TimeGrid::from_window(1024, 64.0).unwrap();
        // τ = 1 ps soliton: Λ ≈ 370 m, so dz must stay below ~1.85 m.
        let env = make_sech_soliton(grid, 1.0, 1.888e7).unwrap();
        let link = single_segment(100.0, 0.0, 4.5024e-10, -4.25e-3);
        let control = StepControl {
            dz_m: 5.0,
            record_every_m: 100.0,
        };
        let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
        assert!(matches!(
            propagate(env, &link, &control, init, &Default::default()),
            Err(CoreError::Config(_))
        ));
    }

    #[test]
    fn step_control_validation() {
        assert!(StepControl {
            dz_m: 0.0,
            record_every_m: 1.0
        }
        .validate()
        .is_err());
        assert!(StepControl {
            dz_m: 2.0,
            record_every_m: 1.0
        }
        .validate()
        .is_err());
        assert!(StepControl {
            dz_m: 0.5,
            record_every_m: 10.0
        }
        .validate()
        .is_ok());
    }

    /// Zero-net-dispersion lossless link: every noise term vanishes and the
    /// total position variance returns to its initial value.
    #[test]
    fn zero_net_lossless_conserves_timing_variance() {
        let grid = TimeGrid::from_window(2048, 64.0).unwrap();
        let n0 = 1.888e7;
        let env = make_sech_soliton(grid, 1.0, n0).unwrap();
        let link = FiberLink::new(vec![
            FiberSegment {
                length_m: 400.0,
                alpha_per_m: 0.0,
                kappa_ps_per_m: 4.5024e-10,
                dispersion: DispersionProfile::Constant {
                    beta_ps2_per_m: -4.25e-3,
                },
            },
            FiberSegment {
                length_m: 400.0,
                alpha_per_m: 0.0,
                kappa_ps_per_m: 4.5024e-10,
                dispersion: DispersionProfile::Constant {
                    beta_ps2_per_m: 4.25e-3,
                },
            },
        ])
        .unwrap();
        let control = StepControl {
            dz_m: 0.5,
            record_every_m: 100.0,
        };
        let mut xf = SpectralTransform::new(grid);
        let m0 = measure(&env, &mut xf).unwrap();
        let init = crate::moments::coherent_jitter_init(&m0);
        let run = propagate(env, &link, &control, init, &Default::default()).unwrap();
        let last = run.records.last().unwrap();
        assert!(last.jitter.d_net_ps2.abs() < 1e-9);
        assert_relative_eq!(
            last.jitter.total_t2(),
            init.t2_init_ps2,
            max_relative = 1e-6
        );
    }

    #[test]
    fn records_are_strictly_increasing_and_cover_the_link() {
        let grid = TimeGrid::from_window(512, 64.0).unwrap();
        let env = make_gaussian(grid, 1.0, 1e6).unwrap();
        let link = single_segment(103.0, 1e-4, 0.0, -1e-3);
        let control = StepControl {
            dz_m: 1.0,
            record_every_m: 25.0,
        };
        let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
        let run = propagate(env, &link, &control, init, &Default::default()).unwrap();
        let zs: Vec<f64> = run.records.iter().map(|r| r.z_m).collect();
        assert_eq!(zs.first().copied(), Some(0.0));
        assert!((zs.last().unwrap() - 103.0).abs() < 1e-9);
        for pair in zs.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }
}
