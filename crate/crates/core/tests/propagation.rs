//! Integration oracles for the split-step propagator: fundamental-soliton
//! shape invariance and the adiabatic compression run driven end to end.

use approx::assert_relative_eq;
use qtiming_core::fiber::{DispersionProfile, FiberLink, FiberSegment};
use qtiming_core::grid::{make_sech_soliton, SpectralTransform, TimeGrid};
use qtiming_core::jitter::JitterState;
use qtiming_core::moments::{coherent_jitter_init, measure};
use qtiming_core::ssfm::{propagate, PropagationOptions, StepControl};
use qtiming_core::units;

/// A fundamental soliton with τ = 2|β|/(κN) keeps its shape: after two
/// soliton periods of lossless propagation the intensity profile must match
/// the input to better than 1e-6 of the peak.
#[test]
fn fundamental_soliton_shape_invariance() {
    let grid = TimeGrid::from_window(2048, 64.0).unwrap();
    let kappa = units::kappa_from_fiber(2.6e-20, 30e-12, 1550e-9).unwrap();
    let beta: f64 = -4.25e-3;
    let tau = 1.0;
    let n0 = 2.0 * beta.abs() / (kappa * tau);
    let env = make_sech_soliton(grid, tau, n0).unwrap();

    let period = qtiming_core::fiber::soliton_period(beta, tau).unwrap();
    let length = 2.0 * period;
    let link = FiberLink::new(vec![FiberSegment {
        length_m: length,
        alpha_per_m: 0.0,
        kappa_ps_per_m: kappa,
        dispersion: DispersionProfile::Constant {
            beta_ps2_per_m: beta,
        },
    }])
    .unwrap();

    let control = StepControl {
        dz_m: 0.25,
        record_every_m: length,
    };
    let init = JitterState::with_initial_moments(0.0, 0.0, 0.0);
    let run = propagate(
        env.clone(),
        &link,
        &control,
        init,
        &PropagationOptions::default(),
    )
    .unwrap();

    let peak = env.samples.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let max_dev = env
        .samples
        .iter()
        .zip(&run.final_envelope.samples)
        .map(|(a, b)| (a.norm() - b.norm()).abs())
        .fold(0.0, f64::max);
    assert!(
        max_dev < 1e-6 * peak,
        "shape deviation {max_dev:e} exceeds 1e-6 of peak {peak:e}"
    );
}

/// End-to-end adiabatic compression run with the reference parameters;
/// prints the headline numbers for inspection.
#[test]
fn adiabatic_compression_reference_run() {
    let grid = TimeGrid::from_window(8192, 64.0).unwrap();
    let n0 = units::photon_number_from_energy(2.4e-12, 1550e-9).unwrap();
    let env = make_sech_soliton(grid, 1.0, n0).unwrap();
    let alpha = units::alpha_from_db_per_km(0.4).unwrap();
    let link = FiberLink::new(vec![
        FiberSegment {
            length_m: 2000.0,
            alpha_per_m: alpha,
            kappa_ps_per_m: units::kappa_from_fiber(2.6e-20, 30e-12, 1550e-9).unwrap(),
            dispersion: DispersionProfile::DispersionIncreasing {
                beta_end_ps2_per_m: -12.75e-3,
                length_m: 2000.0,
                l_beta_m: 1000.0,
            },
        },
        FiberSegment {
            length_m: 110.0,
            alpha_per_m: alpha,
            kappa_ps_per_m: units::kappa_from_fiber(2.7e-20, 15e-12, 1550e-9).unwrap(),
            dispersion: DispersionProfile::Constant {
                beta_ps2_per_m: 127.5e-3,
            },
        },
    ])
    .unwrap();

    let mut xf = SpectralTransform::new(grid);
    let m0 = measure(&env, &mut xf).unwrap();
    let init = coherent_jitter_init(&m0);
    let control = StepControl {
        dz_m: 0.25,
        record_every_m: 10.0,
    };
    let start = std::time::Instant::now();
    let run = propagate(env, &link, &control, init, &PropagationOptions::default()).unwrap();
    let elapsed = start.elapsed();

    let last = run.records.last().unwrap();
    let t2_0 = init.t2_init_ps2;
    let narrowing = m0.domega_rms_per_ps / last.moments.domega_rms_per_ps;
    let rep = last.jitter.report(&last.moments);
    println!("run time: {elapsed:?} ({} records)", run.records.len());
    println!("N(L+L')/N(0)   = {:.6}", last.moments.n_photons / m0.n_photons);
    println!("narrowing      = {narrowing:.4}");
    println!("diff/T2(0)     = {:.4}", last.jitter.t2_diff_ps2 / t2_0);
    println!("chirp/T2(0)    = {:.4}", last.jitter.t2_chirp_ps2 / t2_0);
    println!("gh/T2(0)       = {:.4}", last.jitter.t2_gh_ps2 / t2_0);
    println!("total/T2(0)    = {:.4}", rep.t2_total_ps2 / t2_0);
    println!("R              = {:.4}", rep.squeezing_ratio_r);
    println!("R_db           = {:.4}", rep.r_db);

    // Loss bookkeeping is exact regardless of the physics outcome.
    assert_relative_eq!(
        last.moments.n_photons / m0.n_photons,
        (-alpha * 2110.0_f64).exp(),
        max_relative = 1e-12
    );
}
