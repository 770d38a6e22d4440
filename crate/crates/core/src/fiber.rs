//! Declarative fiber-link description: per-segment loss, Kerr coefficient,
//! length, and z-dependent dispersion profiles, with the query operations used
//! by the propagator and the jitter engine.
//!
//! Dispersion profiles carry exact antiderivatives so that accumulated
//! dispersion never picks up quadrature noise.

use crate::error::{CoreError, Result};
use std::f64::consts::PI;

/// Group-velocity dispersion β(z) over one segment, in ps²/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DispersionProfile {
    Constant {
        beta_ps2_per_m: f64,
    },
    /// β(z) = β_end / (1 + (L - z)/L_β): |β| grows from |β_end|/(1 + L/L_β)
    /// at the segment entry to |β_end| at the exit.
    DispersionIncreasing {
        beta_end_ps2_per_m: f64,
        length_m: f64,
        l_beta_m: f64,
    },
}

impl DispersionProfile {
    /// β at the segment-local coordinate z ∈ [0, L].
    pub fn beta(&self, z_local_m: f64) -> f64 {
        match *self {
            Self::Constant { beta_ps2_per_m } => beta_ps2_per_m,
            Self::DispersionIncreasing {
                beta_end_ps2_per_m,
                length_m,
                l_beta_m,
            } => beta_end_ps2_per_m / (1.0 + (length_m - z_local_m) / l_beta_m),
        }
    }

    /// Exact antiderivative ∫₀^z β(z')dz' in ps².
    pub fn integral(&self, z_local_m: f64) -> f64 {
        match *self {
            Self::Constant { beta_ps2_per_m } => beta_ps2_per_m * z_local_m,
            Self::DispersionIncreasing {
                beta_end_ps2_per_m,
                length_m,
                l_beta_m,
            } => {
                // ∫ β_end/(1 + (L-z)/L_β) dz = β_end·L_β·ln[(L_β+L)/(L_β+L-z)]
                beta_end_ps2_per_m
                    * l_beta_m
                    * ((l_beta_m + length_m) / (l_beta_m + length_m - z_local_m)).ln()
            }
        }
    }

    /// dβ/dz at the segment-local coordinate.
    pub fn derivative(&self, z_local_m: f64) -> f64 {
        match *self {
            Self::Constant { .. } => 0.0,
            Self::DispersionIncreasing {
                beta_end_ps2_per_m,
                length_m,
                l_beta_m,
            } => {
                let denom = 1.0 + (length_m - z_local_m) / l_beta_m;
                beta_end_ps2_per_m / (l_beta_m * denom * denom)
            }
        }
    }
}

/// One homogeneous piece of fiber in canonical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberSegment {
    pub length_m: f64,
    /// Natural-log power loss coefficient, 1/m.
    pub alpha_per_m: f64,
    /// Kerr coefficient, ps/m.
    pub kappa_ps_per_m: f64,
    pub dispersion: DispersionProfile,
}

impl FiberSegment {
    pub fn validate(&self) -> Result<()> {
        if !(self.length_m > 0.0) {
            return Err(CoreError::Domain(format!(
                "segment length must be positive, got {} m",
                self.length_m
            )));
        }
        if self.alpha_per_m < 0.0 {
            return Err(CoreError::Domain(format!(
                "segment loss must be non-negative, got {} /m",
                self.alpha_per_m
            )));
        }
        if let DispersionProfile::DispersionIncreasing {
            length_m, l_beta_m, ..
        } = self.dispersion
        {
            if !(l_beta_m > 0.0) {
                return Err(CoreError::Domain(format!(
                    "dispersion-increasing profile needs L_beta > 0, got {l_beta_m} m"
                )));
            }
            if (length_m - self.length_m).abs() > 1e-9 * self.length_m.max(1.0) {
                return Err(CoreError::Config(format!(
                    "profile length {} m does not match segment length {} m",
                    length_m, self.length_m
                )));
            }
        }
        Ok(())
    }
}

/// Ordered list of segments with a cumulative-length index; the global
/// coordinate z ∈ [0, total] maps to exactly one segment.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberLink {
    segments: Vec<FiberSegment>,
    /// starts[i] is the global z of segment i's entry; starts[n] = total length.
    starts: Vec<f64>,
}

impl FiberLink {
    pub fn new(segments: Vec<FiberSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(CoreError::Config("link needs at least one segment".into()));
        }
        let mut starts = Vec::with_capacity(segments.len() + 1);
        let mut z = 0.0;
        for seg in &segments {
            seg.validate()?;
            starts.push(z);
            z += seg.length_m;
        }
        starts.push(z);
        Ok(Self { segments, starts })
    }

    pub fn segments(&self) -> &[FiberSegment] {
        &self.segments
    }

    pub fn total_length_m(&self) -> f64 {
        *self.starts.last().unwrap()
    }

    /// Global z of segment i's entry.
    pub fn segment_start_m(&self, index: usize) -> f64 {
        self.starts[index]
    }

    /// Segment index and local coordinate for a global z.
    pub fn locate(&self, z_m: f64) -> Result<(usize, f64)> {
        let total = self.total_length_m();
        if !(0.0..=total * (1.0 + 1e-12)).contains(&z_m) || z_m.is_nan() {
            return Err(CoreError::Domain(format!(
                "z = {z_m} m outside the link [0, {total}] m"
            )));
        }
        let z = z_m.min(total);
        // Boundary points belong to the downstream segment, except the link end.
        let idx = match self
            .starts
            .iter()
            .take(self.segments.len())
            .rposition(|&s| s <= z)
        {
            Some(i) => i,
            None => 0,
        };
        Ok((idx, z - self.starts[idx]))
    }

    /// β(z) in ps²/m at a global coordinate.
    pub fn beta_at(&self, z_m: f64) -> Result<f64> {
        let (idx, local) = self.locate(z_m)?;
        Ok(self.segments[idx].dispersion.beta(local))
    }

    /// α(z) in 1/m at a global coordinate.
    pub fn alpha_at(&self, z_m: f64) -> Result<f64> {
        let (idx, _) = self.locate(z_m)?;
        Ok(self.segments[idx].alpha_per_m)
    }

    /// Accumulated dispersion ∫₀^z β(z')dz' in ps², by exact antiderivative.
    pub fn net_dispersion(&self, z_m: f64) -> Result<f64> {
        let (idx, local) = self.locate(z_m)?;
        let mut acc = 0.0;
        for seg in &self.segments[..idx] {
            acc += seg.dispersion.integral(seg.length_m);
        }
        acc += self.segments[idx].dispersion.integral(local);
        Ok(acc)
    }

    /// Cumulative loss exponent ∫₀^z α(z')dz' (dimensionless).
    pub fn loss_exponent(&self, z_m: f64) -> Result<f64> {
        let (idx, local) = self.locate(z_m)?;
        let mut acc = 0.0;
        for seg in &self.segments[..idx] {
            acc += seg.alpha_per_m * seg.length_m;
        }
        acc += self.segments[idx].alpha_per_m * local;
        Ok(acc)
    }

    /// Adiabaticity length scales at a global coordinate: (|β/(dβ/dz)|, 1/α).
    /// Infinite entries mean the corresponding parameter does not vary.
    /// These are reported for diagnostics; nothing is enforced.
    pub fn adiabaticity_scales(&self, z_m: f64) -> Result<(f64, f64)> {
        let (idx, local) = self.locate(z_m)?;
        let seg = &self.segments[idx];
        let beta = seg.dispersion.beta(local);
        let dbeta = seg.dispersion.derivative(local);
        let beta_scale = if dbeta == 0.0 {
            f64::INFINITY
        } else {
            (beta / dbeta).abs()
        };
        let loss_scale = if seg.alpha_per_m == 0.0 {
            f64::INFINITY
        } else {
            1.0 / seg.alpha_per_m
        };
        Ok((beta_scale, loss_scale))
    }

    /// Length of a constant-dispersion trailing segment that would drive the
    /// link's net dispersion to zero, for the given compensating β' (ps²/m).
    pub fn compensating_length_m(&self, beta_prime_ps2_per_m: f64) -> Result<f64> {
        if beta_prime_ps2_per_m == 0.0 {
            return Err(CoreError::Domain(
                "compensating dispersion must be nonzero".into(),
            ));
        }
        let net = self.net_dispersion(self.total_length_m())?;
        let length = -net / beta_prime_ps2_per_m;
        if length < 0.0 {
            return Err(CoreError::Domain(format!(
                "compensating dispersion {beta_prime_ps2_per_m} ps²/m has the same \
                 sign as the accumulated dispersion {net} ps²"
            )));
        }
        Ok(length)
    }
}

/// Soliton period Λ = (π/2)·τ²/|β| in m.
pub fn soliton_period(beta_ps2_per_m: f64, tau_ps: f64) -> Result<f64> {
    if beta_ps2_per_m == 0.0 {
        return Err(CoreError::Domain(
            "soliton period undefined for zero dispersion".into(),
        ));
    }
    if !(tau_ps > 0.0) {
        return Err(CoreError::Domain(format!(
            "soliton width must be positive, got {tau_ps} ps"
        )));
    }
    Ok(PI / 2.0 * tau_ps * tau_ps / beta_ps2_per_m.abs())
}

/// Figure of merit 1/(αΛ) = (2/π)|β|/(ατ²): loss-free soliton periods per
/// attenuation length. Larger means less Gordon-Haus growth per unit of
/// adiabatic compression.
pub fn figure_of_merit(alpha_per_m: f64, beta_ps2_per_m: f64, tau_ps: f64) -> Result<f64> {
    if !(alpha_per_m > 0.0) {
        return Err(CoreError::Domain(format!(
            "figure of merit needs positive loss, got {alpha_per_m} /m"
        )));
    }
    Ok(1.0 / (alpha_per_m * soliton_period(beta_ps2_per_m, tau_ps)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units;
    use approx::assert_relative_eq;

    fn reference_link() -> FiberLink {
        // 2 km dispersion-increasing fiber followed by a 110 m compensating fiber.
        FiberLink::new(vec![
            FiberSegment {
                length_m: 2000.0,
                alpha_per_m: units::alpha_from_db_per_km(0.4).unwrap(),
                kappa_ps_per_m: units::kappa_from_fiber(2.6e-20, 30e-12, 1550e-9).unwrap(),
                dispersion: DispersionProfile::DispersionIncreasing {
                    beta_end_ps2_per_m: -12.75e-3,
                    length_m: 2000.0,
                    l_beta_m: 1000.0,
                },
            },
            FiberSegment {
                length_m: 110.0,
                alpha_per_m: units::alpha_from_db_per_km(0.4).unwrap(),
                kappa_ps_per_m: units::kappa_from_fiber(2.7e-20, 15e-12, 1550e-9).unwrap(),
                dispersion: DispersionProfile::Constant {
                    beta_ps2_per_m: 127.5e-3,
                },
            },
        ])
        .unwrap()
    }

    #[test]
    fn beta_at_profile_endpoints() {
        let link = reference_link();
        assert_relative_eq!(link.beta_at(0.0).unwrap(), -4.25e-3, max_relative = 1e-12);
        assert_relative_eq!(
            link.beta_at(2000.0 - 1e-9).unwrap(),
            -12.75e-3,
            max_relative = 1e-6
        );
        assert_relative_eq!(link.beta_at(2050.0).unwrap(), 127.5e-3);
        assert!(link.beta_at(-1.0).is_err());
        assert!(link.beta_at(3000.0).is_err());
    }

    #[test]
    fn constant_profile_is_constant() {
        let p = DispersionProfile::Constant {
            beta_ps2_per_m: -5e-3,
        };
        for z in [0.0, 10.0, 123.4] {
            assert_eq!(p.beta(z), -5e-3);
        }
    }

    #[test]
    fn net_dispersion_closed_forms() {
        let link = reference_link();
        assert_eq!(link.net_dispersion(0.0).unwrap(), 0.0);
        // First fiber: β_end·L_β·ln(3) = -12.75·ln3 ps².
        let d1 = link.net_dispersion(2000.0).unwrap();
        assert_relative_eq!(d1, -12.75e-3 * 1000.0 * 3.0_f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(d1, -14.007, max_relative = 1e-4);
        // Compensator adds +14.025 ps², leaving +0.018 ps².
        let total = link.net_dispersion(link.total_length_m()).unwrap();
        assert_relative_eq!(total, d1 + 127.5e-3 * 110.0, max_relative = 1e-12);
        assert_relative_eq!(total, 0.018, max_relative = 3e-2);
    }

    #[test]
    fn net_dispersion_derivative_matches_beta() {
        let link = reference_link();
        let h = 1e-4;
        for z in [100.0, 777.0, 1500.0, 1999.0, 2050.0] {
            let num =
                (link.net_dispersion(z + h).unwrap() - link.net_dispersion(z - h).unwrap())
                    / (2.0 * h);
            assert_relative_eq!(num, link.beta_at(z).unwrap(), max_relative = 1e-8);
        }
    }

    #[test]
    fn compensating_length_solves_for_zero_net() {
        let first = FiberLink::new(vec![FiberSegment {
            length_m: 2000.0,
            alpha_per_m: 0.0,
            kappa_ps_per_m: 1e-10,
            dispersion: DispersionProfile::DispersionIncreasing {
                beta_end_ps2_per_m: -12.75e-3,
                length_m: 2000.0,
                l_beta_m: 1000.0,
            },
        }])
        .unwrap();
        let lp = first.compensating_length_m(127.5e-3).unwrap();
        assert_relative_eq!(lp, 12.75 * 3.0_f64.ln() / 0.1275, max_relative = 1e-12);
        assert_relative_eq!(lp, 109.86, max_relative = 1e-4);
        assert!(first.compensating_length_m(-1e-3).is_err());
    }

    #[test]
    fn soliton_period_and_figure_of_merit() {
        assert_relative_eq!(
            soliton_period(-4.25e-3, 1.0).unwrap(),
            369.6,
            max_relative = 1e-3
        );
        assert!(soliton_period(0.0, 1.0).is_err());

        // End of the first fiber: τ(L) = 2|β(L)|/(κN(L)).
        let kappa = units::kappa_from_fiber(2.6e-20, 30e-12, 1550e-9).unwrap();
        let alpha = units::alpha_from_db_per_km(0.4).unwrap();
        let n0 = units::photon_number_from_energy(2.4e-12, 1550e-9).unwrap();
        let n_end = n0 * (-alpha * 2000.0).exp();
        let tau_end = 2.0 * 12.75e-3 / (kappa * n_end);
        assert_relative_eq!(tau_end, 3.64, max_relative = 1e-2);
        let period = soliton_period(-12.75e-3, tau_end).unwrap();
        assert_relative_eq!(period, 1.63e3, max_relative = 1e-2);
        let fom = figure_of_merit(alpha, -12.75e-3, tau_end).unwrap();
        assert_relative_eq!(fom, 6.7, max_relative = 1e-2);

        // 1/(αΛ) is definitionally FOM.
        assert_relative_eq!(fom * alpha * period, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn adiabaticity_scales_reported() {
        let link = reference_link();
        // |β/β'| = L_β + L - z for the increasing profile.
        let (beta_scale, loss_scale) = link.adiabaticity_scales(0.0).unwrap();
        assert_relative_eq!(beta_scale, 3000.0, max_relative = 1e-12);
        assert_relative_eq!(loss_scale, 1.0 / units::alpha_from_db_per_km(0.4).unwrap());
        let (beta_scale_end, _) = link.adiabaticity_scales(2000.0 - 1e-9).unwrap();
        assert_relative_eq!(beta_scale_end, 1000.0, max_relative = 1e-6);
        // Same order as the soliton period near z = L (0.61 Λ).
        let ratio = beta_scale_end / 1.63e3;
        assert!(ratio > 0.3 && ratio < 3.0, "ratio {ratio}");
        // Constant segment: no β variation.
        let (c, _) = link.adiabaticity_scales(2050.0).unwrap();
        assert!(c.is_infinite());
    }

    #[test]
    fn segment_validation() {
        assert!(FiberSegment {
            length_m: 0.0,
            alpha_per_m: 0.0,
            kappa_ps_per_m: 0.0,
            dispersion: DispersionProfile::Constant { beta_ps2_per_m: 0.0 },
        }
        .validate()
        .is_err());
        assert!(FiberSegment {
            length_m: 10.0,
            alpha_per_m: -1.0,
            kappa_ps_per_m: 0.0,
            dispersion: DispersionProfile::Constant { beta_ps2_per_m: 0.0 },
        }
        .validate()
        .is_err());
        assert!(FiberSegment {
            length_m: 10.0,
            alpha_per_m: 0.0,
            kappa_ps_per_m: 0.0,
            dispersion: DispersionProfile::DispersionIncreasing {
                beta_end_ps2_per_m: -1e-3,
                length_m: 10.0,
                l_beta_m: 0.0,
            },
        }
        .validate()
        .is_err());
    }

    #[test]
    fn locate_segment_boundaries() {
        let link = reference_link();
        assert_eq!(link.locate(0.0).unwrap().0, 0);
        // Boundary belongs to the downstream segment.
        let (idx, local) = link.locate(2000.0).unwrap();
        assert_eq!(idx, 1);
        assert_relative_eq!(local, 0.0);
        let (idx, local) = link.locate(2110.0).unwrap();
        assert_eq!(idx, 1);
        assert_relative_eq!(local, 110.0);
    }
}
