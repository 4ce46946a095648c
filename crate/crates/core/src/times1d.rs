//! Tunneling times for 1D barriers with equal asymptotic levels.
//!
//! All times are returned in femtoseconds. Energy and barrier-height
//! derivatives use the Richardson central difference from
//! [`crate::numerics`] with steps `1e-4·max(E, 0.1 eV)` and
//! `1e-4·max(V₀, 0.1 eV)` respectively, `V₀` being the largest |height|.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{try_derivative_refined, NumericsError};
use crate::potential::PotentialProfile;
use crate::scattering1d::{density_integral, incident_flux, solve, ScatteringError, ScatteringSolution};
use crate::units::{ELECTRON_MASS, HBAR};

#[derive(Debug, Error)]
pub enum TimeError {
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("transmission phase jumps by {jump:.3} rad within the derivative stencil at {energy} eV")]
    PhaseUnwrap { energy: f64, jump: f64 },
    #[error("asymptotic levels differ ({left} vs {right} eV); this time needs equal levels")]
    UnequalLevels { left: f64, right: f64 },
    #[error("phase–dwell identity violated at {energy} eV: residual {residual:e} fs")]
    IdentityViolation { energy: f64, residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Relative tolerance of the phase = dwell + interference identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-5;

/// All tunneling times at one energy, in fs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSuite {
    pub energy: f64,
    pub tau_phase: f64,
    pub tau_dwell: f64,
    pub tau_interference: f64,
    pub tau_bl: f64,
    pub tau_pm: f64,
    pub tau_larmor_y: f64,
}

impl TimeSuite {
    /// `|τ_φ − τ_D − τ_i|`.
    pub fn identity_residual(&self) -> f64 {
        (self.tau_phase - self.tau_dwell - self.tau_interference).abs()
    }

    /// Residual relative to `max(|τ_φ|, 0.01 fs)`.
    pub fn identity_relative_residual(&self) -> f64 {
        self.identity_residual() / self.tau_phase.abs().max(0.01)
    }
}

fn energy_step(energy: f64) -> f64 {
    1e-4 * energy.max(0.1)
}

fn height_step(profile: &PotentialProfile) -> f64 {
    let v0 = profile.segments().iter().map(|s| s.height.abs()).fold(0.0, f64::max);
    1e-4 * v0.max(0.1)
}

/// Agreement required between successive derivative estimates.
const DERIVATIVE_TOLERANCE: f64 = 1e-10;

/// Absolute agreement (rad/eV or 1/eV) accepted for slopes near zero.
const DERIVATIVE_FLOOR: f64 = 1e-10;

/// Refined derivative; a phase jump inside the stencil shrinks the starting
/// step instead of failing while the step is still resolvable.
fn refined<F>(f: F, x: f64, step: f64) -> Result<f64, TimeError>
where
    F: Fn(f64) -> Result<f64, TimeError>,
{
    let mut h = step;
    loop {
        match try_derivative_refined(&f, x, h, DERIVATIVE_TOLERANCE, DERIVATIVE_FLOOR) {
            Err(TimeError::PhaseUnwrap { .. }) if h > 1e-6 * step => h /= 8.0,
            other => return other,
        }
    }
}

fn require_equal_levels(profile: &PotentialProfile) -> Result<(), TimeError> {
    if profile.left_level() != profile.right_level() {
        return Err(TimeError::UnequalLevels { left: profile.left_level(), right: profile.right_level() });
    }
    Ok(())
}

/// Phase of `t(x)` relative to `reference`, required to stay well inside
/// (−π, π] so the principal value is the unwrapped difference.
fn relative_phase(t: Complex64, reference: Complex64, energy: f64) -> Result<f64, TimeError> {
    let jump = (t * reference.conj()).arg();
    if jump.abs() > 0.5 * std::f64::consts::PI {
        return Err(TimeError::PhaseUnwrap { energy, jump });
    }
    Ok(jump)
}

/// `τ_D = ∫|Ψ|²dx / j` over the barrier region.
pub fn dwell_time(profile: &PotentialProfile, energy: f64) -> Result<f64, TimeError> {
    let sol = solve(profile, energy)?;
    Ok(dwell_from_solution(&sol, profile)?)
}

fn dwell_from_solution(sol: &ScatteringSolution, profile: &PotentialProfile) -> Result<f64, ScatteringError> {
    Ok(density_integral(sol, profile)? / incident_flux(sol))
}

/// Wigner phase time `ħ·d(arg t)/dE`.
pub fn phase_time(profile: &PotentialProfile, energy: f64) -> Result<f64, TimeError> {
    let reference = solve(profile, energy)?.t;
    let slope =
        refined(|e| relative_phase(solve(profile, e)?.t, reference, energy), energy, energy_step(energy))?;
    Ok(HBAR * slope)
}

/// Self-interference term `−ħ (Im r / k) dk/dE = −m Im r / (ħ k²)`.
pub fn self_interference_time(profile: &PotentialProfile, energy: f64) -> Result<f64, TimeError> {
    require_equal_levels(profile)?;
    let sol = solve(profile, energy)?;
    Ok(interference_from_solution(&sol))
}

fn interference_from_solution(sol: &ScatteringSolution) -> f64 {
    let k = sol.k_left;
    -ELECTRON_MASS * sol.r.im / (HBAR * k * k)
}

/// Büttiker–Landauer time `−ħ ∂ln|t|/∂V`, the derivative taken with respect
/// to a uniform shift of every segment.
pub fn buettiker_landauer_time(profile: &PotentialProfile, energy: f64) -> Result<f64, TimeError> {
    let slope = refined(
        |dv| Ok(solve(&profile.shift_barrier(dv), energy)?.t.norm().ln()),
        0.0,
        height_step(profile),
    )?;
    Ok(-HBAR * slope)
}

/// Pollak–Miller time `ħ ∂ln|t|/∂E`.
pub fn pollak_miller_time(profile: &PotentialProfile, energy: f64) -> Result<f64, TimeError> {
    let slope = refined(|e| Ok(solve(profile, e)?.t.norm().ln()), energy, energy_step(energy))?;
    Ok(HBAR * slope)
}

/// Larmor precession time `τ_y = −ħ ∂(arg t)/∂V`.
pub fn larmor_time_y(profile: &PotentialProfile, energy: f64) -> Result<f64, TimeError> {
    let reference = solve(profile, energy)?.t;
    let slope = refined(
        |dv| relative_phase(solve(&profile.shift_barrier(dv), energy)?.t, reference, energy),
        0.0,
        height_step(profile),
    )?;
    Ok(-HBAR * slope)
}

/// Every time at one energy.
///
/// In debug builds a mirror-symmetric profile is additionally checked
/// against the phase–dwell identity.
pub fn time_suite(profile: &PotentialProfile, energy: f64) -> Result<TimeSuite, TimeError> {
    require_equal_levels(profile)?;
    let sol = solve(profile, energy)?;
    let suite = TimeSuite {
        energy,
        tau_phase: phase_time(profile, energy)?,
        tau_dwell: dwell_from_solution(&sol, profile)?,
        tau_interference: interference_from_solution(&sol),
        tau_bl: buettiker_landauer_time(profile, energy)?,
        tau_pm: pollak_miller_time(profile, energy)?,
        tau_larmor_y: larmor_time_y(profile, energy)?,
    };
    if cfg!(debug_assertions)
        && profile.is_symmetric()
        && suite.identity_relative_residual() > IDENTITY_TOLERANCE
    {
        return Err(TimeError::IdentityViolation { energy, residual: suite.identity_residual() });
    }
    Ok(suite)
}

/// [`time_suite`] over a grid of energies, evaluated in parallel; the output
/// order follows `energies`.
pub fn time_sweep(profile: &PotentialProfile, energies: &[f64]) -> Result<Vec<TimeSuite>, TimeError> {
    energies.par_iter().map(|&e| time_suite(profile, e)).collect()
}

/// One row of a width sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HartmanRow {
    pub width: f64,
    pub tau_phase: f64,
    pub tau_dwell: f64,
}

/// Phase and dwell time of a rectangular barrier of height `v0` at energy
/// `energy` for each width; shows saturation of the phase time once
/// `κ·width ≫ 1`.
pub fn hartman_sweep(v0: f64, energy: f64, widths: &[f64]) -> Result<Vec<HartmanRow>, TimeError> {
    if !(energy > 0.0 && energy < v0) {
        return Err(TimeError::InvalidArgument(format!("need 0 < E < V0, got E = {energy}, V0 = {v0}")));
    }
    widths
        .iter()
        .map(|&width| {
            let p = PotentialProfile::rectangular(v0, width)
                .map_err(|e| TimeError::InvalidArgument(e.to_string()))?;
            Ok(HartmanRow { width, tau_phase: phase_time(&p, energy)?, tau_dwell: dwell_time(&p, energy)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Segment;
    use crate::units::wavenumber;

    fn crossing_time(length: f64, energy: f64) -> f64 {
        ELECTRON_MASS * length / (HBAR * wavenumber(energy))
    }

    #[test]
    fn free_region_times() {
        let p = PotentialProfile::rectangular(0.0, 10.0).unwrap();
        let s = time_suite(&p, 1.0).unwrap();
        let free = crossing_time(10.0, 1.0);
        assert!((s.tau_dwell / free - 1.0).abs() < 1e-12);
        assert!((s.tau_phase / free - 1.0).abs() < 1e-8);
        assert!((s.tau_larmor_y / free - 1.0).abs() < 1e-8);
        assert!(s.tau_interference.abs() < 1e-14);
        assert!(s.tau_pm.abs() < 1e-10);
    }

    #[test]
    fn unequal_levels_rejected() {
        let p = PotentialProfile::new(vec![Segment { width: 2.0, height: 1.0 }], 0.0, 0.2, 0.0).unwrap();
        assert!(matches!(self_interference_time(&p, 0.5), Err(TimeError::UnequalLevels { .. })));
        assert!(matches!(time_suite(&p, 0.5), Err(TimeError::UnequalLevels { .. })));
        assert!(dwell_time(&p, 0.5).is_ok());
    }

    #[test]
    fn closed_channel_propagates() {
        let p = PotentialProfile::rectangular(1.0, 2.0).unwrap();
        assert!(matches!(
            dwell_time(&p, -1.0),
            Err(TimeError::Scattering(ScatteringError::ClosedChannel { .. }))
        ));
    }

    #[test]
    fn hartman_rejects_energy_above_barrier() {
        assert!(hartman_sweep(1.0, 1.5, &[5.0]).is_err());
        assert!(hartman_sweep(1.0, 0.0, &[5.0]).is_err());
    }

    #[test]
    fn sweep_keeps_order() {
        let p = PotentialProfile::rectangular(1.8, 20.8).unwrap();
        let energies: Vec<f64> = (1..=16).map(|i| 0.1 * i as f64).collect();
        let sweep = time_sweep(&p, &energies).unwrap();
        for (s, e) in sweep.iter().zip(&energies) {
            assert_eq!(s.energy, *e);
        }
    }
}
