//! Metal–insulator–metal junction analysis: Simmons I-V model and fit,
//! Einstein-oscillator fit of the gap temperature dependence, and the dwell
//! time at a fraction of the barrier height.

mod gap;
mod simmons;

pub use gap::{fit_gap, gap_model, synth_gap, GapDataset, GapModelParams, GapPoint};
pub use simmons::{
    fit_iv, fit_iv_by_temperature, simmons_c2, simmons_j, synth_iv, IVDataset, IvPoint, SIMMONS_C1,
};

use crate::numerics::NumericsError;
use crate::potential::{PotentialError, PotentialProfile};
use crate::times1d::{dwell_time, TimeError};
use crate::units::FS_PER_S;

#[derive(Debug, thiserror::Error)]
pub enum JunctionError {
    #[error("bias {voltage} V is outside the intermediate-voltage regime (phi0 = {phi0} eV)")]
    Regime { voltage: f64, phi0: f64 },
    #[error("invalid junction: width {width} Å, barrier {phi0} eV")]
    InvalidModel { width: f64, phi0: f64 },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("need at least {needed} usable points, found {found}")]
    InsufficientData { found: usize, needed: usize },
    #[error("temperatures span a factor {ratio:.3}, need at least {needed}")]
    TemperatureSpan { ratio: f64, needed: f64 },
    #[error("energy fraction must lie in (0, 1), got {0}")]
    InvalidFraction(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Fit(#[from] NumericsError),
    #[error(transparent)]
    Time(#[from] TimeError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Rectangular tunnel barrier of a junction at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionModel {
    /// Barrier width, Å.
    pub width_s: f64,
    /// Barrier height, eV.
    pub barrier_phi0: f64,
    /// K.
    pub temperature: f64,
}

impl JunctionModel {
    pub fn new(width_s: f64, barrier_phi0: f64, temperature: f64) -> Result<Self, JunctionError> {
        if !(width_s > 0.0 && width_s.is_finite() && barrier_phi0 > 0.0 && barrier_phi0.is_finite()) {
            return Err(JunctionError::InvalidModel { width: width_s, phi0: barrier_phi0 });
        }
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(JunctionError::InvalidArgument(format!("temperature {temperature} K")));
        }
        Ok(Self { width_s, barrier_phi0, temperature })
    }

    pub fn profile(&self) -> Result<PotentialProfile, JunctionError> {
        Ok(PotentialProfile::rectangular(self.barrier_phi0, self.width_s)?)
    }
}

/// Dwell time in seconds at incident energy `energy_fraction · phi0`.
pub fn extract_dwell(model: &JunctionModel, energy_fraction: f64) -> Result<f64, JunctionError> {
    if !(energy_fraction > 0.0 && energy_fraction < 1.0) {
        return Err(JunctionError::InvalidFraction(energy_fraction));
    }
    let profile = model.profile()?;
    let tau = dwell_time(&profile, energy_fraction * model.barrier_phi0)?;
    Ok(tau / FS_PER_S)
}
