//! Partial-wave scattering from a spherical square well or barrier: phase
//! shifts, Wigner delay, the single-channel Smith lifetime and a
//! box-quantization check of the Beth–Uhlenbeck density-of-states relation.

pub mod bessel;

use std::f64::consts::PI;

use crate::numerics::{self, find_root, NumericsError};
use crate::units::{wavenumber, HBAR};
use bessel::{derivatives, scaled_spherical_i, spherical_j, spherical_y};

/// Highest angular momentum accepted by default.
pub const L_CAP: usize = 25;

/// Minimum ratio of box radius to well radius in the level-counting check.
pub const MIN_BOX_RATIO: f64 = 20.0;

/// Minimum number of free states (counting the 2l+1 degeneracy) inside the
/// counting window.
pub const MIN_FREE_STATES: usize = 30;

/// Closest approach of `E` to the well strength before the interior
/// wavenumber is treated as degenerate.
const DEGENERACY: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum PartialWaveError {
    #[error("invalid well: strength {strength} eV, radius {radius} Å")]
    InvalidWell { strength: f64, radius: f64 },
    #[error("energy must be positive and finite, got {0} eV")]
    NonPositiveEnergy(f64),
    #[error("energy {energy} eV coincides with the well strength; perturb it")]
    Degenerate { energy: f64 },
    #[error("angular momentum {l} exceeds the cap {cap}")]
    LCap { l: usize, cap: usize },
    #[error("box radius {box_radius} Å is below {min} Å")]
    BoxTooSmall { box_radius: f64, min: f64 },
    #[error("counting window holds {found} free states, need at least {needed}")]
    InsufficientLevels { found: usize, needed: usize },
    #[error("invalid energy window {0} eV")]
    InvalidWindow(f64),
    #[error("phase shift jumped by {jump} rad near {energy} eV")]
    PhaseUnwrap { energy: f64, jump: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Spherical square well of depth `strength` (negative attracts) and the
/// given radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalWell {
    strength: f64,
    radius: f64,
}

impl SphericalWell {
    pub fn new(strength: f64, radius: f64) -> Result<Self, PartialWaveError> {
        if !strength.is_finite() || !radius.is_finite() || radius <= 0.0 {
            return Err(PartialWaveError::InvalidWell { strength, radius });
        }
        Ok(Self { strength, radius })
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn scaled(&self, lambda: f64) -> Self {
        Self { strength: self.strength * lambda, radius: self.radius }
    }
}

/// Both sides of the Beth–Uhlenbeck relation at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosComparison {
    pub energy: f64,
    /// `Σ (2l+1)/π dδ_l/dE`, states/eV.
    pub smooth_side: f64,
    /// Box-level count difference per unit energy, states/eV.
    pub counted_side: f64,
    pub box_radius: f64,
    pub l_max: usize,
}

impl DosComparison {
    pub fn relative_gap(&self) -> f64 {
        let diff = (self.smooth_side - self.counted_side).abs();
        if diff == 0.0 {
            0.0
        } else if self.smooth_side == 0.0 {
            f64::INFINITY
        } else {
            diff / self.smooth_side.abs()
        }
    }
}

fn check_energy(energy: f64) -> Result<(), PartialWaveError> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(PartialWaveError::NonPositiveEnergy(energy));
    }
    Ok(())
}

fn check_l(l: usize) -> Result<(), PartialWaveError> {
    if l > L_CAP {
        return Err(PartialWaveError::LCap { l, cap: L_CAP });
    }
    Ok(())
}

/// Numerator and denominator of `tan δ_l` from matching at the well edge.
fn matching(w: &SphericalWell, l: usize, energy: f64) -> Result<(f64, f64), PartialWaveError> {
    let a = w.radius;
    let k = wavenumber(energy);
    let inside = energy - w.strength;
    if inside.abs() < DEGENERACY * energy.max(1.0) && w.strength != 0.0 {
        return Err(PartialWaveError::Degenerate { energy });
    }
    let (g, dg) = if w.strength == 0.0 || inside > 0.0 {
        let q = wavenumber(inside);
        let j = spherical_j(l + 1, q * a);
        let dj = derivatives(&j, q * a, false);
        (j[l], q * dj[l])
    } else {
        let kappa = wavenumber(inside);
        let i = scaled_spherical_i(l + 1, kappa * a);
        let di = derivatives(&i, kappa * a, true);
        (i[l], kappa * di[l])
    };
    let x = k * a;
    let j = spherical_j(l + 1, x);
    let y = spherical_y(l + 1, x);
    let dj = derivatives(&j, x, false);
    let dy = derivatives(&y, x, false);
    let num = k * dj[l] * g - dg * j[l];
    let den = k * dy[l] * g - dg * y[l];
    Ok((num, den))
}

/// Phase shift reduced to `(−π/2, π/2]`.
fn principal_shift(w: &SphericalWell, l: usize, energy: f64) -> Result<f64, PartialWaveError> {
    let (num, den) = matching(w, l, energy)?;
    if den == 0.0 {
        return Ok(PI / 2.0);
    }
    Ok((num / den).atan())
}

fn wrap_half_pi(x: f64) -> f64 {
    x - PI * (x / PI).round()
}

/// Phase shift `δ_l(E)` in radians.
///
/// The branch is fixed by switching the interaction on gradually at fixed
/// energy, starting from `δ = 0` for the free particle. This is the same
/// branch that follows continuously in `E` down from `δ(∞) = 0`.
pub fn phase_shift(w: &SphericalWell, l: usize, energy: f64) -> Result<f64, PartialWaveError> {
    check_energy(energy)?;
    check_l(l)?;
    if w.strength == 0.0 {
        return Ok(0.0);
    }
    // keep the degeneracy error for the requested well itself
    let target = principal_shift(w, l, energy)?;
    let mut lambda = 0.0;
    let mut previous = 0.0;
    let mut delta = 0.0;
    let mut step: f64 = 1.0 / 32.0;
    while lambda < 1.0 {
        let mut next = (lambda + step).min(1.0);
        if (next * w.strength - energy).abs() < 1e-9 * energy.max(1.0) && next < 1.0 {
            next += 1e-7;
        }
        let value = if next >= 1.0 { target } else { principal_shift(&w.scaled(next), l, energy)? };
        let jump = wrap_half_pi(value - previous);
        if jump.abs() > 0.25 && step > 1e-12 {
            step /= 2.0;
            continue;
        }
        delta += jump;
        previous = value;
        lambda = next;
        if jump.abs() < 0.05 {
            step = (step * 2.0).min(0.25);
        }
    }
    Ok(delta)
}

/// `dδ_l/dE` in rad/eV, differentiated on the principal branch with the
/// jump across `±π/2` removed relative to the centre value.
fn phase_slope(w: &SphericalWell, l: usize, energy: f64) -> Result<f64, PartialWaveError> {
    check_energy(energy)?;
    check_l(l)?;
    if w.strength == 0.0 {
        return Ok(0.0);
    }
    let centre = principal_shift(w, l, energy)?;
    let start = (1e-4 * energy.max(0.1)).min(0.5 * energy);
    let shifted = |e: f64| -> Result<f64, PartialWaveError> {
        let jump = wrap_half_pi(principal_shift(w, l, e)? - centre);
        if jump.abs() > PI / 4.0 {
            return Err(PartialWaveError::PhaseUnwrap { energy: e, jump });
        }
        Ok(jump)
    };
    let mut step = start;
    loop {
        match numerics::try_derivative_refined(shifted, energy, step, 1e-10, 1e-10) {
            Err(PartialWaveError::PhaseUnwrap { .. }) if step > 1e-6 * start => step /= 8.0,
            other => return other,
        }
    }
}

/// Wigner delay `ħ dδ_l/dE` in fs.
pub fn wigner_delay(w: &SphericalWell, l: usize, energy: f64) -> Result<f64, PartialWaveError> {
    Ok(HBAR * phase_slope(w, l, energy)?)
}

/// Single-channel Smith lifetime `2ħ dδ₀/dE` in fs.
pub fn smith_lifetime(w: &SphericalWell, energy: f64) -> Result<f64, PartialWaveError> {
    Ok(2.0 * wigner_delay(w, 0, energy)?)
}

/// Hard-wall node condition at `R` for the exterior solution, normalised so
/// its magnitude stays of order `j_l`.
fn node_condition(w: &SphericalWell, l: usize, k: f64, box_radius: f64) -> Result<f64, PartialWaveError> {
    let energy = HBAR * HBAR * k * k / (2.0 * crate::units::ELECTRON_MASS);
    let (num, den) = matching(w, l, energy)?;
    let x = k * box_radius;
    let j = spherical_j(l, x);
    let y = spherical_y(l, x);
    Ok((den * j[l] - num * y[l]) / num.hypot(den))
}

/// Zeros of `f` on `[lo, hi]`, scanning with the given step.
fn zeros<F>(f: F, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, PartialWaveError>
where
    F: Fn(f64) -> Result<f64, PartialWaveError>,
{
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = f(a)?;
    while a < hi {
        let b = (a + step).min(hi);
        let fb = f(b)?;
        if fa == 0.0 {
            out.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let failure = std::cell::RefCell::new(None);
            let root = find_root(
                |k| match f(k) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                },
                a,
                b,
                1e-15,
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            out.push(root?);
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

/// Counting function interpolated linearly between consecutive levels.
fn counting(levels: &[f64], k: f64) -> Option<f64> {
    let i = levels.partition_point(|&z| z <= k);
    if i == 0 || i == levels.len() {
        return None;
    }
    let (z0, z1) = (levels[i - 1], levels[i]);
    Some(i as f64 + (k - z0) / (z1 - z0))
}

/// Free states per window used by [`counting_window`].
pub const DEFAULT_WINDOW_STATES: f64 = 64.0;

/// Energy window around `energy` that holds about `states` free box states
/// with `l ≤ l_max`. Shrinks as `1/R`, so the counted side approaches the
/// derivative as the box grows.
pub fn counting_window(energy: f64, box_radius: f64, l_max: usize, states: f64) -> f64 {
    let k = wavenumber(energy);
    // dN/dE per channel = R m / (π ħ² k)
    let per_channel = box_radius * crate::units::ELECTRON_MASS / (PI * HBAR * HBAR * k);
    let channels = ((l_max + 1) * (l_max + 1)) as f64;
    states / (per_channel * channels)
}

/// Compares `Σ (2l+1)/π dδ_l/dE` with the change in the number of hard-wall
/// box levels caused by the well, counted over `[E − dE/2, E + dE/2]`.
pub fn beth_uhlenbeck_check(
    w: &SphericalWell,
    energy: f64,
    window: f64,
    box_radius: f64,
    l_max: usize,
) -> Result<DosComparison, PartialWaveError> {
    check_energy(energy)?;
    check_l(l_max)?;
    let min = MIN_BOX_RATIO * w.radius;
    if !(box_radius >= min) || !box_radius.is_finite() {
        return Err(PartialWaveError::BoxTooSmall { box_radius, min });
    }
    if !(window > 0.0 && window < 2.0 * energy) {
        return Err(PartialWaveError::InvalidWindow(window));
    }
    let e_lo = energy - window / 2.0;
    let e_hi = energy + window / 2.0;
    let (k_lo, k_hi) = (wavenumber(e_lo), wavenumber(e_hi));
    let spacing = PI / box_radius;
    let scan_lo = (k_lo - 3.0 * spacing).max(0.25 * spacing);
    let scan_hi = k_hi + 3.0 * spacing;
    let step = spacing / 16.0;

    let mut smooth = 0.0;
    let mut counted = 0.0;
    let mut free_states = 0;
    for l in 0..=l_max {
        let degeneracy = (2 * l + 1) as f64;
        smooth += degeneracy / PI * phase_slope(w, l, energy)?;

        let free = zeros(|k| Ok(spherical_j(l, k * box_radius)[l]), scan_lo, scan_hi, step)?;
        let bound = zeros(|k| node_condition(w, l, k, box_radius), scan_lo, scan_hi, step)?;
        free_states += (2 * l + 1) * free.iter().filter(|&&k| k > k_lo && k < k_hi).count();
        let span = |levels: &[f64]| -> Result<f64, PartialWaveError> {
            match (counting(levels, k_hi), counting(levels, k_lo)) {
                (Some(hi), Some(lo)) => Ok(hi - lo),
                _ => Err(PartialWaveError::InsufficientLevels { found: levels.len(), needed: 2 }),
            }
        };
        counted += degeneracy * (span(&bound)? - span(&free)?);
    }
    if free_states < MIN_FREE_STATES {
        return Err(PartialWaveError::InsufficientLevels { found: free_states, needed: MIN_FREE_STATES });
    }
    Ok(DosComparison { energy, smooth_side: smooth, counted_side: counted / window, box_radius, l_max })
}
