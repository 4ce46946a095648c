//! Physical constants in the crate's internal unit system (eV, Å, fs).

/// Reduced Planck constant, eV·fs.
pub const HBAR: f64 = 0.658_211_956_9;

/// Reduced Planck constant, eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// Planck constant, eV·s.
pub const PLANCK_EV_S: f64 = 4.135_667_696e-15;

/// Electron rest energy, eV.
pub const ELECTRON_REST_ENERGY: f64 = 510_998.95;

/// Speed of light, Å/fs.
pub const SPEED_OF_LIGHT: f64 = 2_997.924_58;

/// Electron mass, eV·fs²/Å².
pub const ELECTRON_MASS: f64 = ELECTRON_REST_ENERGY / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Boltzmann constant, eV/K.
pub const BOLTZMANN: f64 = 8.617_333_262e-5;

/// Femtoseconds per second.
pub const FS_PER_S: f64 = 1e15;

/// Wavenumber (Å⁻¹) of an electron with kinetic energy `kinetic` (eV).
///
/// Negative kinetic energies give the decay constant of the evanescent
/// solution, i.e. the result is always `sqrt(2m|T|)/ħ`.
pub fn wavenumber(kinetic: f64) -> f64 {
    (2.0 * ELECTRON_MASS * kinetic.abs()).sqrt() / HBAR
}

/// Group velocity ħk/m in Å/fs.
pub fn group_velocity(k: f64) -> f64 {
    HBAR * k / ELECTRON_MASS
}
