//! Shared fixtures for the criterion benchmarks.

use tunnel_chrono::PotentialProfile;

/// The fitted Al/Al₂O₃/Al junction barrier: 1.8 eV high, 20.8 Å wide.
pub fn junction_barrier() -> PotentialProfile {
    PotentialProfile::rectangular(1.8, 20.8).expect("valid barrier")
}

/// A smooth Gaussian bump sampled on `n` segments.
pub fn gaussian_bump(n: usize) -> PotentialProfile {
    PotentialProfile::discretize(|x| 1.5 * (-(x / 6.0).powi(2)).exp(), -20.0, 20.0, n).expect("valid bump")
}
