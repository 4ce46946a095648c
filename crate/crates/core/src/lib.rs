//! Stationary quantum tunneling times.
//!
//! The crate solves the 1D Schrödinger equation on piecewise-constant
//! barriers with an overflow-safe transfer-matrix scheme and derives the
//! standard family of tunneling times from the solution: phase (Wigner),
//! dwell, self-interference, Büttiker–Landauer, Pollak–Miller and Larmor.
//! A spherical square-well module provides partial-wave phase shifts,
//! Wigner delays and a box-quantization check of the Beth–Uhlenbeck
//! density-of-states relation, and the `junction` module extracts barrier
//! parameters and dwell times from metal–insulator–metal I-V data using the
//! Simmons model.
//!
//! Internal units are eV, Å and fs throughout; see [`units`].

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod junction;
pub mod numerics;
pub mod partialwave3d;
pub mod potential;
pub mod scattering1d;
pub mod times1d;
pub mod units;

pub use junction::{GapDataset, GapModelParams, IVDataset, JunctionModel};
pub use numerics::FitResult;
pub use partialwave3d::{DosComparison, SphericalWell};
pub use potential::{PotentialProfile, Segment};
pub use scattering1d::ScatteringSolution;
pub use times1d::TimeSuite;
