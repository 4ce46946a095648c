use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::{JunctionError, JunctionModel};
use crate::numerics::{fit_curve, FitOptions, FitResult, Observation};
use crate::units::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR, PLANCK_EV_S};

/// `2√(2m)/ħ` in eV^(−1/2)·Å⁻¹.
pub fn simmons_c2() -> f64 {
    2.0 * (2.0 * ELECTRON_MASS).sqrt() / HBAR
}

/// `e/(2πh)` scaled so that `C1·φ/s²` is in A/cm² for φ in eV and s in Å.
pub const SIMMONS_C1: f64 = ELEMENTARY_CHARGE / (2.0 * std::f64::consts::PI * PLANCK_EV_S) * 1e16;

/// Minimum number of points per temperature group for a fit.
pub const MIN_IV_POINTS: usize = 10;

/// Simmons current density (A/cm²) through a rectangular barrier in the
/// intermediate-voltage regime `|V| < φ0`. Odd in `V`.
pub fn simmons_j(voltage: f64, width: f64, phi0: f64) -> Result<f64, JunctionError> {
    if !(width > 0.0 && phi0 > 0.0) || !width.is_finite() || !phi0.is_finite() {
        return Err(JunctionError::InvalidModel { width, phi0 });
    }
    if !voltage.is_finite() || voltage.abs() >= phi0 {
        return Err(JunctionError::Regime { voltage, phi0 });
    }
    if voltage < 0.0 {
        return Ok(-simmons_j(-voltage, width, phi0)?);
    }
    let mean = phi0 - voltage / 2.0;
    let upper = mean + voltage;
    let a = simmons_c2() * width;
    let forward = mean * (-a * mean.sqrt()).exp();
    let backward = upper * (-a * upper.sqrt()).exp();
    Ok(SIMMONS_C1 / (width * width) * (forward - backward))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvPoint {
    /// V.
    pub voltage: f64,
    /// A/cm².
    pub current_density: f64,
    /// K.
    pub temperature: f64,
}

/// Current-voltage measurements, possibly at several temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct IVDataset {
    points: Vec<IvPoint>,
    source_label: String,
}

impl IVDataset {
    /// Checks finiteness and that voltages increase strictly within each
    /// temperature group.
    pub fn new(points: Vec<IvPoint>, source_label: impl Into<String>) -> Result<Self, JunctionError> {
        for (i, p) in points.iter().enumerate() {
            if !p.voltage.is_finite() || !p.current_density.is_finite() || !p.temperature.is_finite() {
                return Err(JunctionError::InvalidDataset(format!("point {i} is not finite")));
            }
            if p.temperature < 0.0 {
                return Err(JunctionError::InvalidDataset(format!("point {i} has negative temperature")));
            }
        }
        let data = Self { points, source_label: source_label.into() };
        for (t, group) in data.temperature_groups() {
            if group.windows(2).any(|w| w[1].voltage <= w[0].voltage) {
                return Err(JunctionError::InvalidDataset(format!(
                    "voltages at {t} K are not strictly increasing"
                )));
            }
        }
        Ok(data)
    }

    pub fn points(&self) -> &[IvPoint] {
        &self.points
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    /// Points grouped by temperature, groups in ascending temperature,
    /// points in their original order.
    pub fn temperature_groups(&self) -> Vec<(f64, Vec<IvPoint>)> {
        let mut temps: Vec<f64> = self.points.iter().map(|p| p.temperature).collect();
        temps.sort_by(f64::total_cmp);
        temps.dedup();
        temps
            .into_iter()
            .map(|t| (t, self.points.iter().filter(|p| p.temperature == t).copied().collect()))
            .collect()
    }
}

/// Model currents with multiplicative Gaussian noise of relative size
/// `noise_rel`, reproducible from `seed`.
pub fn synth_iv(
    model: &JunctionModel,
    voltages: &[f64],
    noise_rel: f64,
    seed: u64,
) -> Result<IVDataset, JunctionError> {
    if !(noise_rel >= 0.0 && noise_rel.is_finite()) {
        return Err(JunctionError::InvalidArgument(format!("noise {noise_rel}")));
    }
    let normal = Normal::new(0.0, noise_rel).map_err(|e| JunctionError::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = voltages
        .iter()
        .map(|&v| {
            let j = simmons_j(v, model.width_s, model.barrier_phi0)?;
            let factor = 1.0 + normal.sample(&mut rng);
            Ok(IvPoint { voltage: v, current_density: j * factor, temperature: model.temperature })
        })
        .collect::<Result<Vec<_>, JunctionError>>()?;
    IVDataset::new(points, format!("synthetic seed={seed} noise={noise_rel}"))
}

fn fit_group(
    points: &[IvPoint],
    temperature: f64,
    initial: &JunctionModel,
) -> Result<(JunctionModel, FitResult), JunctionError> {
    // zero-current points carry no relative information
    let data: Vec<Observation> = points
        .iter()
        .filter(|p| p.current_density != 0.0)
        .map(|p| Observation::relative(p.voltage, p.current_density))
        .collect();
    if data.len() < MIN_IV_POINTS {
        return Err(JunctionError::InsufficientData { found: data.len(), needed: MIN_IV_POINTS });
    }
    let model = |p: &[f64], v: f64| simmons_j(v, p[0], p[1]).unwrap_or(f64::NAN);
    let fit = fit_curve(model, &[initial.width_s, initial.barrier_phi0], &data, &FitOptions::default())?;
    let fitted = JunctionModel::new(fit.params[0], fit.params[1], temperature)?;
    Ok((fitted, fit))
}

/// Fits `(s, φ0)` to a single-temperature dataset with relative residuals.
pub fn fit_iv(
    data: &IVDataset,
    initial: &JunctionModel,
) -> Result<(JunctionModel, FitResult), JunctionError> {
    let groups = data.temperature_groups();
    match groups.as_slice() {
        [(t, points)] => fit_group(points, *t, initial),
        [] => Err(JunctionError::InsufficientData { found: 0, needed: MIN_IV_POINTS }),
        _ => Err(JunctionError::InvalidDataset(format!(
            "{} temperature groups; fit them separately",
            groups.len()
        ))),
    }
}

/// Independent `(s, φ0)` fits for every temperature group, ascending in
/// temperature.
pub fn fit_iv_by_temperature(
    data: &IVDataset,
    initial: &JunctionModel,
) -> Result<Vec<(JunctionModel, FitResult)>, JunctionError> {
    data.temperature_groups().par_iter().map(|(t, points)| fit_group(points, *t, initial)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::wavenumber;

    fn voltages(n: usize) -> Vec<f64> {
        (1..=n).map(|i| i as f64 / n as f64).collect()
    }

    #[test]
    fn constants() {
        // C2 = 2κ/√φ
        assert!((simmons_c2() - 2.0 * wavenumber(1.0)).abs() < 1e-12);
        assert!((simmons_c2() - 1.025).abs() < 1e-3);
        assert!((SIMMONS_C1 / 6.166e10 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn regression_pin() {
        let j = simmons_j(0.5, 20.8, 1.8).unwrap();
        assert!((j / 6.455_000_953_531e-4 - 1.0).abs() < 1e-11, "{j:.12e}");
    }

    #[test]
    fn ohmic_and_odd() {
        let g1 = simmons_j(1e-3, 20.8, 1.8).unwrap() / 1e-3;
        let g2 = simmons_j(2e-3, 20.8, 1.8).unwrap() / 2e-3;
        assert!(g1 > 0.0 && ((g1 - g2) / g1).abs() < 5e-3);
        for v in [0.1, 0.7, 1.5] {
            assert_eq!(simmons_j(-v, 20.8, 1.8).unwrap(), -simmons_j(v, 20.8, 1.8).unwrap());
        }
        assert_eq!(simmons_j(0.0, 20.8, 1.8).unwrap(), 0.0);
    }

    #[test]
    fn regime_errors() {
        assert!(matches!(simmons_j(1.8, 20.8, 1.8), Err(JunctionError::Regime { .. })));
        assert!(matches!(simmons_j(-2.0, 20.8, 1.8), Err(JunctionError::Regime { .. })));
        let m = JunctionModel::new(20.8, 1.0, 300.0).unwrap();
        assert!(synth_iv(&m, &[0.5, 1.2], 0.0, 1).is_err());
    }

    #[test]
    fn synthetic_data_is_deterministic() {
        let m = JunctionModel::new(20.8, 1.799, 300.0).unwrap();
        let v = voltages(20);
        let exact = synth_iv(&m, &v, 0.0, 3).unwrap();
        for p in exact.points() {
            assert_eq!(p.current_density, simmons_j(p.voltage, 20.8, 1.799).unwrap());
        }
        assert_eq!(synth_iv(&m, &v, 0.01, 9).unwrap(), synth_iv(&m, &v, 0.01, 9).unwrap());
        assert_ne!(synth_iv(&m, &v, 0.01, 9).unwrap(), synth_iv(&m, &v, 0.01, 10).unwrap());
    }

    #[test]
    fn dataset_validation() {
        let p = |v: f64, t: f64| IvPoint { voltage: v, current_density: 1.0, temperature: t };
        assert!(IVDataset::new(vec![p(0.2, 300.0), p(0.1, 300.0)], "x").is_err());
        assert!(IVDataset::new(vec![p(0.2, 300.0), p(0.1, 4.0)], "x").is_ok());
        assert!(IVDataset::new(vec![p(f64::NAN, 300.0)], "x").is_err());
        let d = IVDataset::new(vec![p(0.2, 300.0), p(0.1, 4.0), p(0.3, 300.0)], "x").unwrap();
        let groups = d.temperature_groups();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].0, 4.0);
        assert_eq!(groups[1].1.len(), 2);
    }

    #[test]
    fn noiseless_fit_is_exact() {
        let truth = JunctionModel::new(20.8, 1.799, 300.0).unwrap();
        let data = synth_iv(&truth, &voltages(50), 0.0, 0).unwrap();
        let start = JunctionModel::new(16.0, 2.2, 300.0).unwrap();
        let (fit, result) = fit_iv(&data, &start).unwrap();
        assert!(result.converged);
        assert!((fit.width_s - 20.8).abs() < 1e-6);
        assert!((fit.barrier_phi0 - 1.799).abs() < 1e-6);
        assert!(result.residual_norm < 1e-8);
    }

    #[test]
    fn too_few_points() {
        let truth = JunctionModel::new(20.8, 1.799, 300.0).unwrap();
        let data = synth_iv(&truth, &voltages(9), 0.0, 0).unwrap();
        assert!(matches!(fit_iv(&data, &truth), Err(JunctionError::InsufficientData { found: 9, .. })));
    }
}
