use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::JunctionError;
use crate::numerics::{fit_curve, FitOptions, FitResult, Observation};
use crate::units::{BOLTZMANN, HBAR_EV_S};

/// Minimum number of gap points for a fit.
pub const MIN_GAP_POINTS: usize = 5;

/// Minimum ratio of highest to lowest temperature in a gap fit.
pub const MIN_TEMPERATURE_SPAN: f64 = 5.0;

// frequencies are fitted in units of 1e13 s⁻¹ to keep the parameters O(1)
const OMEGA_UNIT: f64 = 1e13;

/// Einstein-oscillator parameters of the gap temperature dependence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapModelParams {
    /// Gap at zero temperature, eV.
    pub gap0: f64,
    /// Dimensionless electron-phonon coupling.
    pub coupling_s: f64,
    /// Average phonon angular frequency, s⁻¹.
    pub omega: f64,
}

impl GapModelParams {
    pub fn new(gap0: f64, coupling_s: f64, omega: f64) -> Result<Self, JunctionError> {
        if !gap0.is_finite()
            || !(coupling_s >= 0.0)
            || !coupling_s.is_finite()
            || !(omega > 0.0)
            || !omega.is_finite()
        {
            return Err(JunctionError::InvalidArgument(format!(
                "gap parameters gap0={gap0} S={coupling_s} omega={omega}"
            )));
        }
        Ok(Self { gap0, coupling_s, omega })
    }

    /// Phonon energy ħω in eV.
    pub fn phonon_energy(&self) -> f64 {
        HBAR_EV_S * self.omega
    }
}

/// `E_g(T) = gap0 − S ħω [coth(ħω / 2k_BT) − 1]`.
pub fn gap_model(temperature: f64, p: &GapModelParams) -> f64 {
    let phonon = p.phonon_energy();
    let x = phonon / (2.0 * BOLTZMANN * temperature);
    // coth x − 1 = 2 / (e^{2x} − 1)
    p.gap0 - p.coupling_s * phonon * 2.0 / (2.0 * x).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    /// K.
    pub temperature: f64,
    /// eV.
    pub gap: f64,
}

/// Gap measurements at strictly increasing positive temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDataset {
    points: Vec<GapPoint>,
}

impl GapDataset {
    pub fn new(points: Vec<GapPoint>) -> Result<Self, JunctionError> {
        for (i, p) in points.iter().enumerate() {
            if !(p.temperature > 0.0 && p.temperature.is_finite()) || !p.gap.is_finite() {
                return Err(JunctionError::InvalidDataset(format!("gap point {i} is invalid")));
            }
        }
        if points.windows(2).any(|w| w[1].temperature <= w[0].temperature) {
            return Err(JunctionError::InvalidDataset("temperatures are not strictly increasing".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[GapPoint] {
        &self.points
    }
}

/// Model gaps with multiplicative Gaussian noise, reproducible from `seed`.
pub fn synth_gap(
    params: &GapModelParams,
    temperatures: &[f64],
    noise_rel: f64,
    seed: u64,
) -> Result<GapDataset, JunctionError> {
    let normal = Normal::new(0.0, noise_rel).map_err(|e| JunctionError::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = temperatures
        .iter()
        .map(|&t| GapPoint { temperature: t, gap: gap_model(t, params) * (1.0 + normal.sample(&mut rng)) })
        .collect();
    GapDataset::new(points)
}

/// Least-squares fit of `(gap0, S, ω)` with relative residuals.
///
/// The returned covariance refers to the internal parameters
/// `(gap0, S, ω / 1e13)`.
pub fn fit_gap(
    data: &GapDataset,
    initial: &GapModelParams,
) -> Result<(GapModelParams, FitResult), JunctionError> {
    let points = data.points();
    if points.len() < MIN_GAP_POINTS {
        return Err(JunctionError::InsufficientData { found: points.len(), needed: MIN_GAP_POINTS });
    }
    let ratio = points[points.len() - 1].temperature / points[0].temperature;
    if ratio < MIN_TEMPERATURE_SPAN {
        return Err(JunctionError::TemperatureSpan { ratio, needed: MIN_TEMPERATURE_SPAN });
    }
    if points.iter().any(|p| p.gap == 0.0) {
        return Err(JunctionError::InvalidDataset("zero gap cannot be weighted relatively".into()));
    }
    let obs: Vec<Observation> = points.iter().map(|p| Observation::relative(p.temperature, p.gap)).collect();
    let model = |q: &[f64], t: f64| {
        if q[2] <= 0.0 {
            return f64::NAN;
        }
        gap_model(t, &GapModelParams { gap0: q[0], coupling_s: q[1], omega: q[2] * OMEGA_UNIT })
    };
    let start = [initial.gap0, initial.coupling_s, initial.omega / OMEGA_UNIT];
    let fit = fit_curve(model, &start, &obs, &FitOptions::default())?;
    let params =
        GapModelParams { gap0: fit.params[0], coupling_s: fit.params[1], omega: fit.params[2] * OMEGA_UNIT };
    Ok((params, fit))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEMPS: [f64; 5] = [3.5, 50.0, 100.0, 200.0, 300.0];

    fn reference_params() -> GapModelParams {
        GapModelParams::new(0.25, 5.0, 2.05e13).unwrap()
    }

    #[test]
    fn phonon_energy() {
        assert!((reference_params().phonon_energy() - 13.49e-3).abs() < 5e-6);
    }

    #[test]
    fn limits() {
        let p = reference_params();
        assert!((gap_model(1e-3, &p) - p.gap0).abs() < 1e-15);
        let h = 1.0;
        let t = 5000.0;
        let slope = (gap_model(t + h, &p) - gap_model(t - h, &p)) / (2.0 * h);
        assert!((slope / (-2.0 * p.coupling_s * BOLTZMANN) - 1.0).abs() < 1e-4);
        let mut last = f64::INFINITY;
        for t in (1..400).map(|i| i as f64) {
            let g = gap_model(t, &p);
            // flat to machine precision while k_BT ≪ ħω
            assert!(if t >= 20.0 { g < last } else { g <= last });
            last = g;
        }
    }

    #[test]
    fn noiseless_recovery() {
        let truth = reference_params();
        let data = synth_gap(&truth, &TEMPS, 0.0, 0).unwrap();
        let start = GapModelParams::new(0.2, 3.5, 1.5e13).unwrap();
        let (fit, result) = fit_gap(&data, &start).unwrap();
        assert!(result.converged);
        assert!((fit.omega / truth.omega - 1.0).abs() < 1e-6, "{fit:?}");
        assert!((fit.coupling_s / truth.coupling_s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_gap_is_flagged() {
        let flat =
            GapDataset::new(TEMPS.iter().map(|&t| GapPoint { temperature: t, gap: 1.8 }).collect()).unwrap();
        let start = GapModelParams::new(1.8, 1.0, 2.0e13).unwrap();
        match fit_gap(&flat, &start) {
            Ok((_, r)) => assert!(r.near_singular(), "rcond {}", r.reciprocal_condition),
            Err(JunctionError::Fit(crate::numerics::NumericsError::NonConvergence { best })) => {
                assert!(best.near_singular())
            }
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn preconditions() {
        let p = reference_params();
        let few = synth_gap(&p, &TEMPS[..4], 0.0, 0).unwrap();
        assert!(matches!(fit_gap(&few, &p), Err(JunctionError::InsufficientData { .. })));
        let narrow = synth_gap(&p, &[100.0, 120.0, 140.0, 160.0, 180.0], 0.0, 0).unwrap();
        assert!(matches!(fit_gap(&narrow, &p), Err(JunctionError::TemperatureSpan { .. })));
        assert!(GapDataset::new(vec![
            GapPoint { temperature: 5.0, gap: 1.0 },
            GapPoint { temperature: 4.0, gap: 1.0 }
        ])
        .is_err());
    }
}
