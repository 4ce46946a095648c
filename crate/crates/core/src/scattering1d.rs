//! Stationary scattering on a [`PotentialProfile`].
//!
//! Conventions: the incident wave is `e^{ik(x−x₁)}` with `x₁` the left edge
//! of the barrier region, the reflected wave is `r·e^{−ik(x−x₁)}` and the
//! transmitted wave is `t·e^{ik(x−x₂)}` with `x₂` the right edge, so `arg t`
//! is the phase accumulated across the barrier.
//!
//! The solution is built right to left starting from the outgoing wave.
//! Every segment uses a locally referenced basis: `e^{±iqξ}` in allowed
//! segments and `e^{−κξ}`, `e^{κ(ξ−w)}` in forbidden ones, with `ξ` measured
//! from the segment's left edge and `w` its width. Both evanescent functions
//! are bounded by one inside their segment; the exponential growth of the
//! coefficients is carried separately as a running logarithm so that thick
//! or many-segment barriers cannot overflow.

use num_complex::Complex64;
use thiserror::Error;

use crate::potential::PotentialProfile;
use crate::units::{group_velocity, wavenumber};

/// Energies closer than this to a segment height are rejected.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ScatteringError {
    #[error("energy {energy} eV is not above the asymptotic level {level} eV (closed channel)")]
    ClosedChannel { energy: f64, level: f64 },
    #[error("energy {energy} eV coincides with the height of segment {index}; perturb the energy (e.g. by 1e-9 eV)")]
    DegenerateSegment { index: usize, energy: f64 },
    #[error("non-finite energy")]
    NonFiniteEnergy,
    #[error("scattering solution does not belong to this profile")]
    Mismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    /// `E > V`: basis `e^{iqξ}`, `e^{−iqξ}`.
    Oscillating,
    /// `E < V`: basis `e^{−κξ}`, `e^{κ(ξ−w)}`.
    Evanescent,
}

/// Wavefunction inside one segment, `ψ = forward·f₁(ξ) + backward·f₂(ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentWave {
    pub kind: WaveKind,
    /// `q` for oscillating segments, `κ` for evanescent ones (Å⁻¹).
    pub wavenumber: f64,
    pub start: f64,
    pub width: f64,
    pub height: f64,
    pub forward: Complex64,
    pub backward: Complex64,
}

impl SegmentWave {
    /// Basis values and derivatives at local coordinate `xi`.
    fn basis(&self, xi: f64) -> ([Complex64; 2], [Complex64; 2]) {
        basis(self.kind, self.wavenumber, self.width, xi)
    }

    /// `(ψ, ψ′)` at local coordinate `xi ∈ [0, width]`.
    pub fn eval(&self, xi: f64) -> (Complex64, Complex64) {
        let (f, df) = self.basis(xi);
        (self.forward * f[0] + self.backward * f[1], self.forward * df[0] + self.backward * df[1])
    }

    /// `∫₀ʷ |ψ|² dξ`, exactly.
    pub fn density_integral(&self) -> f64 {
        let (a, b, w) = (self.forward, self.backward, self.width);
        match self.kind {
            WaveKind::Oscillating => {
                let q = self.wavenumber;
                // (e^{2iqw} − 1)/(2iq) = e^{iqw} sin(qw)/q
                let cross = a * b.conj() * Complex64::from_polar(1.0, q * w) * ((q * w).sin() / q);
                (a.norm_sqr() + b.norm_sqr()) * w + 2.0 * cross.re
            }
            WaveKind::Evanescent => {
                let kappa = self.wavenumber;
                let one_minus = -(-2.0 * kappa * w).exp_m1() / (2.0 * kappa);
                (a.norm_sqr() + b.norm_sqr()) * one_minus + 2.0 * (a * b.conj()).re * w * (-kappa * w).exp()
            }
        }
    }
}

fn basis(kind: WaveKind, k: f64, width: f64, xi: f64) -> ([Complex64; 2], [Complex64; 2]) {
    match kind {
        WaveKind::Oscillating => {
            let e = Complex64::from_polar(1.0, k * xi);
            let ik = Complex64::new(0.0, k);
            ([e, e.conj()], [ik * e, -ik * e.conj()])
        }
        WaveKind::Evanescent => {
            let dec = (-k * xi).exp();
            let grow = (k * (xi - width)).exp();
            (
                [Complex64::new(dec, 0.0), Complex64::new(grow, 0.0)],
                [Complex64::new(-k * dec, 0.0), Complex64::new(k * grow, 0.0)],
            )
        }
    }
}

/// Amplitudes and in-barrier wavefunction at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution {
    pub energy: f64,
    pub k_left: f64,
    pub k_right: f64,
    /// Reflection amplitude referenced at the barrier entrance.
    pub r: Complex64,
    /// Transmission amplitude referenced entrance-to-exit.
    pub t: Complex64,
    pub segments: Vec<SegmentWave>,
}

impl ScatteringSolution {
    pub fn start(&self) -> f64 {
        self.segments.first().map_or(0.0, |s| s.start)
    }

    pub fn end(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.start + s.width)
    }

    pub fn transmission_probability(&self) -> f64 {
        self.k_right / self.k_left * self.t.norm_sqr()
    }

    pub fn reflection_probability(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// `(ψ, ψ′)` at any position, for unit incident amplitude.
    pub fn wavefunction(&self, x: f64) -> (Complex64, Complex64) {
        let x1 = self.start();
        let x2 = self.end();
        if x < x1 {
            let xi = x - x1;
            let (f, df) = basis(WaveKind::Oscillating, self.k_left, 0.0, xi);
            return (f[0] + self.r * f[1], df[0] + self.r * df[1]);
        }
        if x >= x2 {
            let (f, df) = basis(WaveKind::Oscillating, self.k_right, 0.0, x - x2);
            return (self.t * f[0], self.t * df[0]);
        }
        let seg = self
            .segments
            .iter()
            .find(|s| x < s.start + s.width)
            .unwrap_or_else(|| self.segments.last().expect("non-empty"));
        seg.eval(x - seg.start)
    }
}

/// Solves for unit incidence from the left at energy `energy` (eV).
pub fn solve(profile: &PotentialProfile, energy: f64) -> Result<ScatteringSolution, ScatteringError> {
    if !energy.is_finite() {
        return Err(ScatteringError::NonFiniteEnergy);
    }
    for level in [profile.left_level(), profile.right_level()] {
        if energy <= level {
            return Err(ScatteringError::ClosedChannel { energy, level });
        }
    }
    for (index, s) in profile.segments().iter().enumerate() {
        if (energy - s.height).abs() < DEGENERACY_TOLERANCE {
            return Err(ScatteringError::DegenerateSegment { index, energy });
        }
    }
    let k_left = wavenumber(energy - profile.left_level());
    let k_right = wavenumber(energy - profile.right_level());

    // Start from ψ = e^{ik_R(x−x₂)} at x₂ and sweep leftwards. `log_scale`
    // is the logarithm of the factor separating stored and true values.
    let mut psi = Complex64::new(1.0, 0.0);
    let mut dpsi = Complex64::new(0.0, k_right);
    let mut log_scale = 0.0;

    let n = profile.segments().len();
    let mut stored: Vec<(SegmentWave, f64)> = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    let mut x = profile.origin();
    for s in profile.segments() {
        edges.push(x);
        x += s.width;
    }
    for (index, s) in profile.segments().iter().enumerate().rev() {
        let w = s.width;
        let (kind, k) = if energy > s.height {
            (WaveKind::Oscillating, wavenumber(energy - s.height))
        } else {
            (WaveKind::Evanescent, wavenumber(energy - s.height))
        };
        // Solve M(w)·c = (ψ, ψ′) with the stored, rescaled coefficients.
        let (c1, c2, shift) = match kind {
            WaveKind::Oscillating => {
                let ratio = dpsi / Complex64::new(0.0, k);
                let c1 = 0.5 * (psi + ratio) * Complex64::from_polar(1.0, -k * w);
                let c2 = 0.5 * (psi - ratio) * Complex64::from_polar(1.0, k * w);
                let shift = c1.norm().max(c2.norm()).ln();
                (c1, c2, shift)
            }
            WaveKind::Evanescent => {
                let u = 0.5 * (psi - dpsi / k);
                let v = 0.5 * (psi + dpsi / k);
                // true c1 = u·e^{κw}; keep the exponent in the log scale
                let lu = u.norm().ln() + k * w;
                let lv = v.norm().ln();
                let shift = lu.max(lv);
                (u * (k * w - shift).exp(), v * (-shift).exp(), shift)
            }
        };
        let (c1, c2) = match kind {
            WaveKind::Oscillating => (c1 * (-shift).exp(), c2 * (-shift).exp()),
            WaveKind::Evanescent => (c1, c2),
        };
        log_scale += shift;
        let seg = SegmentWave {
            kind,
            wavenumber: k,
            start: edges[index],
            width: w,
            height: s.height,
            forward: c1,
            backward: c2,
        };
        let (p0, dp0) = seg.eval(0.0);
        psi = p0;
        dpsi = dp0;
        stored.push((seg, log_scale));
    }

    let ratio = dpsi / Complex64::new(0.0, k_left);
    let incident = 0.5 * (psi + ratio);
    let reflected = 0.5 * (psi - ratio);
    // true incident amplitude = incident · e^{log_scale}
    let t = Complex64::from_polar((-log_scale).exp(), 0.0) / incident;
    let r = reflected / incident;
    let segments = stored
        .into_iter()
        .rev()
        .map(|(mut seg, scale)| {
            let factor = (scale - log_scale).exp();
            seg.forward = seg.forward * factor / incident;
            seg.backward = seg.backward * factor / incident;
            seg
        })
        .collect();
    Ok(ScatteringSolution { energy, k_left, k_right, r, t, segments })
}

/// `∫_{x₁}^{x₂} |Ψ|² dx` (Å) for unit incident amplitude, integrated
/// analytically segment by segment.
pub fn density_integral(
    sol: &ScatteringSolution,
    profile: &PotentialProfile,
) -> Result<f64, ScatteringError> {
    let matches = sol.segments.len() == profile.segments().len()
        && sol.start() == profile.origin()
        && sol
            .segments
            .iter()
            .zip(profile.segments())
            .all(|(w, s)| w.width == s.width && w.height == s.height);
    if !matches {
        return Err(ScatteringError::Mismatch);
    }
    Ok(sol.segments.iter().map(SegmentWave::density_integral).sum::<f64>().max(0.0))
}

/// Incident probability current `ħk/m` (Å/fs) for unit amplitude.
pub fn incident_flux(sol: &ScatteringSolution) -> f64 {
    group_velocity(sol.k_left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Segment;

    #[test]
    fn free_region_is_transparent() {
        let p = PotentialProfile::rectangular(0.0, 12.0).unwrap();
        let sol = solve(&p, 0.8).unwrap();
        // |t| = 1 and, entrance-to-exit, arg t = kL
        let expected = Complex64::from_polar(1.0, wavenumber(0.8) * 12.0);
        assert!((sol.t - expected).norm() < 1e-13);
        assert!(sol.r.norm() < 1e-14);
    }

    #[test]
    fn single_step_reflection() {
        // left 0, right V_s: model the step with a tiny segment at V_s.
        let vs = 0.6;
        let p = PotentialProfile::new(vec![Segment { width: 1e-9, height: vs }], 0.0, vs, 0.0).unwrap();
        let e = 1.4;
        let sol = solve(&p, e).unwrap();
        let (k1, k2) = (wavenumber(e), wavenumber(e - vs));
        let expected = (k1 - k2) / (k1 + k2);
        assert!((sol.r - Complex64::new(expected, 0.0)).norm() < 1e-8);
        let flux = sol.reflection_probability() + sol.transmission_probability();
        assert!((flux - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_channels() {
        let p = PotentialProfile::rectangular(1.0, 5.0).unwrap();
        assert!(matches!(solve(&p, 0.0), Err(ScatteringError::ClosedChannel { .. })));
        assert!(matches!(solve(&p, -0.3), Err(ScatteringError::ClosedChannel { .. })));
        let q = PotentialProfile::new(vec![Segment { width: 1.0, height: 0.0 }], 0.0, 0.5, 0.0).unwrap();
        assert!(matches!(solve(&q, 0.4), Err(ScatteringError::ClosedChannel { level, .. }) if level == 0.5));
        assert_eq!(solve(&p, f64::NAN), Err(ScatteringError::NonFiniteEnergy));
    }

    #[test]
    fn degenerate_segment_rejected() {
        let p = PotentialProfile::rectangular(1.0, 5.0).unwrap();
        assert!(matches!(solve(&p, 1.0), Err(ScatteringError::DegenerateSegment { index: 0, .. })));
        assert!(solve(&p, 1.0 + 1e-9).is_ok());
    }

    #[test]
    fn density_of_free_region_is_length() {
        let p = PotentialProfile::rectangular(0.0, 9.5).unwrap();
        let sol = solve(&p, 2.0).unwrap();
        assert!((density_integral(&sol, &p).unwrap() - 9.5).abs() < 1e-12);
    }

    #[test]
    fn mismatched_profile() {
        let p = PotentialProfile::rectangular(1.0, 5.0).unwrap();
        let q = PotentialProfile::rectangular(1.0, 6.0).unwrap();
        let sol = solve(&p, 0.5).unwrap();
        assert_eq!(density_integral(&sol, &q), Err(ScatteringError::Mismatch));
    }

    #[test]
    fn flux_at_one_ev() {
        let p = PotentialProfile::rectangular(0.0, 1.0).unwrap();
        let j1 = incident_flux(&solve(&p, 1.0).unwrap());
        assert!((j1 - 5.931).abs() < 1e-3);
        let j2 = incident_flux(&solve(&p, 2.0).unwrap());
        assert!((j2 / j1 - 2f64.sqrt()).abs() < 1e-12);
        assert!(j1 > 0.0);
    }

    #[test]
    fn huge_barrier_does_not_overflow() {
        // κs ≈ 2000: the naive product of e^{κs} would overflow.
        let p = PotentialProfile::from_segments(vec![Segment { width: 200.0, height: 10.0 }; 10]).unwrap();
        let sol = solve(&p, 1.0).unwrap();
        assert!(sol.t.norm().is_finite());
        assert!((sol.r.norm() - 1.0).abs() < 1e-12);
        assert!(density_integral(&sol, &p).unwrap().is_finite());
    }
}
