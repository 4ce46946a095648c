//! Closed-form rectangular-barrier results used as oracles. Nothing here
//! touches the transfer-matrix code path.
#![allow(dead_code)]

use num_complex::Complex64;
use tunnel_chrono::units::{ELECTRON_MASS as M, HBAR};

pub fn k_of(kinetic: f64) -> f64 {
    (2.0 * M * kinetic.abs()).sqrt() / HBAR
}

/// Rectangular barrier of height `v0` and width `s` probed at `e < v0`.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub v0: f64,
    pub s: f64,
    pub e: f64,
}

/// Derivatives of (k, κ) with respect to the chosen variable.
#[derive(Clone, Copy)]
enum Wrt {
    Energy,
    Height,
}

impl Rect {
    pub fn new(v0: f64, s: f64, e: f64) -> Self {
        assert!(e < v0 && e > 0.0);
        Self { v0, s, e }
    }

    pub fn k(&self) -> f64 {
        k_of(self.e)
    }

    pub fn kappa(&self) -> f64 {
        k_of(self.v0 - self.e)
    }

    fn eps(&self) -> f64 {
        let (k, q) = (self.k(), self.kappa());
        (q * q - k * k) / (2.0 * k * q)
    }

    fn tanh(&self) -> f64 {
        (self.kappa() * self.s).tanh()
    }

    /// t = sech κs / (1 + iε tanh κs), entrance-to-exit referenced.
    pub fn t(&self) -> Complex64 {
        let x = self.kappa() * self.s;
        let sech = 2.0 * (-x).exp() / (1.0 + (-2.0 * x).exp());
        Complex64::new(sech, 0.0) / Complex64::new(1.0, self.eps() * self.tanh())
    }

    /// r = −i (k₀²/2kκ) tanh κs / (1 + iε tanh κs), entrance referenced.
    pub fn r(&self) -> Complex64 {
        let (k, q) = (self.k(), self.kappa());
        let k02 = k * k + q * q;
        Complex64::new(0.0, -k02 / (2.0 * k * q) * self.tanh())
            / Complex64::new(1.0, self.eps() * self.tanh())
    }

    pub fn arg_t(&self) -> f64 {
        -(self.eps() * self.tanh()).atan()
    }

    pub fn ln_abs_t(&self) -> f64 {
        let x = self.kappa() * self.s;
        let ln_cosh = x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2;
        let u = self.eps() * self.tanh();
        -ln_cosh - 0.5 * (u * u).ln_1p()
    }

    fn slopes(&self, wrt: Wrt) -> (f64, f64) {
        let (k, q) = (self.k(), self.kappa());
        let c = M / (HBAR * HBAR);
        match wrt {
            Wrt::Energy => (c / k, -c / q),
            Wrt::Height => (0.0, c / q),
        }
    }

    fn d_arg_and_ln(&self, wrt: Wrt) -> (f64, f64) {
        let (k, q) = (self.k(), self.kappa());
        let (dk, dq) = self.slopes(wrt);
        let eps = self.eps();
        let deps = 0.5 * (dq / k - q * dk / (k * k) - dk / q + k * dq / (q * q));
        let th = self.tanh();
        let dth = self.s * dq * (1.0 - th * th);
        let u = eps * th;
        let du = deps * th + eps * dth;
        let d_arg = -du / (1.0 + u * u);
        let d_ln = -th * self.s * dq - u * du / (1.0 + u * u);
        (d_arg, d_ln)
    }

    /// ħ d(arg t)/dE.
    pub fn phase_time(&self) -> f64 {
        HBAR * self.d_arg_and_ln(Wrt::Energy).0
    }

    /// −ħ d(arg t)/dV₀.
    pub fn larmor_time(&self) -> f64 {
        -HBAR * self.d_arg_and_ln(Wrt::Height).0
    }

    /// −ħ d ln|t| / dV₀.
    pub fn bl_time(&self) -> f64 {
        -HBAR * self.d_arg_and_ln(Wrt::Height).1
    }

    /// ħ d ln|t| / dE.
    pub fn pm_time(&self) -> f64 {
        HBAR * self.d_arg_and_ln(Wrt::Energy).1
    }

    /// ∫₀ˢ |ψ|² dx from the hand-integrated interior solution
    /// ψ = t (cosh κ(x−s) + i(k/κ) sinh κ(x−s)).
    pub fn density_integral(&self) -> f64 {
        let (k, q, s) = (self.k(), self.kappa(), self.s);
        let x = q * s;
        let t2 = self.t().norm_sqr();
        // sinh(2x)/2 written to avoid overflow at large x only matters past x ≈ 350
        t2 / (2.0 * q.powi(3)) * (x * (q * q - k * k) + 0.5 * (k * k + q * q) * (2.0 * x).sinh())
    }

    /// Dwell time from the closed form
    /// (mk/ħκ)[2κs(κ²−k²) + k₀² sinh 2κs] / (4k²κ² + k₀⁴ sinh²κs).
    pub fn dwell_time(&self) -> f64 {
        let (k, q, s) = (self.k(), self.kappa(), self.s);
        let k02 = k * k + q * q;
        let x = q * s;
        // divide through by sinh²x
        let e2 = (-2.0 * x).exp();
        let csch2 = 4.0 * e2 / ((1.0 - e2) * (1.0 - e2));
        let coth = (1.0 + e2) / (1.0 - e2);
        let num = 2.0 * x * (q * q - k * k) * csch2 + 2.0 * k02 * coth;
        let den = 4.0 * k * k * q * q * csch2 + k02 * k02;
        M * k / (HBAR * q) * num / den
    }
}

/// Free crossing time m L / (ħ k).
pub fn crossing_time(length: f64, energy: f64) -> f64 {
    M * length / (HBAR * k_of(energy))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
