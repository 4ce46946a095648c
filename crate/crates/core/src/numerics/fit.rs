use nalgebra::{DMatrix, DVector};

use super::NumericsError;

/// One weighted sample: the residual is `weight · (model(input) − target)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub input: f64,
    pub target: f64,
    pub weight: f64,
}

impl Observation {
    pub fn new(input: f64, target: f64, weight: f64) -> Self {
        Self { input, target, weight }
    }

    /// Observation weighted by `1/|target|`, i.e. a relative residual.
    pub fn relative(input: f64, target: f64) -> Self {
        Self { input, target, weight: 1.0 / target.abs() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Threshold on both the relative step and the relative change of the
    /// squared residual.
    pub tolerance: f64,
    pub initial_damping: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_iterations: 200, tolerance: 1e-10, initial_damping: 1e-3 }
    }
}

/// Outcome of a least-squares fit, in the model's own parameter units.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: Vec<f64>,
    /// Euclidean norm of the weighted residual vector.
    pub residual_norm: f64,
    /// `σ² (JᵀJ)⁺` with `σ² = ‖r‖² / (n − p)`.
    pub covariance: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Smallest over largest eigenvalue of `JᵀJ` at the solution.
    pub reciprocal_condition: f64,
}

impl FitResult {
    /// True when some parameter combination is (numerically) unconstrained
    /// by the data.
    pub fn near_singular(&self) -> bool {
        self.reciprocal_condition < 1e-10
    }

    pub fn std_errors(&self) -> Vec<f64> {
        (0..self.params.len()).map(|i| self.covariance[(i, i)].max(0.0).sqrt()).collect()
    }
}

/// Levenberg–Marquardt minimisation of `Σ (wᵢ (model(p, xᵢ) − yᵢ))²`.
///
/// The Jacobian is taken by central differences. Damping uses Moré's
/// non-decreasing diagonal scaling, starting at `initial_damping` and moving
/// by a factor of ten on each rejected/accepted step. A model returning a
/// non-finite value at a trial point rejects that step.
pub fn fit_curve<M>(
    model: M,
    initial: &[f64],
    data: &[Observation],
    options: &FitOptions,
) -> Result<FitResult, NumericsError>
where
    M: Fn(&[f64], f64) -> f64,
{
    let n_params = initial.len();
    if n_params == 0 {
        return Err(NumericsError::InvalidArgument("no parameters to fit".into()));
    }
    if data.len() < n_params {
        return Err(NumericsError::InvalidArgument(format!(
            "{} observations cannot determine {} parameters",
            data.len(),
            n_params
        )));
    }
    if initial.iter().any(|p| !p.is_finite()) {
        return Err(NumericsError::InvalidArgument("initial parameters must be finite".into()));
    }

    let residuals = |p: &DVector<f64>| -> Option<DVector<f64>> {
        let mut out = DVector::zeros(data.len());
        for (i, obs) in data.iter().enumerate() {
            let r = obs.weight * (model(p.as_slice(), obs.input) - obs.target);
            if !r.is_finite() {
                return None;
            }
            out[i] = r;
        }
        Some(out)
    };
    let jacobian = |p: &DVector<f64>| -> Result<DMatrix<f64>, NumericsError> {
        let mut jac = DMatrix::zeros(data.len(), n_params);
        for j in 0..n_params {
            let h = 1e-7 * p[j].abs().max(1e-3);
            let mut plus = p.clone();
            plus[j] += h;
            let mut minus = p.clone();
            minus[j] -= h;
            let column = match (residuals(&plus), residuals(&minus)) {
                (Some(rp), Some(rm)) => (rp - rm) / (2.0 * h),
                (Some(rp), None) => (rp - residuals(p).expect("current point is finite")) / h,
                (None, Some(rm)) => (residuals(p).expect("current point is finite") - rm) / h,
                (None, None) => return Err(NumericsError::NonFinite { x: p[j] }),
            };
            jac.set_column(j, &column);
        }
        Ok(jac)
    };

    let data_norm = data.iter().map(|o| (o.weight * o.target).powi(2)).sum::<f64>().sqrt();
    let floor = (1e-14 * data_norm).powi(2);

    let mut p = DVector::from_column_slice(initial);
    let mut r = residuals(&p).ok_or(NumericsError::NonFinite { x: f64::NAN })?;
    let mut cost = r.norm_squared();
    let mut jac = jacobian(&p)?;
    let mut scale = DVector::<f64>::zeros(n_params);
    for j in 0..n_params {
        let col = jac.column(j).norm_squared();
        if col == 0.0 {
            return Err(NumericsError::DegenerateFit(j));
        }
        scale[j] = col;
    }

    let mut damping = options.initial_damping;
    let mut converged = cost <= floor;
    let mut iterations = 0;
    while !converged && iterations < options.max_iterations {
        iterations += 1;
        let normal = jac.transpose() * &jac;
        let gradient = jac.transpose() * &r;
        for j in 0..n_params {
            scale[j] = scale[j].max(normal[(j, j)]);
        }
        let mut damped = normal.clone();
        for j in 0..n_params {
            damped[(j, j)] += damping * scale[j];
        }
        let Some(chol) = damped.cholesky() else {
            damping *= 10.0;
            continue;
        };
        let step = chol.solve(&(-&gradient));
        let trial = &p + &step;
        let rel_step = step.norm() / (p.norm() + f64::EPSILON);
        let (accepted, rel_change) = match residuals(&trial) {
            Some(r_trial) => {
                let c = r_trial.norm_squared();
                if c < cost {
                    let rel = (cost - c) / cost;
                    p = trial;
                    r = r_trial;
                    cost = c;
                    (true, rel)
                } else {
                    (false, 0.0)
                }
            }
            None => (false, 0.0),
        };
        if accepted {
            damping = (damping / 10.0).max(1e-15);
            jac = jacobian(&p)?;
        } else {
            damping *= 10.0;
        }
        converged = cost <= floor
            || (rel_step < options.tolerance && rel_change < options.tolerance)
            || damping > 1e20;
    }

    let normal = jac.transpose() * &jac;
    let dof = data.len().saturating_sub(n_params);
    let sigma2 = if dof > 0 { cost / dof as f64 } else { 0.0 };
    let (covariance, reciprocal_condition) = pseudo_inverse(&normal);
    let result = FitResult {
        params: p.iter().copied().collect(),
        residual_norm: cost.sqrt(),
        covariance: covariance * sigma2,
        converged,
        iterations,
        reciprocal_condition,
    };
    if converged {
        Ok(result)
    } else {
        Err(NumericsError::NonConvergence { best: Box::new(result) })
    }
}

fn pseudo_inverse(sym: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let eig = sym.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if max == 0.0 {
        return (DMatrix::zeros(sym.nrows(), sym.ncols()), 0.0);
    }
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |m, &v| m.min(v.max(0.0)));
    let cutoff = max * 1e-15;
    let inv = eig.eigenvalues.map(|v| if v > cutoff { 1.0 / v } else { 0.0 });
    let vecs = &eig.eigenvectors;
    let mut out = vecs * DMatrix::from_diagonal(&inv) * vecs.transpose();
    // symmetrise away rounding
    out = (&out + out.transpose()) * 0.5;
    (out, min / max)
}
