use super::NumericsError;

/// Default finite-difference step for an argument of magnitude `x`.
pub fn default_step(x: f64) -> f64 {
    1e-4 * x.abs().max(1.0)
}

/// Central-difference derivative with one level of Richardson extrapolation.
///
/// Evaluates `f` at `x ± step` and `x ± step/2`; the combination
/// `(4 D(h/2) − D(h)) / 3` cancels the O(h²) term, so cubics are exact up
/// to rounding.
pub fn derivative<F>(f: F, x: f64, step: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    try_derivative(|x| Ok::<_, NumericsError>(f(x)), x, step)
}

/// [`derivative`] for fallible functions.
pub fn try_derivative<F, E>(f: F, x: f64, step: f64) -> Result<f64, E>
where
    F: Fn(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    if !(step > 0.0) || !step.is_finite() {
        return Err(NumericsError::InvalidArgument(format!("step must be positive, got {step}")).into());
    }
    let eval = |x: f64| -> Result<f64, E> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { x }.into())
        }
    };
    let h = step;
    let coarse = (eval(x + h)? - eval(x - h)?) / (2.0 * h);
    let fine = (eval(x + 0.5 * h)? - eval(x - 0.5 * h)?) / h;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// [`try_derivative`] with the step cut by four until two successive
/// estimates agree to `rel_tol` (or to `abs_tol` for derivatives near zero),
/// or until the difference stops shrinking (rounding has taken over). Starts from `step`; resolves features much
/// narrower than the starting step, such as sharp resonances.
pub fn try_derivative_refined<F, E>(f: F, x: f64, step: f64, rel_tol: f64, abs_tol: f64) -> Result<f64, E>
where
    F: Fn(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    const MAX_REFINEMENTS: usize = 16;
    // below this relative change a growing difference means rounding noise;
    // above it the step has not yet resolved the function
    const NOISE_FLOOR: f64 = 1e-4;
    let mut h = step;
    let mut best = try_derivative(&f, x, h)?;
    let mut last_change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        h *= 0.25;
        let next = try_derivative(&f, x, h)?;
        let change = (next - best).abs();
        if change <= (rel_tol * next.abs()).max(abs_tol) {
            return Ok(next);
        }
        if change >= last_change && change <= NOISE_FLOOR * next.abs() {
            return Ok(best);
        }
        best = next;
        last_change = change;
    }
    Ok(best)
}
