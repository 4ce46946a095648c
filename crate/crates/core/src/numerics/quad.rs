use super::NumericsError;

/// Maximum bisection depth of the adaptive Simpson recursion.
pub const MAX_DEPTH: u32 = 48;

/// Adaptive composite Simpson quadrature of `f` over `[a, b]`.
///
/// Each panel is accepted once the Richardson-corrected estimate satisfies
/// `|S₂ − S₁| / 15 ≤ tol_panel · max(1, |S₂|)`, so `tol` acts as an absolute
/// error for small integrals and a relative one for large integrals.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) {
        return Err(NumericsError::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { x })
        }
    };
    let fa = eval(a)?;
    let fb = eval(b)?;
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    let mut converged = true;
    let estimate = refine(&eval, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut converged)?;
    if converged {
        Ok(estimate)
    } else {
        Err(NumericsError::Tolerance { estimate, tol })
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    eval: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    converged: &mut bool,
) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> Result<f64, NumericsError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let halves = left + right;
    let delta = halves - whole;
    if delta.abs() <= 15.0 * tol * halves.abs().max(1.0) {
        return Ok(halves + delta / 15.0);
    }
    if depth == 0 || m <= a || m >= b {
        *converged = false;
        return Ok(halves + delta / 15.0);
    }
    let l = refine(eval, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, converged)?;
    let r = refine(eval, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, converged)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial() {
        let v = integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sine_half_period() {
        let v = integrate(f64::sin, 0.0, PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn unit_integrand() {
        let v = integrate(|_| 1.0, 0.0, 13.5, 1e-10).unwrap();
        assert!((v - 13.5).abs() < 1e-12);
    }

    #[test]
    fn reversed_interval_is_rejected() {
        assert!(matches!(integrate(|x| x, 1.0, 0.0, 1e-8), Err(NumericsError::InvalidArgument(_))));
    }

    #[test]
    fn non_finite_integrand() {
        assert!(matches!(integrate(|x| 1.0 / x, 0.0, 1.0, 1e-8), Err(NumericsError::NonFinite { .. })));
    }

    #[test]
    fn tolerance_failure_carries_estimate() {
        // A jump at an irrational point never satisfies the panel test.
        let cut = 1.0 / std::f64::consts::PI;
        match integrate(|x| if x < cut { 0.0 } else { 1.0 }, 0.0, 1.0, 1e-15) {
            Err(NumericsError::Tolerance { estimate, .. }) => assert!((estimate - (1.0 - cut)).abs() < 1e-6),
            other => panic!("expected tolerance error, got {other:?}"),
        }
    }
}
