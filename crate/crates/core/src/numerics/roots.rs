use super::NumericsError;

const MAX_ITER: usize = 200;

/// Bracketed root of `f` on `[lo, hi]` by an Illinois regula-falsi /
/// bisection hybrid.
///
/// Stops when `|f(x)| ≤ tol` or the bracket has shrunk below
/// `tol · max(|x|, f64::MIN_POSITIVE)`. The returned point always lies in the
/// initial bracket.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { x })
        }
    };
    let mut fa = eval(a)?;
    let mut fb = eval(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::Bracketing { lo, hi });
    }
    // side of the last retained endpoint: -1 = a, +1 = b
    let mut side = 0i8;
    for _ in 0..MAX_ITER {
        let width = b - a;
        let mid = 0.5 * (a + b);
        // Fall back to bisection when the secant point is poorly placed.
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) || (x - mid).abs() > 0.45 * width {
            x = mid;
        }
        let fx = eval(x)?;
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        let x_best = if fa.abs() < fb.abs() { a } else { b };
        if b - a <= tol * x_best.abs().max(f64::MIN_POSITIVE) {
            return Ok(x_best);
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
