//! Spherical Bessel functions `j_l`, `y_l` and the exponentially scaled
//! modified function `e^{−x} i_l`, each returned for all orders `0..=lmax`.

const RESCALE: f64 = 1e100;

/// `j_l(x)` for `l = 0..=lmax`.
///
/// Upward recurrence where it is stable (`x > lmax`), Miller's downward
/// recurrence otherwise, normalised with `Σ (2l+1) j_l² = 1`.
pub fn spherical_j(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let (s, c) = x.sin_cos();
    if x > lmax as f64 + 1.0 {
        out[0] = s / x;
        if lmax >= 1 {
            out[1] = s / (x * x) - c / x;
        }
        for l in 1..lmax {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
        return out;
    }
    let start = lmax + 20 + (2.0 * x) as usize + (40.0 * (lmax as f64 + x)).sqrt() as usize;
    let (mut above, mut current) = (0.0f64, 1.0f64);
    let mut norm = 0.0;
    for l in (0..=start).rev() {
        if l <= lmax {
            out[l] = current;
        }
        norm += (2 * l + 1) as f64 * current * current;
        let below = if l > 0 { (2 * l + 1) as f64 / x * current - above } else { 0.0 };
        above = current;
        current = below;
        if above.abs() > RESCALE {
            above /= RESCALE;
            current /= RESCALE;
            norm /= RESCALE * RESCALE;
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let mut scale = 1.0 / norm.sqrt();
    // fix the overall sign against the closed forms of j₀ or j₁
    let j0 = if x < 1e-4 { 1.0 - x * x / 6.0 } else { s / x };
    let j1 = if x < 1e-3 { x / 3.0 * (1.0 - x * x / 10.0) } else { (s / x - c) / x };
    let sign_ref = if j0.abs() >= j1.abs() || lmax == 0 { (out[0], j0) } else { (out[1], j1) };
    if sign_ref.0.signum() != sign_ref.1.signum() {
        scale = -scale;
    }
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// `y_l(x)` for `l = 0..=lmax` by upward recurrence.
pub fn spherical_y(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    let (s, c) = x.sin_cos();
    out[0] = -c / x;
    if lmax >= 1 {
        out[1] = -c / (x * x) - s / x;
    }
    for l in 1..lmax {
        out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
    }
    out
}

/// `e^{−x} i_l(x)` for `l = 0..=lmax`, `x > 0`.
///
/// The ratio `i_{L+1}/i_L` at the top order comes from its continued
/// fraction; the rest follows by downward recurrence and is normalised to
/// `e^{−x} i₀(x) = (1 − e^{−2x}) / 2x`.
pub fn scaled_spherical_i(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    let i0 = if x < 1e-8 { 1.0 - x } else { -(-2.0 * x).exp_m1() / (2.0 * x) };
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    // r_l = i_{l+1}/i_l = 1 / ((2l+3)/x + r_{l+1})
    let depth = lmax + 60 + (4.0 * x) as usize;
    let mut ratio = 0.0;
    for l in (lmax..depth).rev() {
        ratio = 1.0 / ((2 * l + 3) as f64 / x + ratio);
    }
    let mut above = ratio;
    let mut current = 1.0;
    out[lmax] = current;
    for l in (1..=lmax).rev() {
        let below = above + (2 * l + 1) as f64 / x * current;
        above = current;
        current = below;
        out[l - 1] = current;
        if current.abs() > RESCALE {
            above /= RESCALE;
            current /= RESCALE;
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let scale = i0 / out[0];
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// Derivatives from `f'_l = f_{l−1} − (l+1)/x f_l` (valid for `j`, `y` and,
/// with `f'_0 = f_1` instead of `−f_1`, for `i`). `values` must hold orders
/// up to `lmax + 1`.
pub fn derivatives(values: &[f64], x: f64, modified: bool) -> Vec<f64> {
    let lmax = values.len() - 2;
    (0..=lmax)
        .map(|l| {
            if l == 0 {
                if modified {
                    values[1]
                } else {
                    -values[1]
                }
            } else {
                values[l - 1] - (l + 1) as f64 / x * values[l]
            }
        })
        .collect()
}
