//! Small numeric helpers shared by the models.

use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

/// Wraps `x` into `[0, period)`.
pub fn wrap(x: f64, period: f64) -> f64 {
    let r = x % period;
    let r = if r < 0.0 { r + period } else { r };
    // `r + period` can round up to `period` for tiny negative `r`.
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_signed(x: f64) -> f64 {
    wrap(x + PI, TAU) - PI
}

/// Minimal-image separation of two coordinates on a circle of the given period.
pub fn min_image(a: f64, b: f64, period: f64) -> f64 {
    let d = wrap((a - b).abs(), period);
    d.min(period - d)
}

/// Argument of `Σ w_i e^{iθ_i}`, returned in `[0, 2π)`.
///
/// `None` when the resultant vanishes, i.e. the circular mean is undefined.
pub fn circular_mean(weights: &[f64], angles: &[f64]) -> Option<f64> {
    let (mut s, mut c) = (0.0, 0.0);
    for (w, a) in weights.iter().zip(angles) {
        s += w * a.sin();
        c += w * a.cos();
    }
    if s.hypot(c) < 1e-14 {
        return None;
    }
    Some(wrap(s.atan2(c), TAU))
}

/// `ln n!` via the log-gamma function.
pub fn ln_factorial(n: u32) -> f64 {
    libm::lgamma(f64::from(n) + 1.0)
}

/// Binomial coefficient as an integer; panics on overflow of `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Least-squares line through `(x, y)`: returns `(slope, intercept, rms_residual, slope_stderr)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - (slope * xi + intercept);
            r * r
        })
        .sum();
    let rms = (ss_res / n).sqrt();
    let stderr = if x.len() > 2 && sxx > 0.0 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    (slope, intercept, rms, stderr)
}
