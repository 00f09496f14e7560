use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;

use super::{rk4_step, BHParams, MeanFieldState, DEFAULT_DT};
use crate::math::{circular_mean, wrap, wrap_signed};
use crate::{Error, Result};

/// Crossings are refined until `|n₂ − plane|` is below this.
pub const CROSSING_TOL: f64 = 1e-8;

/// Required sign of `dn₂/dt` at a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    fn accepts(&self, rate: f64) -> bool {
        match self {
            Direction::Increasing => rate > 0.0,
            Direction::Decreasing => rate < 0.0,
        }
    }
}

/// The surface `n₂ = plane` at fixed mean-field energy, crossed in one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionSpec {
    pub energy: f64,
    pub n2_plane: f64,
    pub direction: Direction,
}

impl SectionSpec {
    pub fn new(energy: f64, n2_plane: f64, direction: Direction) -> Result<Self> {
        if !(n2_plane > 0.0 && n2_plane < 1.0) {
            return Err(Error::InvalidInput(format!(
                "section plane n2 = {n2_plane} must lie in (0, 1)"
            )));
        }
        if !energy.is_finite() {
            return Err(Error::InvalidInput("section energy must be finite".into()));
        }
        Ok(Self {
            energy,
            n2_plane,
            direction,
        })
    }

    /// `E = 0.8 c₀`, `n₂ = 0.2475`, `ṅ₂ > 0` (energy in units of `c₀`).
    pub fn reference(c0: f64) -> Self {
        Self::new(0.8 * c0, 0.2475, Direction::Increasing).expect("valid reference section")
    }

    fn offset(&self, s: &MeanFieldState) -> f64 {
        s.population(1) - self.n2_plane
    }
}

/// A point on the section in `(n₁, θ₁)`, with the time it was reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionPoint {
    pub t: f64,
    pub n1: f64,
    pub theta1: f64,
}

impl SectionPoint {
    fn of(t: f64, s: &MeanFieldState) -> Self {
        Self {
            t,
            n1: s.population(0),
            theta1: s.relative_phase(0),
        }
    }
}

/// Completes `(n₁, θ₁)` on the section to a full state.
///
/// With `arg a₃ = 0` the energy depends on `θ₂` only through
/// `−c₀√n₂ R cos(θ₂ − φ)`, `R e^{iφ} = √n₁ e^{iθ₁} + √n₃`, so both roots are
/// explicit; the one crossing in the requested direction is returned.
pub fn lift_to_section(
    spec: &SectionSpec,
    params: &BHParams,
    n1: f64,
    theta1: f64,
) -> Result<MeanFieldState> {
    let unreachable = Error::Unreachable { n1, theta1 };
    let n2 = spec.n2_plane;
    let n3 = 1.0 - n1 - n2;
    if !(n1 >= 0.0) || n3 < 0.0 {
        return Err(unreachable);
    }
    let z = num_complex::Complex64::from_polar(n1.sqrt(), theta1) + n3.sqrt();
    let (r, phi) = z.to_polar();
    let rest = -params.c0() * (n1 * n3).sqrt() * theta1.cos()
        + 0.5 * params.c() * (n1 * n1 + n2 * n2 + n3 * n3);
    let denom = params.c0() * n2.sqrt() * r;
    if !(denom > 0.0) {
        return Err(unreachable);
    }
    let x = (rest - spec.energy) / denom;
    if x.abs() > 1.0 {
        return Err(unreachable);
    }
    let delta = x.acos();
    for theta2 in [phi + delta, phi - delta] {
        let s = MeanFieldState::from_section(n1, theta1, n2, wrap(theta2, TAU))?;
        if spec.direction.accepts(s.n2_rate(params)) {
            return Ok(s);
        }
    }
    Err(unreachable)
}

/// Linear-interpolation crossings of a sampled signal through `plane`.
pub fn detect_crossings(
    times: &[f64],
    values: &[f64],
    plane: f64,
    direction: Direction,
) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 1..times.len().min(values.len()) {
        let (a, b) = (values[k - 1] - plane, values[k] - plane);
        let hit = match direction {
            Direction::Increasing => a < 0.0 && b >= 0.0,
            Direction::Decreasing => a > 0.0 && b <= 0.0,
        };
        if hit {
            let f = a / (a - b);
            out.push(times[k - 1] + f * (times[k] - times[k - 1]));
        }
    }
    out
}

/// Integrates from `start` and collects up to `max_points` crossings before `t_max`.
fn crossings(
    spec: &SectionSpec,
    params: &BHParams,
    start: &MeanFieldState,
    t_max: f64,
    dt: f64,
    max_points: usize,
) -> Result<Vec<SectionPoint>> {
    let steps = (t_max / dt).ceil() as usize;
    let mut s = *start;
    let mut g = spec.offset(&s);
    let mut out = Vec::new();
    for k in 0..steps {
        let next = rk4_step(&s, params, dt);
        let gn = spec.offset(&next);
        let hit = match spec.direction {
            Direction::Increasing => g < 0.0 && gn >= 0.0,
            Direction::Decreasing => g > 0.0 && gn <= 0.0,
        };
        if hit && k > 0 {
            let (h, state) = refine(spec, params, &s, g, dt);
            out.push(SectionPoint::of(k as f64 * dt + h, &state));
            if out.len() >= max_points {
                break;
            }
        }
        s = next;
        g = gn;
    }
    if (s.norm_sqr() - 1.0).abs() > 1e-8 {
        return Err(Error::DriftExceeded(format!(
            "norm drifted to {} while tracing the section",
            s.norm_sqr()
        )));
    }
    Ok(out)
}

/// Bisection on the RK4 sub-step that lands on the plane.
fn refine(
    spec: &SectionSpec,
    params: &BHParams,
    s: &MeanFieldState,
    g0: f64,
    dt: f64,
) -> (f64, MeanFieldState) {
    let (mut lo, mut hi) = (0.0, dt);
    let mut glo = g0;
    let mut mid_state = *s;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        mid_state = rk4_step(s, params, mid);
        let gm = spec.offset(&mid_state);
        if gm.abs() < CROSSING_TOL && hi - lo < 1e-12 {
            return (mid, mid_state);
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), mid_state)
}

/// Section points of the orbit through seed `(n₁, θ₁)`, the seed first.
pub fn section_points(
    spec: &SectionSpec,
    params: &BHParams,
    seed: (f64, f64),
    t_max: f64,
    dt: f64,
) -> Result<Vec<SectionPoint>> {
    let start = lift_to_section(spec, params, seed.0, seed.1)?;
    let mut pts = alloc::vec![SectionPoint::of(0.0, &start)];
    let more = crossings(spec, params, &start, t_max, dt, usize::MAX)?;
    if more.is_empty() {
        return Err(Error::NoCrossings { t_max });
    }
    pts.extend(more);
    Ok(pts)
}

/// [`section_points`] for many seeds; each seed fails independently.
pub fn poincare_section(
    spec: &SectionSpec,
    params: &BHParams,
    seeds: &[(f64, f64)],
    t_max: f64,
) -> Vec<Result<Vec<SectionPoint>>> {
    seeds
        .iter()
        .map(|&s| section_points(spec, params, s, t_max, DEFAULT_DT))
        .collect()
}

/// First return of `(n₁, θ₁)` to the section.
pub fn return_map(
    spec: &SectionSpec,
    params: &BHParams,
    point: (f64, f64),
    t_max: f64,
) -> Result<SectionPoint> {
    let start = lift_to_section(spec, params, point.0, point.1)?;
    crossings(spec, params, &start, t_max, DEFAULT_DT, 1)?
        .into_iter()
        .next()
        .ok_or(Error::NoCrossings { t_max })
}

/// Newton iteration for a fixed point of the `period`-fold return map.
pub fn find_periodic_point(
    spec: &SectionSpec,
    params: &BHParams,
    guess: (f64, f64),
    period: usize,
    tol: f64,
) -> Result<(f64, f64)> {
    let t_max = 200.0;
    let map = |x: (f64, f64)| -> Result<(f64, f64)> {
        let mut p = x;
        for _ in 0..period.max(1) {
            let r = return_map(spec, params, p, t_max)?;
            p = (r.n1, r.theta1);
        }
        Ok((p.0 - x.0, wrap_signed(p.1 - x.1)))
    };
    let mut x = guess;
    let h = 1e-6;
    for _ in 0..30 {
        let f = map(x)?;
        if f.0.hypot(f.1) < tol {
            return Ok(x);
        }
        let fa = map((x.0 + h, x.1))?;
        let fb = map((x.0, x.1 + h))?;
        let j = [
            [(fa.0 - f.0) / h, (fb.0 - f.0) / h],
            [(fa.1 - f.1) / h, (fb.1 - f.1) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            break;
        }
        let dx = (j[1][1] * f.0 - j[0][1] * f.1) / det;
        let dy = (j[0][0] * f.1 - j[1][0] * f.0) / det;
        x = (x.0 - dx, wrap(x.1 - dy, TAU));
    }
    Err(Error::NonConvergence(format!(
        "periodic point of period {period} near ({:.4}, {:.4})",
        guess.0, guess.1
    )))
}

/// `√det Cov(n₁, θ₁)` with `θ₁` unwrapped around its circular mean: the
/// area-like spread of a point set.
pub fn section_dispersion(points: &[SectionPoint]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let ones = alloc::vec![1.0; n];
    let thetas: Vec<f64> = points.iter().map(|p| p.theta1).collect();
    let centre = circular_mean(&ones, &thetas).unwrap_or(0.0);
    let xs: Vec<f64> = points.iter().map(|p| p.n1).collect();
    let ys: Vec<f64> = thetas.iter().map(|t| wrap_signed(t - centre)).collect();
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    let k = (n - 1) as f64;
    ((sxx * syy - sxy * sxy) / (k * k)).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn synthetic_crossings() {
        let times: Vec<f64> = (0..=20_000).map(|k| k as f64 * 1e-3).collect();
        let values: Vec<f64> = times.iter().map(|t| 0.3 + 0.01 * t.sin()).collect();
        let up = detect_crossings(&times, &values, 0.3, Direction::Increasing);
        // sin crosses upward at t = 2π k; t = 0 is the start, not a crossing.
        assert_eq!(up.len(), 3);
        for (k, t) in up.iter().enumerate() {
            assert!((t - TAU * (k + 1) as f64).abs() < 1e-6);
        }
        let down = detect_crossings(&times, &values, 0.3, Direction::Decreasing);
        assert_eq!(down.len(), 3);
        assert!((down[0] - PI).abs() < 1e-6);
    }

    #[test]
    fn lift_hits_energy_and_direction() {
        let p = BHParams::with_particles(1.0, 2.0, 35).unwrap();
        let spec = SectionSpec::reference(1.0);
        for seed in [(0.22, 0.8 * PI), (0.42, 0.8 * PI)] {
            let s = lift_to_section(&spec, &p, seed.0, seed.1).unwrap();
            assert!((s.energy(&p) - 0.8).abs() < 1e-12);
            assert!((s.population(1) - 0.2475).abs() < 1e-15);
            assert!(s.n2_rate(&p) > 0.0);
            assert!((s.relative_phase(0) - seed.1).abs() < 1e-12);
        }
    }

    #[test]
    fn unreachable_seed() {
        let p = BHParams::with_particles(1.0, 2.0, 35).unwrap();
        let spec = SectionSpec::reference(1.0);
        assert!(matches!(
            lift_to_section(&spec, &p, 0.9, 0.0),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn refined_crossings_sit_on_plane() {
        let p = BHParams::with_particles(1.0, 2.0, 35).unwrap();
        let spec = SectionSpec::reference(1.0);
        let pts = section_points(&spec, &p, (0.42, 0.8 * PI), 60.0, DEFAULT_DT).unwrap();
        assert!(pts.len() > 3);
        for w in pts.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }
}
