use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::BHParams;
use crate::math::wrap;
use crate::{Error, Result};

/// Default RK4 step in units of `1/c₀`.
pub const DEFAULT_DT: f64 = 1e-3;
const NORM_TOL: f64 = 1e-10;
const NORM_DRIFT: f64 = 1e-9;
const ENERGY_DRIFT_RATE: f64 = 1e-8;

/// Mean-field amplitudes `(a₁, a₂, a₃)` with `Σ|a_i|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldState {
    a: [Complex64; 3],
}

impl MeanFieldState {
    pub fn new(a: [Complex64; 3]) -> Result<Self> {
        let s = Self { a };
        let norm = s.norm_sqr();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalizedState { norm_sqr: norm });
        }
        Ok(s)
    }

    pub(crate) fn from_raw(a: [Complex64; 3]) -> Self {
        Self { a }
    }

    /// Amplitudes from populations and phases relative to site 3 (`arg a₃ = 0`).
    pub fn from_section(n1: f64, theta1: f64, n2: f64, theta2: f64) -> Result<Self> {
        let n3 = 1.0 - n1 - n2;
        if n1 < 0.0 || n2 < 0.0 || n3 < -NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "populations ({n1}, {n2}) leave the simplex"
            )));
        }
        Self::new([
            Complex64::from_polar(n1.sqrt(), theta1),
            Complex64::from_polar(n2.sqrt(), theta2),
            Complex64::new(n3.max(0.0).sqrt(), 0.0),
        ])
    }

    pub fn amplitudes(&self) -> &[Complex64; 3] {
        &self.a
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `n_i = |a_i|²`.
    pub fn population(&self, i: usize) -> f64 {
        self.a[i].norm_sqr()
    }

    /// `θ_i = arg a_i − arg a₃` in `[0, 2π)`.
    pub fn relative_phase(&self, i: usize) -> f64 {
        wrap(self.a[i].arg() - self.a[2].arg(), TAU)
    }

    /// `H_mf = −(c₀/2) Σ_{i≠j} a_i* a_j + (c/2) Σ |a_j|⁴`.
    pub fn energy(&self, params: &BHParams) -> f64 {
        let a = &self.a;
        let hop = (a[0].conj() * a[1] + a[0].conj() * a[2] + a[1].conj() * a[2]).re;
        let int: f64 = a.iter().map(|z| z.norm_sqr().powi(2)).sum();
        -params.c0() * hop + 0.5 * params.c() * int
    }

    /// `ȧ_j = −i ∂H_mf/∂a_j* = −i[−(c₀/2) Σ_{k≠j} a_k + c|a_j|² a_j]`.
    pub fn velocity(&self, params: &BHParams) -> [Complex64; 3] {
        let a = &self.a;
        let total = a[0] + a[1] + a[2];
        let mut out = [Complex64::default(); 3];
        for j in 0..3 {
            let grad = -0.5 * params.c0() * (total - a[j]) + params.c() * a[j].norm_sqr() * a[j];
            out[j] = Complex64::new(0.0, -1.0) * grad;
        }
        out
    }

    /// `dn₂/dt`.
    pub fn n2_rate(&self, params: &BHParams) -> f64 {
        2.0 * (self.a[1].conj() * self.velocity(params)[1]).re
    }
}

fn axpy(x: &[Complex64; 3], h: f64, k: &[Complex64; 3]) -> MeanFieldState {
    MeanFieldState::from_raw([x[0] + k[0] * h, x[1] + k[1] * h, x[2] + k[2] * h])
}

/// One classical fourth-order Runge–Kutta step (negative `dt` runs backwards).
pub fn rk4_step(s: &MeanFieldState, params: &BHParams, dt: f64) -> MeanFieldState {
    let x = &s.a;
    let k1 = s.velocity(params);
    let k2 = axpy(x, 0.5 * dt, &k1).velocity(params);
    let k3 = axpy(x, 0.5 * dt, &k2).velocity(params);
    let k4 = axpy(x, dt, &k3).velocity(params);
    let mut out = [Complex64::default(); 3];
    for j in 0..3 {
        out[j] = x[j] + (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (dt / 6.0);
    }
    MeanFieldState::from_raw(out)
}

/// Sampled mean-field trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MeanFieldState>,
}

/// Integrates for `t_span` with fixed step `dt`, recording every `stride` steps.
///
/// Fails with [`Error::DriftExceeded`] when the norm drifts by more than
/// `1e-9` or the energy by more than `1e-8·max(|E|, c₀)` per unit time.
pub fn meanfield_flow(
    start: &MeanFieldState,
    params: &BHParams,
    t_span: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0 && t_span >= 0.0 && dt.is_finite() && t_span.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "bad time span {t_span} / step {dt}"
        )));
    }
    let stride = stride.max(1);
    let steps = (t_span / dt).round() as usize;
    let e0 = start.energy(params);
    let mut s = *start;
    let mut times = alloc::vec![0.0];
    let mut states = alloc::vec![s];
    for k in 1..=steps {
        s = rk4_step(&s, params, dt);
        if k % stride == 0 || k == steps {
            times.push(k as f64 * dt);
            states.push(s);
        }
    }
    let t = steps as f64 * dt;
    let norm_drift = (s.norm_sqr() - start.norm_sqr()).abs();
    if norm_drift > NORM_DRIFT {
        return Err(Error::DriftExceeded(format!(
            "norm drift {norm_drift:.3e} over t = {t}"
        )));
    }
    let e_drift = (s.energy(params) - e0).abs();
    let allowed = ENERGY_DRIFT_RATE * e0.abs().max(params.c0()) * t.max(1.0);
    if e_drift > allowed {
        return Err(Error::DriftExceeded(format!(
            "energy drift {e_drift:.3e} over t = {t}"
        )));
    }
    Ok(Trajectory { times, states })
}
