//! Model-independent chaos diagnostics: quantum Lyapunov fits and the chaos
//! measure Υ, the distance between a long-time-averaged state and an ergodic
//! reference.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::Eigensystem;
use crate::math::linear_fit;
use crate::ot::{wasserstein, DistanceConfig, Distribution};
use crate::quantum::{
    diagonal_ensemble_mixed, project_probabilities_mixed, Basis, DensityMatrix, EnsembleProjector,
    StateVector,
};
use crate::{Error, Result};

/// Default fraction of the phase-space diameter at which a distance series counts as saturated.
pub const DEFAULT_SATURATION_FRACTION: f64 = 0.25;

/// Distances between two evolving states, sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl DistanceSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::SizeMismatch {
                expected: times.len(),
                found: values.len(),
            });
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput(
                "times must be finite and strictly increasing".into(),
            ));
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidWeight { index, value });
        }
        Ok(Self { times, values })
    }

    /// Samples at `t = 0, 1, 2, …`.
    pub fn from_steps(values: Vec<f64>) -> Result<Self> {
        Self::new((0..values.len()).map(|t| t as f64).collect(), values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Multiplies every distance by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(
            self.times.clone(),
            self.values.iter().map(|v| v * s).collect(),
        )
    }
}

/// Closed time interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovFit {
    /// Slope of `ln D` against time.
    pub gamma: f64,
    pub window: FitWindow,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
    /// Standard error of `gamma`.
    pub stderr: f64,
    pub samples: usize,
}

/// Least-squares growth rate of `ln D(t)` over the samples inside `window`
/// (the whole series when `None`).
pub fn lyapunov_exponent(
    series: &DistanceSeries,
    window: Option<FitWindow>,
) -> Result<LyapunovFit> {
    let w = window.unwrap_or(FitWindow {
        start: series.times.first().copied().unwrap_or(0.0),
        end: series.times.last().copied().unwrap_or(0.0),
    });
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (index, (&t, &d)) in series.times.iter().zip(&series.values).enumerate() {
        if t < w.start || t > w.end {
            continue;
        }
        if d <= 0.0 {
            return Err(Error::NonPositiveDistance { index, value: d });
        }
        x.push(t);
        y.push(d.ln());
    }
    if x.len() < 4 {
        return Err(Error::EmptyWindow { samples: x.len() });
    }
    let (gamma, _, residual, stderr) = linear_fit(&x, &y);
    Ok(LyapunovFit {
        gamma,
        window: w,
        residual,
        stderr,
        samples: x.len(),
    })
}

/// Fit window ending at the last sample before `D` first exceeds
/// `saturation_fraction · diameter`.
///
/// Returns the whole series when it never saturates.
pub fn ehrenfest_window(
    series: &DistanceSeries,
    diameter: f64,
    saturation_fraction: f64,
) -> Result<FitWindow> {
    if series.is_empty() {
        return Err(Error::EmptyWindow { samples: 0 });
    }
    if !(diameter > 0.0 && saturation_fraction > 0.0) {
        return Err(Error::InvalidInput(
            "diameter and saturation fraction must be positive".into(),
        ));
    }
    let limit = saturation_fraction * diameter;
    match series.values.iter().position(|&d| d > limit) {
        Some(0) => Err(Error::EmptyWindow { samples: 0 }),
        Some(k) => Ok(FitWindow {
            start: series.times[0],
            end: series.times[k - 1],
        }),
        None => Ok(FitWindow {
            start: series.times[0],
            end: *series.times.last().unwrap(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChaosMeasureResult {
    pub upsilon: f64,
    /// Distribution of the time-averaged state over the basis labels.
    pub distribution: Distribution,
}

/// `Υ = D(reference, P[ρ∞])` for a pure initial state.
///
/// `reference = None` means the uniform distribution (the maximally mixed state).
pub fn chaos_measure<B: Basis + ?Sized>(
    psi0: &StateVector,
    eig: &Eigensystem,
    basis: &B,
    reference: Option<&Distribution>,
    cfg: DistanceConfig,
) -> Result<ChaosMeasureResult> {
    let projector = EnsembleProjector::new(eig, basis)?;
    upsilon_of(projector.project(psi0)?, basis, reference, cfg)
}

/// `Υ` for a mixed initial state.
pub fn chaos_measure_mixed<B: Basis + ?Sized>(
    rho0: &DensityMatrix,
    eig: &Eigensystem,
    basis: &B,
    reference: Option<&Distribution>,
    cfg: DistanceConfig,
) -> Result<ChaosMeasureResult> {
    let avg = diagonal_ensemble_mixed(rho0, eig)?;
    upsilon_of(
        project_probabilities_mixed(&avg, basis)?,
        basis,
        reference,
        cfg,
    )
}

/// `Υ` from an already computed long-time distribution.
pub fn upsilon_of<B: Basis + ?Sized>(
    distribution: Distribution,
    basis: &B,
    reference: Option<&Distribution>,
    cfg: DistanceConfig,
) -> Result<ChaosMeasureResult> {
    let uniform;
    let r = match reference {
        Some(r) => r,
        None => {
            uniform = Distribution::uniform(basis.len());
            &uniform
        }
    };
    let upsilon = wasserstein(r, &distribution, basis.space(), cfg)?;
    Ok(ChaosMeasureResult {
        upsilon,
        distribution,
    })
}

/// A `rows × cols` grid of Υ values; unreachable points are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosScanResult {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub values: Vec<Option<f64>>,
    /// Coordinate of each row (e.g. momentum or `n₁`).
    pub row_coords: Vec<f64>,
    /// Coordinate of each column (e.g. position or `θ₁`).
    pub col_coords: Vec<f64>,
    pub metadata: Vec<(String, String)>,
}

impl ChaosScanResult {
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.values[row * self.cols + col]
    }

    pub fn present(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().filter_map(|v| *v)
    }

    pub fn median(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.present().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let k = v.len();
        Some(if k % 2 == 1 {
            v[k / 2]
        } else {
            0.5 * (v[k / 2 - 1] + v[k / 2])
        })
    }

    pub fn min(&self) -> Option<f64> {
        self.present().reduce(f64::min)
    }

    pub fn max(&self) -> Option<f64> {
        self.present().reduce(f64::max)
    }

    pub fn missing(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }
}
