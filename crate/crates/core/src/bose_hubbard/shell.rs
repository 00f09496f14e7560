use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::BhCellBasis;
use crate::linalg::Eigensystem;
use crate::ot::Distribution;
use crate::quantum::{Basis, StateVector};
use crate::{Error, Result};

/// Levels averaged by the moving-average smoother of the spectral envelope.
pub const SMOOTHING_WINDOW: usize = 5;
/// Cells are kept when their energy lies within this many standard deviations.
pub const SHELL_WIDTH: f64 = 3.0;
/// A Gaussian fit with a lower coefficient of determination is rejected.
pub const MIN_R_SQUARED: f64 = 0.9;

/// `y ≈ A exp(−(x−μ)²/(2σ²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub amplitude: f64,
    pub mean: f64,
    pub sigma: f64,
    pub r_squared: f64,
}

impl GaussianFit {
    pub fn eval(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sigma;
        self.amplitude * (-0.5 * z * z).exp()
    }
}

/// Levenberg–Marquardt least-squares Gaussian fit.
pub fn fit_gaussian(x: &[f64], y: &[f64]) -> Result<GaussianFit> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 4 {
        return Err(Error::InvalidInput(
            "a Gaussian fit needs at least four points".into(),
        ));
    }
    let total: f64 = y.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidInput("envelope has no weight".into()));
    }
    let mean = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / total;
    let var = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mean).powi(2) * b)
        .sum::<f64>()
        / total;
    let mut p = Vector3::new(
        y.iter().cloned().fold(0.0, f64::max),
        mean,
        var.sqrt().max(1e-12),
    );
    let sse = |p: &Vector3<f64>| -> f64 {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| {
                let z = (a - p[1]) / p[2];
                (b - p[0] * (-0.5 * z * z).exp()).powi(2)
            })
            .sum()
    };
    let mut cost = sse(&p);
    let mut lambda = 1e-3;
    for _ in 0..500 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&a, &b) in x.iter().zip(y) {
            let d = a - p[1];
            let e = (-0.5 * d * d / (p[2] * p[2])).exp();
            let f = p[0] * e;
            let g = Vector3::new(e, f * d / (p[2] * p[2]), f * d * d / (p[2] * p[2] * p[2]));
            jtj += g * g.transpose();
            jtr += g * (b - f);
        }
        let mut damped = jtj;
        for i in 0..3 {
            damped[(i, i)] *= 1.0 + lambda;
        }
        let Some(step) = damped.lu().solve(&jtr) else {
            break;
        };
        let trial = p + step;
        let tc = if trial[2] > 0.0 {
            sse(&trial)
        } else {
            f64::INFINITY
        };
        if tc < cost {
            let done = (cost - tc) <= 1e-15 * cost.max(1e-300);
            p = trial;
            cost = tc;
            lambda = (lambda * 0.3).max(1e-12);
            if done {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - cost / ss_tot
    } else {
        0.0
    };
    Ok(GaussianFit {
        amplitude: p[0],
        mean: p[1],
        sigma: p[2].abs(),
        r_squared,
    })
}

/// Centred moving average, window shrinking at the ends.
fn smooth(y: &[f64], window: usize) -> Vec<f64> {
    let h = window / 2;
    (0..y.len())
        .map(|i| {
            let lo = i.saturating_sub(h);
            let hi = (i + h + 1).min(y.len());
            y[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// The ergodic reference of a chaos map: a Gaussian energy shell fitted to the
/// spectral envelope of the scanned coherent states.
#[derive(Debug, Clone)]
pub struct EnergyShell {
    pub fit: GaussianFit,
    /// `(E_k, smoothed weight)` per level.
    pub envelope: Vec<(f64, f64)>,
    /// Labels whose energy lies within `SHELL_WIDTH·σ` of the centre, ascending.
    pub cells: Vec<usize>,
    /// `Tr(ρ_erg |cell⟩⟨cell|)` over `cells`, renormalized.
    pub reference: Distribution,
    /// Mean and standard deviation over the packets of the weight each packet
    /// has on the selected cells.
    pub captured_mean: f64,
    pub captured_std: f64,
}

impl EnergyShell {
    /// Restricts a full cell distribution to the shell and renormalizes.
    pub fn restrict(&self, p: &Distribution) -> Result<Distribution> {
        Distribution::from_masses(self.cells.iter().map(|&c| p.weights()[c]).collect())
    }
}

/// Builds the energy-shell reference from the Hamiltonian `h`, its
/// eigensystem, the cell basis and the coherent states of the scan.
pub fn energy_shell_reference(
    h: &DMatrix<f64>,
    eig: &Eigensystem,
    basis: &BhCellBasis,
    packets: &[StateVector],
) -> Result<EnergyShell> {
    if packets.is_empty() {
        return Err(Error::InvalidInput(
            "energy shell needs at least one packet".into(),
        ));
    }
    let n = eig.dim();
    let v = eig.vectors();
    let mut weight = vec![0.0; n];
    for psi in packets {
        let c = v.adjoint() * nalgebra::DVector::from_column_slice(psi.amplitudes());
        for (w, z) in weight.iter_mut().zip(c.iter()) {
            *w += z.norm_sqr() / packets.len() as f64;
        }
    }
    let smoothed = smooth(&weight, SMOOTHING_WINDOW);
    let fit = fit_gaussian(eig.values(), &smoothed)?;
    if !(fit.r_squared >= MIN_R_SQUARED) {
        return Err(Error::FitFailed {
            r_squared: fit.r_squared,
            threshold: MIN_R_SQUARED,
        });
    }

    let cells: Vec<usize> = (0..basis.len())
        .filter(|&c| match cell_energy(h, basis, c) {
            Some(e) => (e - fit.mean).abs() <= SHELL_WIDTH * fit.sigma,
            None => false,
        })
        .collect();
    if cells.is_empty() {
        return Err(Error::EmptyWindow { samples: 0 });
    }

    let mut erg = vec![0.0; basis.len()];
    for (k, &e) in eig.values().iter().enumerate() {
        let g = fit.eval(e).max(0.0);
        if g == 0.0 {
            continue;
        }
        for (acc, z) in erg.iter_mut().zip(basis.analyze(v.column(k).as_slice())) {
            *acc += g * z.norm_sqr();
        }
    }
    let reference = Distribution::from_masses(cells.iter().map(|&c| erg[c]).collect())?;

    let captured: Vec<f64> = packets
        .iter()
        .map(|psi| {
            let p = basis.probabilities(psi.amplitudes());
            cells.iter().map(|&c| p[c]).sum::<f64>() / p.iter().sum::<f64>()
        })
        .collect();
    let m = captured.iter().sum::<f64>() / captured.len() as f64;
    let sd = (captured.iter().map(|c| (c - m).powi(2)).sum::<f64>() / captured.len() as f64).sqrt();

    Ok(EnergyShell {
        fit,
        envelope: eig.values().iter().copied().zip(smoothed).collect(),
        cells,
        reference,
        captured_mean: m,
        captured_std: sd,
    })
}

/// Energy of a cell's physical component, `None` when it has none.
fn cell_energy(h: &DMatrix<f64>, basis: &BhCellBasis, cell: usize) -> Option<f64> {
    let phi = basis.physical_part(cell);
    let support: Vec<(usize, Complex64)> = phi
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm_sqr() > 0.0)
        .map(|(i, z)| (i, *z))
        .collect();
    let norm: f64 = support.iter().map(|(_, z)| z.norm_sqr()).sum();
    if norm < 1e-12 {
        return None;
    }
    let mut e = Complex64::new(0.0, 0.0);
    for &(a, za) in &support {
        for &(b, zb) in &support {
            let hab = h[(a, b)];
            if hab != 0.0 {
                e += za.conj() * zb * hab;
            }
        }
    }
    Some(e.re / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_gaussian() {
        let x: Vec<f64> = (0..200).map(|k| -3.0 + 0.05 * k as f64).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 2.5 * (-(v - 1.2f64).powi(2) / (2.0 * 0.7 * 0.7)).exp())
            .collect();
        let f = fit_gaussian(&x, &y).unwrap();
        assert!((f.amplitude - 2.5).abs() < 1e-8);
        assert!((f.mean - 1.2).abs() < 1e-8);
        assert!((f.sigma - 0.7).abs() < 1e-8);
        assert!(f.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn moving_average() {
        let s = smooth(&[0.0, 0.0, 5.0, 0.0, 0.0, 0.0], 5);
        assert_eq!(s, vec![5.0 / 3.0, 1.25, 1.0, 1.0, 1.25, 0.0]);
    }
}
