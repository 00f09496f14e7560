use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{hermiticity_residual, symmetric_eigenvalues, CMatrix};
use crate::{Error, Result};

/// Tolerance on unit norm and unit trace.
pub const STATE_TOL: f64 = 1e-9;

/// A normalized pure state in a fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidInput("empty state".into()));
        }
        let norm_sqr = norm_sqr(&amps);
        if !((norm_sqr - 1.0).abs() <= STATE_TOL) {
            return Err(Error::NotNormalizedState { norm_sqr });
        }
        Ok(Self { amps })
    }

    /// Divides by the norm; fails on the zero vector.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm_sqr = norm_sqr(&amps);
        if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
            return Err(Error::NotNormalizedState { norm_sqr });
        }
        let s = 1.0 / norm_sqr.sqrt();
        amps.iter_mut().for_each(|a| *a *= s);
        Ok(Self { amps })
    }

    pub fn basis_state(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::SizeMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Multiplies by `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let z = Complex64::from_polar(1.0, phi);
        Self {
            amps: self.amps.iter().map(|a| a * z).collect(),
        }
    }

    /// Applies a matrix and renormalizes away rounding drift.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dim() {
            return Err(Error::SizeMismatch {
                expected: u.ncols(),
                found: self.dim(),
            });
        }
        let n = u.nrows();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (j, a) in self.amps.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, m) in out.iter_mut().zip(u.column(j).iter()) {
                *o += m * a;
            }
        }
        Ok(Self { amps: out })
    }
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (each within 1e-9).
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::SizeMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let res = hermiticity_residual(&m);
        if res > STATE_TOL {
            return Err(Error::NotStructured {
                kind: "Hermitian",
                residual: res,
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotStructured {
                kind: "unit-trace",
                residual: (tr - Complex64::new(1.0, 0.0)).norm(),
            });
        }
        // Positivity of a Hermitian H + iA via the real symmetric [[H, -A], [A, H]].
        let n = m.nrows();
        let big = nalgebra::DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = m[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let lowest = symmetric_eigenvalues(big)?[0];
        if lowest < -STATE_TOL {
            return Err(Error::NotStructured {
                kind: "positive semidefinite",
                residual: -lowest,
            });
        }
        Ok(Self { m })
    }

    pub(crate) fn from_raw(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn pure(psi: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Self {
            m: &v * v.adjoint(),
        }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            m: CMatrix::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalization_is_checked() {
        assert!(StateVector::new(alloc::vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        let s = StateVector::normalized(alloc::vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(StateVector::normalized(alloc::vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let s = StateVector::normalized(alloc::vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let rho = DensityMatrix::pure(&s);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        let bad =
            CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(bad),
            Err(Error::NotStructured { .. })
        ));
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!((mixed.trace() - 1.0).abs() < 1e-15);
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
    }
}
