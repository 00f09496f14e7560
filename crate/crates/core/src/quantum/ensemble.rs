use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Basis, DensityMatrix, StateVector};
use crate::linalg::{CMatrix, Eigensystem};
use crate::ot::Distribution;
use crate::{Error, Result};

/// Infinite-time average of `|ψ(t)⟩⟨ψ(t)|`.
///
/// Coherences between distinct (quasi-)energies dephase; inside a degenerate
/// block they survive, so each block contributes `|φ_b⟩⟨φ_b|` with
/// `φ_b = Π_b ψ0` the projection onto that eigenspace.
pub fn diagonal_ensemble(psi0: &StateVector, eig: &Eigensystem) -> Result<DensityMatrix> {
    check_dim(psi0.dim(), eig.dim())?;
    let v = eig.vectors();
    let n = eig.dim();
    let c = coefficients(psi0, v);
    let mut rho = CMatrix::zeros(n, n);
    for block in eig.degenerate_blocks() {
        let mut phi = nalgebra::DVector::<Complex64>::zeros(n);
        for &a in &block {
            phi.axpy(c[a], &v.column(a), Complex64::new(1.0, 0.0));
        }
        rho.ger(
            Complex64::new(1.0, 0.0),
            &phi,
            &phi.conjugate(),
            Complex64::new(1.0, 0.0),
        );
    }
    Ok(DensityMatrix::from_raw(rho))
}

/// Infinite-time average of a mixed initial state, `Σ_b Π_b ρ0 Π_b`.
pub fn diagonal_ensemble_mixed(rho0: &DensityMatrix, eig: &Eigensystem) -> Result<DensityMatrix> {
    check_dim(rho0.dim(), eig.dim())?;
    let v = eig.vectors();
    // In the eigenbasis the average keeps only entries inside degenerate blocks.
    let r = v.adjoint() * rho0.matrix() * v;
    let n = eig.dim();
    let mut kept = CMatrix::zeros(n, n);
    for block in eig.degenerate_blocks() {
        for &a in &block {
            for &b in &block {
                kept[(a, b)] = r[(a, b)];
            }
        }
    }
    Ok(DensityMatrix::from_raw(v * kept * v.adjoint()))
}

fn coefficients(psi: &StateVector, v: &CMatrix) -> Vec<Complex64> {
    let a = psi.amplitudes();
    (0..v.ncols())
        .map(|k| v.column(k).iter().zip(a).map(|(x, y)| x.conj() * y).sum())
        .collect()
}

fn check_dim(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::SizeMismatch { expected, found });
    }
    Ok(())
}

/// Diagonal-ensemble distributions over a basis for many initial states that
/// share one eigensystem.
///
/// Stores `W = B†V` once; each projection then costs `O(n · len)` instead of
/// building the averaged density matrix.
#[derive(Debug, Clone)]
pub struct EnsembleProjector {
    n: usize,
    labels: usize,
    /// Row-major `labels × n`.
    w: Vec<Complex64>,
    v: CMatrix,
    blocks: Vec<Vec<usize>>,
    nondegenerate: bool,
}

impl EnsembleProjector {
    pub fn new<B: Basis + ?Sized>(eig: &Eigensystem, basis: &B) -> Result<Self> {
        check_dim(basis.hilbert_dim(), eig.dim())?;
        let n = eig.dim();
        let labels = basis.len();
        let v = eig.vectors();
        let mut w = vec![Complex64::new(0.0, 0.0); labels * n];
        for a in 0..n {
            let col = basis.analyze(v.column(a).as_slice());
            for (i, z) in col.into_iter().enumerate() {
                w[i * n + a] = z;
            }
        }
        let blocks = eig.degenerate_blocks();
        let nondegenerate = blocks.len() == n;
        Ok(Self {
            n,
            labels,
            w,
            v: v.clone(),
            blocks,
            nondegenerate,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Probability weights of the time-averaged state on every label.
    pub fn project(&self, psi0: &StateVector) -> Result<Distribution> {
        check_dim(psi0.dim(), self.n)?;
        let c = coefficients(psi0, &self.v);
        let mut p = vec![0.0; self.labels];
        if self.nondegenerate {
            let weights: Vec<f64> = c.iter().map(|z| z.norm_sqr()).collect();
            for (i, pi) in p.iter_mut().enumerate() {
                let row = &self.w[i * self.n..(i + 1) * self.n];
                *pi = row
                    .iter()
                    .zip(&weights)
                    .map(|(x, g)| x.norm_sqr() * g)
                    .sum();
            }
        } else {
            for (i, pi) in p.iter_mut().enumerate() {
                let row = &self.w[i * self.n..(i + 1) * self.n];
                *pi = self
                    .blocks
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|&a| row[a] * c[a])
                            .sum::<Complex64>()
                            .norm_sqr()
                    })
                    .sum();
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { sum });
        }
        Distribution::from_masses(p)
    }
}
