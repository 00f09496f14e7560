//! Dense eigensystems for Hermitian and unitary matrices.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::math::wrap;
use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default relative tolerance under which neighbouring eigenvalues count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Structure tolerance accepted by [`diagonalize`] and [`diagonalize_unitary`].
pub const STRUCTURE_TOL: f64 = 1e-8;

/// Largest entry of `H − H†`.
pub fn hermiticity_residual(h: &CMatrix) -> f64 {
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry of `U†U − I`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Real energies, ascending.
    Hermitian,
    /// Eigenphases in `[0, 2π)`, ascending; the eigenvalues are `e^{iφ}`.
    Unitary,
}

/// Eigenvalues with an orthonormal set of eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    kind: SpectrumKind,
    values: Vec<f64>,
    vectors: CMatrix,
    degeneracy_tol: f64,
}

impl Eigensystem {
    /// Assembles an eigensystem from already orthonormal columns, sorting them.
    pub fn from_parts(kind: SpectrumKind, values: Vec<f64>, vectors: CMatrix) -> Result<Self> {
        if vectors.ncols() != values.len() {
            return Err(Error::SizeMismatch {
                expected: values.len(),
                found: vectors.ncols(),
            });
        }
        let mut es = Self {
            kind,
            values,
            vectors,
            degeneracy_tol: DEGENERACY_TOL,
        };
        es.sort();
        Ok(es)
    }

    fn sort(&mut self) {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        if order.iter().enumerate().all(|(k, &o)| k == o) {
            return;
        }
        self.values = order.iter().map(|&k| self.values[k]).collect();
        self.vectors = self.vectors.select_columns(order.iter());
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// Energies, or eigenphases for unitary input.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `e^{iφ}` for unitary input, `E + 0i` otherwise.
    pub fn complex_values(&self) -> Vec<Complex64> {
        match self.kind {
            SpectrumKind::Hermitian => self
                .values
                .iter()
                .map(|&e| Complex64::new(e, 0.0))
                .collect(),
            SpectrumKind::Unitary => self
                .values
                .iter()
                .map(|&p| Complex64::from_polar(1.0, p))
                .collect(),
        }
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn degeneracy_tol(&self) -> f64 {
        self.degeneracy_tol
    }

    pub fn with_degeneracy_tol(mut self, tol: f64) -> Self {
        self.degeneracy_tol = tol;
        self
    }

    /// Absolute gap below which two eigenvalues are merged.
    pub fn absolute_tolerance(&self) -> f64 {
        match self.kind {
            SpectrumKind::Hermitian => {
                let range = match (self.values.first(), self.values.last()) {
                    (Some(a), Some(b)) => b - a,
                    _ => 0.0,
                };
                self.degeneracy_tol * range.max(1.0)
            }
            SpectrumKind::Unitary => self.degeneracy_tol * TAU,
        }
    }

    /// Groups of column indices sharing one eigenvalue (within tolerance).
    ///
    /// Eigenphases are compared around the circle, so a cluster straddling
    /// `0 ≡ 2π` forms a single block.
    pub fn degenerate_blocks(&self) -> Vec<Vec<usize>> {
        let tol = self.absolute_tolerance();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for k in 0..self.values.len() {
            match blocks.last_mut() {
                Some(b) if self.values[k] - self.values[k - 1] <= tol => b.push(k),
                _ => blocks.push(alloc::vec![k]),
            }
        }
        if self.kind == SpectrumKind::Unitary && blocks.len() > 1 {
            let first = self.values[0];
            let last = *self.values.last().unwrap();
            if first + TAU - last <= tol {
                let head = blocks.remove(0);
                blocks.last_mut().unwrap().extend(head);
            }
        }
        blocks
    }

    /// Largest `‖M v − λ v‖` over the stored pairs.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let mv = m * &self.vectors;
        let lambdas = self.complex_values();
        let mut worst: f64 = 0.0;
        for (k, l) in lambdas.iter().enumerate() {
            let r = (mv.column(k) - self.vectors.column(k) * *l).norm();
            worst = worst.max(r);
        }
        worst
    }
}

/// Full eigensystem of a Hermitian matrix, energies ascending.
pub fn diagonalize(h: &CMatrix) -> Result<Eigensystem> {
    check_square(h)?;
    let scale = max_abs(h).max(1.0);
    let res = hermiticity_residual(h);
    if res > STRUCTURE_TOL * scale {
        return Err(Error::NotStructured {
            kind: "Hermitian",
            residual: res,
        });
    }
    if h.iter().all(|z| z.im == 0.0) {
        return diagonalize_real_symmetric(h.map(|z| z.re));
    }
    let n = h.nrows();
    let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, iteration_budget(n))
        .ok_or_else(|| Error::NonConvergence(format!("Hermitian eigensolver (n = {n})")))?;
    Eigensystem::from_parts(
        SpectrumKind::Hermitian,
        eig.eigenvalues.iter().copied().collect(),
        eig.eigenvectors,
    )
}

/// Full eigensystem of a real symmetric matrix.
pub fn diagonalize_real_symmetric(h: DMatrix<f64>) -> Result<Eigensystem> {
    check_square(&h)?;
    let n = h.nrows();
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, iteration_budget(n))
        .ok_or_else(|| Error::NonConvergence(format!("symmetric eigensolver (n = {n})")))?;
    let vectors = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    Eigensystem::from_parts(
        SpectrumKind::Hermitian,
        eig.eigenvalues.iter().copied().collect(),
        vectors,
    )
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigenvalues(h: DMatrix<f64>) -> Result<Vec<f64>> {
    check_square(&h)?;
    let n = h.nrows();
    let mut values: Vec<f64> = SymmetricEigen::try_new(h, f64::EPSILON, iteration_budget(n))
        .ok_or_else(|| Error::NonConvergence(format!("symmetric eigensolver (n = {n})")))?
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigensystem of a unitary matrix, eigenphases ascending in `[0, 2π)`.
///
/// A unitary matrix is normal, so its complex Schur form is diagonal and the
/// Schur vectors are orthonormal eigenvectors, also inside degenerate blocks.
pub fn diagonalize_unitary(u: &CMatrix) -> Result<Eigensystem> {
    check_square(u)?;
    let res = unitarity_residual(u);
    if res > STRUCTURE_TOL {
        return Err(Error::NotStructured {
            kind: "unitary",
            residual: res,
        });
    }
    let n = u.nrows();
    let schur = Schur::try_new(u.clone(), f64::EPSILON, iteration_budget(n))
        .ok_or_else(|| Error::NonConvergence(format!("Schur decomposition (n = {n})")))?;
    let (q, t) = schur.unpack();
    let phases = (0..n).map(|k| wrap(t[(k, k)].arg(), TAU)).collect();
    Eigensystem::from_parts(SpectrumKind::Unitary, phases, q)
}

fn iteration_budget(n: usize) -> usize {
    100_000 + 1_000 * n
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_square<T: nalgebra::Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::SizeMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(())
}
