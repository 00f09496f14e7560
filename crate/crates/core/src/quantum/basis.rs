use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{DensityMatrix, StateVector};
use crate::linalg::{unitarity_residual, CMatrix};
use crate::ot::{Distribution, MetricSpace};
use crate::{Error, Result};

/// An orthonormal measurement basis whose labels carry a metric.
///
/// `hilbert_dim` may be smaller than `len`: a state may live in a subspace of
/// the space the basis spans, in which case it is embedded before analysis.
pub trait Basis {
    fn hilbert_dim(&self) -> usize;

    /// Number of basis vectors (labels).
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn space(&self) -> &MetricSpace;

    /// Coefficients `⟨ξ_i|ψ⟩` for every label `i`.
    fn analyze(&self, psi: &[Complex64]) -> Vec<Complex64>;

    fn probabilities(&self, psi: &[Complex64]) -> Vec<f64> {
        self.analyze(psi).iter().map(|z| z.norm_sqr()).collect()
    }
}

#[derive(Debug, Clone)]
enum Vectors {
    Computational(usize),
    Dense(CMatrix),
}

/// A basis given either implicitly (the computational basis) or as the
/// columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct LabeledBasis {
    vectors: Vectors,
    space: MetricSpace,
}

impl LabeledBasis {
    pub fn computational(space: MetricSpace) -> Self {
        Self {
            vectors: Vectors::Computational(space.len()),
            space,
        }
    }

    /// Columns of `vectors` are the basis states; orthonormality is checked to 1e-8.
    pub fn dense(vectors: CMatrix, space: MetricSpace) -> Result<Self> {
        if vectors.ncols() != space.len() || vectors.nrows() != vectors.ncols() {
            return Err(Error::SizeMismatch {
                expected: space.len(),
                found: vectors.ncols(),
            });
        }
        let res = unitarity_residual(&vectors);
        if res > 1e-8 {
            return Err(Error::NotStructured {
                kind: "orthonormal",
                residual: res,
            });
        }
        Ok(Self {
            vectors: Vectors::Dense(vectors),
            space,
        })
    }

    /// Basis vectors as matrix columns (materialized for the computational basis).
    pub fn matrix(&self) -> CMatrix {
        match &self.vectors {
            Vectors::Computational(n) => CMatrix::identity(*n, *n),
            Vectors::Dense(m) => m.clone(),
        }
    }
}

impl Basis for LabeledBasis {
    fn hilbert_dim(&self) -> usize {
        self.space.len()
    }

    fn len(&self) -> usize {
        self.space.len()
    }

    fn space(&self) -> &MetricSpace {
        &self.space
    }

    fn analyze(&self, psi: &[Complex64]) -> Vec<Complex64> {
        match &self.vectors {
            Vectors::Computational(_) => psi.to_vec(),
            Vectors::Dense(m) => (0..m.ncols())
                .map(|i| m.column(i).iter().zip(psi).map(|(b, a)| b.conj() * a).sum())
                .collect(),
        }
    }
}

/// `p_i = |⟨ξ_i|ψ⟩|²`.
pub fn project_probabilities<B: Basis + ?Sized>(
    state: &StateVector,
    basis: &B,
) -> Result<Distribution> {
    check_dim(state.dim(), basis)?;
    Distribution::new(basis.probabilities(state.amplitudes()))
}

/// `p_i = ⟨ξ_i|ρ|ξ_i⟩`.
pub fn project_probabilities_mixed<B: Basis + ?Sized>(
    rho: &DensityMatrix,
    basis: &B,
) -> Result<Distribution> {
    check_dim(rho.dim(), basis)?;
    let m = rho.matrix();
    let n = m.nrows();
    // Rows of B†ρ, then one analysis per label of the conjugated row.
    let cols: Vec<Vec<Complex64>> = (0..n)
        .map(|k| basis.analyze(m.column(k).as_slice()))
        .collect();
    let mut p = Vec::with_capacity(basis.len());
    let mut row = alloc::vec![Complex64::new(0.0, 0.0); n];
    for i in 0..basis.len() {
        for (r, c) in row.iter_mut().zip(&cols) {
            *r = c[i].conj();
        }
        p.push(basis.analyze(&row)[i].re.max(0.0));
    }
    Distribution::new(p)
}

fn check_dim<B: Basis + ?Sized>(dim: usize, basis: &B) -> Result<()> {
    if dim != basis.hilbert_dim() {
        return Err(Error::InvalidInput(format!(
            "state dimension {dim} does not match basis dimension {}",
            basis.hilbert_dim()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ot::line_metric;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn hadamard_basis() -> LabeledBasis {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(FRAC_1_SQRT_2),
                c(FRAC_1_SQRT_2),
                c(FRAC_1_SQRT_2),
                c(-FRAC_1_SQRT_2),
            ],
        );
        LabeledBasis::dense(h, line_metric(&[0.0, 1.0]).unwrap()).unwrap()
    }

    #[test]
    fn basis_state_gives_point_mass() {
        let b = LabeledBasis::computational(line_metric(&[0.0, 1.0, 2.0]).unwrap());
        let p = project_probabilities(&StateVector::basis_state(3, 1), &b).unwrap();
        assert_eq!(p.weights(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn superposition_splits_evenly() {
        let b = LabeledBasis::computational(line_metric(&[0.0, 1.0, 2.0]).unwrap());
        let s = StateVector::normalized(alloc::vec![c(1.0), c(1.0), c(0.0)]).unwrap();
        let p = project_probabilities(&s, &b).unwrap();
        assert!((p.weights()[0] - 0.5).abs() < 1e-15 && (p.weights()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mixed_projection_matches_pure() {
        let b = hadamard_basis();
        let s = StateVector::normalized(alloc::vec![c(0.3), Complex64::new(0.1, 0.8)]).unwrap();
        let pure = project_probabilities(&s, &b).unwrap();
        let mixed = project_probabilities_mixed(&DensityMatrix::pure(&s), &b).unwrap();
        for (a, m) in pure.weights().iter().zip(mixed.weights()) {
            assert!((a - m).abs() < 1e-12);
        }
        let uniform = project_probabilities_mixed(&DensityMatrix::maximally_mixed(2), &b).unwrap();
        assert!(uniform.weights().iter().all(|w| (w - 0.5).abs() < 1e-12));
    }

    #[test]
    fn non_orthonormal_columns_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(LabeledBasis::dense(m, line_metric(&[0.0, 1.0]).unwrap()).is_err());
    }
}
