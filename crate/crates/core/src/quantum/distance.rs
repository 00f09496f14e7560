#[allow(unused_imports)]
use num_traits::Float;

use super::{
    project_probabilities, project_probabilities_mixed, Basis, DensityMatrix, StateVector,
};
use crate::ot::{wasserstein, DistanceConfig};
use crate::Result;

/// Wasserstein distance between the distributions two states induce on `basis`.
pub fn physical_distance<B: Basis + ?Sized>(
    psi1: &StateVector,
    psi2: &StateVector,
    basis: &B,
    cfg: DistanceConfig,
) -> Result<f64> {
    let p = project_probabilities(psi1, basis)?;
    let q = project_probabilities(psi2, basis)?;
    wasserstein(&p, &q, basis.space(), cfg)
}

pub fn physical_distance_mixed<B: Basis + ?Sized>(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    basis: &B,
    cfg: DistanceConfig,
) -> Result<f64> {
    let p = project_probabilities_mixed(rho1, basis)?;
    let q = project_probabilities_mixed(rho2, basis)?;
    wasserstein(&p, &q, basis.space(), cfg)
}

/// `√(1 − |⟨ψ1|ψ2⟩|²)`: one for orthogonal states, zero for equal rays.
///
/// This is the chordal form rather than the geodesic `arccos|⟨ψ1|ψ2⟩|`.
pub fn fubini_study(psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    let overlap = psi1.inner(psi2)?.norm_sqr();
    Ok((1.0 - overlap).max(0.0).sqrt())
}
