use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{BHParams, FockBasis};
use crate::ot::{torus_product_metric, MetricSpace};
use crate::phase::{build_phase_lattice_2d, PhaseCellBasis, PhaseCellIndex};
use crate::quantum::Basis;
use crate::{Error, Result};

/// `d = (1/L) √(Σ_i Δℓ_i² + Δϑ_i²)` over the `L⁴` cells, `Δϑ` periodic in `L`.
pub fn bh_cell_metric(l: usize) -> Result<MetricSpace> {
    let lf = l as f64;
    let mut points = Vec::with_capacity(l.pow(4));
    for l1 in 0..l {
        for t1 in 0..l {
            for l2 in 0..l {
                for t2 in 0..l {
                    points.push(vec![l1 as f64, t1 as f64, l2 as f64, t2 as f64]);
                }
            }
        }
    }
    torus_product_metric(&points, &[lf; 4], &[false, true, false, true], 1.0 / lf)
}

/// Two-mode phase cells for the `N = L² − 1` boson problem.
///
/// Physical states `|N₁,N₂,N−N₁−N₂⟩` are embedded in the `L⁴`-dimensional
/// space of `|N₁,N₂⟩` with `0 ≤ N₁,N₂ < L²`, and analysed there; labels follow
/// [`PhaseCellBasis::index_2d`].
#[derive(Debug, Clone)]
pub struct BhCellBasis {
    l: usize,
    fock: FockBasis,
    cells: PhaseCellBasis,
    embed: Vec<usize>,
    space: MetricSpace,
}

impl BhCellBasis {
    pub fn new(params: &BHParams) -> Result<Self> {
        let l = params.resolution().ok_or_else(|| {
            Error::InvalidInput(format!(
                "N = {} is not of the form L² − 1",
                params.particles()
            ))
        })?;
        let fock = FockBasis::new(params.particles());
        let cells = build_phase_lattice_2d(l)?;
        let embed = fock
            .states()
            .iter()
            .map(|s| cells.fock_index(&[s[0], s[1]]))
            .collect();
        Ok(Self {
            l,
            fock,
            cells,
            embed,
            space: bh_cell_metric(l)?,
        })
    }

    pub fn resolution(&self) -> usize {
        self.l
    }

    pub fn fock(&self) -> &FockBasis {
        &self.fock
    }

    pub fn cells(&self) -> &PhaseCellBasis {
        &self.cells
    }

    /// Extended-space index of each physical Fock state.
    pub fn embedding(&self) -> &[usize] {
        &self.embed
    }

    pub fn embed(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut ext = vec![Complex64::new(0.0, 0.0); self.cells.dim()];
        for (&k, z) in self.embed.iter().zip(psi) {
            ext[k] = *z;
        }
        ext
    }

    /// `(ℓ₁, ϑ₁, ℓ₂, ϑ₂)` of a label.
    pub fn label(&self, index: usize) -> [usize; 4] {
        let c = self.cells.cell(index);
        [c[0].ell, c[0].theta, c[1].ell, c[1].theta]
    }

    pub fn index(&self, label: [usize; 4]) -> usize {
        self.cells.index_2d(
            PhaseCellIndex {
                ell: label[0],
                theta: label[1],
            },
            PhaseCellIndex {
                ell: label[2],
                theta: label[3],
            },
        )
    }

    /// Cell state projected on the physical subspace, in Fock-basis order.
    pub fn physical_part(&self, index: usize) -> Vec<Complex64> {
        let c = self.cells.cell(index);
        let a = PhaseCellBasis::vector_1d(self.l, c[0]);
        let b = PhaseCellBasis::vector_1d(self.l, c[1]);
        let l2 = self.l * self.l;
        self.embed.iter().map(|&k| a[k / l2] * b[k % l2]).collect()
    }
}

impl Basis for BhCellBasis {
    fn hilbert_dim(&self) -> usize {
        self.fock.len()
    }

    fn len(&self) -> usize {
        self.cells.dim()
    }

    fn space(&self) -> &MetricSpace {
        &self.space
    }

    fn analyze(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.cells.analyze(&self.embed(psi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analysis_matches_physical_parts() {
        let p = BHParams::new(1.0, 2.0, 3).unwrap();
        let b = BhCellBasis::new(&p).unwrap();
        let n = b.hilbert_dim();
        let psi: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new((k as f64).sin(), 0.1 * k as f64))
            .collect();
        let fast = b.analyze(&psi);
        for idx in [0, 7, 40, 80] {
            let slow: Complex64 = b
                .physical_part(idx)
                .iter()
                .zip(&psi)
                .map(|(c, z)| c.conj() * z)
                .sum();
            assert!((fast[idx] - slow).norm() < 1e-12);
        }
    }

    #[test]
    fn metric_values() {
        let m = bh_cell_metric(4).unwrap();
        let p = BHParams::new(1.0, 2.0, 4).unwrap();
        let b = BhCellBasis::new(&p).unwrap();
        let i = b.index([0, 0, 0, 0]);
        assert!((m.get(i, b.index([0, 3, 0, 0])) - 0.25).abs() < 1e-15);
        assert!((m.get(i, b.index([3, 0, 0, 0])) - 0.75).abs() < 1e-15);
        assert!((m.get(i, b.index([1, 1, 1, 1])) - 0.5).abs() < 1e-15);
    }
}
