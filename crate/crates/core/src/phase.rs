//! Phase-space cell bases built from grouped discrete Fourier transforms.
//!
//! For one degree of freedom the `L²` number states `|n⟩` are cut into `L`
//! consecutive groups; inside group `ℓ` a length-`L` Fourier transform yields
//!
//! ```text
//! |ℓ,ϑ⟩ = L^{-1/2} Σ_{k<L} e^{i2πkϑ/L} |k + ℓL⟩,
//! ```
//!
//! a state whose number lies in `[ℓL, ℓL + L)` and whose phase is peaked at
//! `2πϑ/L`. Two degrees of freedom use the tensor product over the extended
//! index `N₁·L² + N₂`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Cell coordinates for one degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseCellIndex {
    /// Number (coarse) index.
    pub ell: usize,
    /// Phase index.
    pub theta: usize,
}

/// Where the phase grid `θ_M = θ⁽⁰⁾ + 2πM/L²` starts when measuring phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseWindow {
    /// The same origin for every cell.
    Fixed(f64),
    /// Per-cell origin `2πϑ/L − π`, which centres each cell's phase window on
    /// its own peak.
    Shifted,
}

impl PhaseWindow {
    pub fn origin(&self, l: usize, vartheta: usize) -> f64 {
        match *self {
            PhaseWindow::Fixed(t) => t,
            PhaseWindow::Shifted => TAU * vartheta as f64 / l as f64 - PI,
        }
    }
}

/// The orthonormal cell basis for one or two degrees of freedom.
///
/// Kept implicit: [`PhaseCellBasis::analyze`] applies the adjoint in
/// `O(L^{2·dof} · L)` operations and [`PhaseCellBasis::matrix`] materializes it.
#[derive(Debug, Clone)]
pub struct PhaseCellBasis {
    l: usize,
    dof: usize,
    window: PhaseWindow,
    twiddle: Vec<Complex64>,
}

/// One-degree-of-freedom lattice on `L²` number states.
pub fn build_phase_lattice_1d(l: usize, window: PhaseWindow) -> Result<PhaseCellBasis> {
    PhaseCellBasis::new(l, 1, window)
}

/// Two-degree-of-freedom lattice on `L⁴` extended Fock states, both phase windows shifted.
pub fn build_phase_lattice_2d(l: usize) -> Result<PhaseCellBasis> {
    PhaseCellBasis::new(l, 2, PhaseWindow::Shifted)
}

impl PhaseCellBasis {
    fn new(l: usize, dof: usize, window: PhaseWindow) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidInput(
                "cell resolution L must be at least 2".into(),
            ));
        }
        let twiddle = (0..l)
            .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / l as f64))
            .collect();
        Ok(Self {
            l,
            dof,
            window,
            twiddle,
        })
    }

    pub fn resolution(&self) -> usize {
        self.l
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn window(&self) -> PhaseWindow {
        self.window
    }

    /// `L^{2·dof}`: both the Hilbert-space dimension and the number of cells.
    pub fn dim(&self) -> usize {
        self.l.pow(2 * self.dof as u32)
    }

    /// Position of cell `(ℓ, ϑ)` (one dof) in the analysis output.
    pub fn index_1d(&self, c: PhaseCellIndex) -> usize {
        c.ell * self.l + c.theta
    }

    /// Position of cell `(ℓ₁, ϑ₁; ℓ₂, ϑ₂)` in the analysis output.
    pub fn index_2d(&self, a: PhaseCellIndex, b: PhaseCellIndex) -> usize {
        ((a.ell * self.l + a.theta) * self.l + b.ell) * self.l + b.theta
    }

    /// Inverse of the index maps: one entry per dof.
    pub fn cell(&self, index: usize) -> Vec<PhaseCellIndex> {
        let l = self.l;
        let mut out = Vec::with_capacity(self.dof);
        let mut rest = index;
        let mut parts = Vec::with_capacity(2 * self.dof);
        for _ in 0..2 * self.dof {
            parts.push(rest % l);
            rest /= l;
        }
        parts.reverse();
        for d in 0..self.dof {
            out.push(PhaseCellIndex {
                ell: parts[2 * d],
                theta: parts[2 * d + 1],
            });
        }
        out
    }

    /// Number-state index `N₁·L² + N₂` (or `n` for one dof).
    pub fn fock_index(&self, n: &[usize]) -> usize {
        n.iter().fold(0, |acc, &x| acc * self.l * self.l + x)
    }

    /// `⟨cell|ψ⟩` for every cell, `ψ` given on the number states.
    pub fn analyze(&self, psi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(psi.len(), self.dim(), "state length must be L^(2 dof)");
        let l = self.l;
        let l2 = l * l;
        match self.dof {
            1 => {
                let mut out = vec![Complex64::new(0.0, 0.0); l2];
                for ell in 0..l {
                    self.dft_into(
                        &psi[ell * l..(ell + 1) * l],
                        &mut out[ell * l..(ell + 1) * l],
                    );
                }
                out
            }
            _ => {
                // Transform the second dof inside each N₁ row, then the first.
                let mut stage = vec![Complex64::new(0.0, 0.0); l2 * l2];
                for n1 in 0..l2 {
                    let row = &psi[n1 * l2..(n1 + 1) * l2];
                    let dst = &mut stage[n1 * l2..(n1 + 1) * l2];
                    for ell in 0..l {
                        self.dft_into(
                            &row[ell * l..(ell + 1) * l],
                            &mut dst[ell * l..(ell + 1) * l],
                        );
                    }
                }
                let mut out = vec![Complex64::new(0.0, 0.0); l2 * l2];
                let mut col = vec![Complex64::new(0.0, 0.0); l];
                let mut res = vec![Complex64::new(0.0, 0.0); l];
                for c2 in 0..l2 {
                    for ell1 in 0..l {
                        for k in 0..l {
                            col[k] = stage[(ell1 * l + k) * l2 + c2];
                        }
                        self.dft_into(&col, &mut res);
                        for (t1, v) in res.iter().enumerate() {
                            out[(ell1 * l + t1) * l2 + c2] = *v;
                        }
                    }
                }
                out
            }
        }
    }

    /// `out[ϑ] = L^{-1/2} Σ_k e^{−i2πkϑ/L} x[k]`.
    fn dft_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        let l = self.l;
        let s = 1.0 / (l as f64).sqrt();
        for (t, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in x.iter().enumerate() {
                acc += self.twiddle[(k * t) % l] * v;
            }
            *o = acc * s;
        }
    }

    /// Cell `(ℓ, ϑ)` of one dof as a vector over the `L²` number states.
    pub fn vector_1d(l: usize, c: PhaseCellIndex) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); l * l];
        let s = 1.0 / (l as f64).sqrt();
        for k in 0..l {
            v[k + c.ell * l] = Complex64::from_polar(s, TAU * (k * c.theta) as f64 / l as f64);
        }
        v
    }

    /// All cell vectors as columns, in analysis order.
    pub fn matrix(&self) -> CMatrix {
        let l = self.l;
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for idx in 0..n {
            let cells = self.cell(idx);
            let factors: Vec<Vec<Complex64>> =
                cells.iter().map(|&c| Self::vector_1d(l, c)).collect();
            if self.dof == 1 {
                for (r, z) in factors[0].iter().enumerate() {
                    m[(r, idx)] = *z;
                }
            } else {
                for (r1, a) in factors[0].iter().enumerate() {
                    if a.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (r2, b) in factors[1].iter().enumerate() {
                        m[(r1 * l * l + r2, idx)] = a * b;
                    }
                }
            }
        }
        m
    }
}

/// Number and phase moments of a single cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMoments {
    pub cell: PhaseCellIndex,
    pub mean_n: f64,
    pub mean_theta: f64,
    /// `⟨θ̂⟩ − 2πϑ/L`.
    pub c_theta: f64,
    /// Standard deviation of `N̂` divided by `N = L² − 1`.
    pub delta_n: f64,
    pub delta_theta: f64,
}

/// Moments of one dof of a cell basis, measured on the phase grid `window`.
///
/// `⟨θ̂⟩` uses the phase states `|θ_M⟩ = L^{-1} Σ_n e^{inθ_M} |n⟩` with
/// `θ_M = θ⁽⁰⁾ + 2πM/L²`.
pub fn cell_moments(l: usize, window: PhaseWindow, c: PhaseCellIndex) -> CellMoments {
    let v = PhaseCellBasis::vector_1d(l, c);
    let dim = l * l;
    let big_n = (dim - 1) as f64;
    let (mut m1, mut m2) = (0.0, 0.0);
    for (n, z) in v.iter().enumerate() {
        let w = z.norm_sqr();
        m1 += w * n as f64;
        m2 += w * (n * n) as f64;
    }
    let theta0 = window.origin(l, c.theta);
    let (mut t1, mut t2) = (0.0, 0.0);
    for m in 0..dim {
        let th = theta0 + TAU * m as f64 / dim as f64;
        let mut amp = Complex64::new(0.0, 0.0);
        for (n, z) in v.iter().enumerate() {
            if z.norm_sqr() > 0.0 {
                amp += Complex64::from_polar(1.0, -(n as f64) * th) * z;
            }
        }
        let w = amp.norm_sqr() / dim as f64;
        t1 += w * th;
        t2 += w * th * th;
    }
    CellMoments {
        cell: c,
        mean_n: m1,
        mean_theta: t1,
        c_theta: t1 - TAU * c.theta as f64 / l as f64,
        delta_n: (m2 - m1 * m1).max(0.0).sqrt() / big_n,
        delta_theta: (t2 - t1 * t1).max(0.0).sqrt(),
    }
}

/// Localization summary for one degree of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    pub l: usize,
    pub cells: Vec<CellMoments>,
    /// Largest `Δn` over the cells.
    pub delta_n: f64,
    /// Largest `Δθ` over the cells.
    pub delta_theta: f64,
    /// `A` in `Δθ² ≈ πA/L`, i.e. `L·Δθ²/π`.
    pub fitted_a: f64,
}

/// Per-dof number and phase fluctuations of every cell.
///
/// The two-dof basis is a tensor product, so each of its marginals equals the
/// one-dof lattice; the report is computed on that factor once per dof.
pub fn localization_report(basis: &PhaseCellBasis) -> Vec<LocalizationReport> {
    let l = basis.resolution();
    let mut cells = Vec::with_capacity(l * l);
    for ell in 0..l {
        for theta in 0..l {
            cells.push(cell_moments(
                l,
                basis.window(),
                PhaseCellIndex { ell, theta },
            ));
        }
    }
    let delta_n = cells.iter().map(|c| c.delta_n).fold(0.0, f64::max);
    let delta_theta = cells.iter().map(|c| c.delta_theta).fold(0.0, f64::max);
    let report = LocalizationReport {
        l,
        cells,
        delta_n,
        delta_theta,
        fitted_a: l as f64 * delta_theta * delta_theta / PI,
    };
    vec![report; basis.dof()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual;

    #[test]
    fn small_lattices_are_unitary() {
        for l in [2, 3] {
            assert!(
                unitarity_residual(
                    &build_phase_lattice_1d(l, PhaseWindow::Shifted)
                        .unwrap()
                        .matrix()
                ) < 1e-12
            );
            assert!(unitarity_residual(&build_phase_lattice_2d(l).unwrap().matrix()) < 1e-12);
        }
    }

    #[test]
    fn analyze_matches_matrix_adjoint() {
        for b in [
            build_phase_lattice_1d(4, PhaseWindow::Shifted).unwrap(),
            build_phase_lattice_2d(3).unwrap(),
        ] {
            let n = b.dim();
            let psi: Vec<Complex64> = (0..n)
                .map(|k| Complex64::new((k as f64).sin(), (2.0 * k as f64).cos()))
                .collect();
            let fast = b.analyze(&psi);
            let slow = b.matrix().adjoint() * nalgebra::DVector::from_column_slice(&psi);
            for (a, s) in fast.iter().zip(slow.iter()) {
                assert!((a - s).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn number_mean_at_l4() {
        for theta in 0..4 {
            let m = cell_moments(4, PhaseWindow::Shifted, PhaseCellIndex { ell: 2, theta });
            assert!((m.mean_n - 9.5).abs() < 1e-12);
        }
    }

    #[test]
    fn index_roundtrip() {
        let b = build_phase_lattice_2d(3).unwrap();
        for idx in 0..b.dim() {
            let c = b.cell(idx);
            assert_eq!(b.index_2d(c[0], c[1]), idx);
        }
        assert_eq!(b.fock_index(&[7, 0]), 63);
    }

    #[test]
    fn rejects_tiny_resolution() {
        assert!(build_phase_lattice_1d(1, PhaseWindow::Shifted).is_err());
    }
}
