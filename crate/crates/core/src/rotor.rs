//! The kicked rotor: classical standard map and its quantization on the torus.
//!
//! With `ħ = 2π/m²` the quantum rotor lives on `M = m²` position points
//! `x_j = 2πj/M` (equivalently `M` momenta `ħn`), and the `2π × 2π` phase
//! space splits into `m × m` Planck cells, one Wannier state per cell.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::chaos::ChaosScanResult;
use crate::linalg::{diagonalize_unitary, CMatrix, Eigensystem};
use crate::math::{circular_mean, min_image, wrap};
use crate::ot::{torus_product_metric, wasserstein, DistanceConfig, Distribution, MetricSpace};
use crate::quantum::{
    gaussian_packet_state, Basis, EnsembleProjector, GaussianPacket, StateVector,
};
use crate::{Error, Result};

/// Largest `m` accepted before the `m⁴`-sized Floquet matrix is refused.
pub const MAX_RESOLUTION: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorParams {
    k: f64,
    m: usize,
    hbar: f64,
}

impl RotorParams {
    pub fn new(k: f64, m: usize) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "kick strength {k} must be finite and >= 0"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidInput(
                "resolution m must be at least 2".into(),
            ));
        }
        if m > MAX_RESOLUTION {
            return Err(Error::ResourceLimit(format!(
                "m = {m} exceeds {MAX_RESOLUTION}"
            )));
        }
        Ok(Self {
            k,
            m,
            hbar: TAU / (m * m) as f64,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Hilbert-space dimension `m²`.
    pub fn dim(&self) -> usize {
        self.m * self.m
    }

    /// Planck-cell side `2π/m`.
    pub fn cell_width(&self) -> f64 {
        TAU / self.m as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|j| TAU * j as f64 / n as f64).collect()
    }

    /// Momentum `ħn` folded into `(−π, π]`, used by the kinetic phase.
    pub fn symmetric_momentum(&self, n: usize) -> f64 {
        let p = self.hbar * n as f64;
        if p > PI {
            p - TAU
        } else {
            p
        }
    }
}

/// A phase-space point with both coordinates in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPoint {
    pub q: f64,
    pub p: f64,
}

impl ClassicalPoint {
    pub fn new(q: f64, p: f64) -> Self {
        Self {
            q: wrap(q, TAU),
            p: wrap(p, TAU),
        }
    }

    /// Euclidean minimal-image distance on the torus.
    pub fn torus_distance(&self, other: &ClassicalPoint) -> f64 {
        min_image(self.q, other.q, TAU).hypot(min_image(self.p, other.p, TAU))
    }
}

/// `p' = p + K sin q`, `q' = q + p'`, both mod 2π.
pub fn standard_map_step(pt: ClassicalPoint, k: f64) -> ClassicalPoint {
    let p = wrap(pt.p + k * pt.q.sin(), TAU);
    ClassicalPoint::new(pt.q + p, p)
}

/// Jacobian `∂(q', p')/∂(q, p)` of one map step, row-major.
pub fn standard_map_jacobian(pt: ClassicalPoint, k: f64) -> [[f64; 2]; 2] {
    let c = k * pt.q.cos();
    [[1.0 + c, 1.0], [c, 1.0]]
}

/// Finite-time Lyapunov exponent from the tangent map, per iteration.
pub fn finite_time_lyapunov(start: ClassicalPoint, k: f64, iterations: usize) -> f64 {
    let mut pt = start;
    let (mut dq, mut dp) = (1.0, 0.3);
    let n0 = dq.hypot(dp);
    dq /= n0;
    dp /= n0;
    let mut acc = 0.0;
    for _ in 0..iterations {
        let j = standard_map_jacobian(pt, k);
        let nq = j[0][0] * dq + j[0][1] * dp;
        let np = j[1][0] * dq + j[1][1] * dp;
        let norm = nq.hypot(np);
        acc += norm.ln();
        dq = nq / norm;
        dp = np / norm;
        pt = standard_map_step(pt, k);
    }
    acc / iterations.max(1) as f64
}

/// Dense unitary DFT between the position grid and the momentum states.
#[derive(Debug, Clone)]
struct Fourier {
    n: usize,
    twiddle: Vec<Complex64>,
}

impl Fourier {
    fn new(n: usize) -> Self {
        let twiddle = (0..n)
            .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / n as f64))
            .collect();
        Self { n, twiddle }
    }

    /// `ψ̃_n = ⟨p_n|ψ⟩ = M^{-1/2} Σ_j e^{−i2πjn/M} ψ_j`.
    fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.transform(x, false)
    }

    fn inverse(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.transform(x, true)
    }

    fn transform(&self, x: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let n = self.n;
        let s = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, v) in x.iter().enumerate() {
                    let t = self.twiddle[(j * k) % n];
                    acc += if inverse { t.conj() } else { t } * v;
                }
                acc * s
            })
            .collect()
    }
}

/// The quantum kicked rotor on the `m²`-point torus.
#[derive(Debug, Clone)]
pub struct QuantumRotor {
    params: RotorParams,
    fourier: Fourier,
    kick: Vec<Complex64>,
    kinetic: Vec<Complex64>,
}

impl QuantumRotor {
    pub fn new(params: RotorParams) -> Self {
        let n = params.dim();
        let h = params.hbar();
        let kick = params
            .grid()
            .iter()
            .map(|&x| Complex64::from_polar(1.0, -params.k() * x.cos() / h))
            .collect();
        let kinetic = (0..n)
            .map(|k| {
                let p = params.symmetric_momentum(k);
                Complex64::from_polar(1.0, -p * p / (2.0 * h))
            })
            .collect();
        Self {
            params,
            fourier: Fourier::new(n),
            kick,
            kinetic,
        }
    }

    pub fn params(&self) -> &RotorParams {
        &self.params
    }

    /// Position amplitudes to momentum amplitudes.
    pub fn to_momentum(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.fourier.forward(psi)
    }

    pub fn from_momentum(&self, phi: &[Complex64]) -> Vec<Complex64> {
        self.fourier.inverse(phi)
    }

    /// One period: kick in position space, then free rotation in momentum space.
    pub fn floquet_step(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.params.dim() {
            return Err(Error::SizeMismatch {
                expected: self.params.dim(),
                found: state.dim(),
            });
        }
        let kicked: Vec<Complex64> = state
            .amplitudes()
            .iter()
            .zip(&self.kick)
            .map(|(a, k)| a * k)
            .collect();
        let mut phi = self.fourier.forward(&kicked);
        phi.iter_mut().zip(&self.kinetic).for_each(|(a, k)| *a *= k);
        Ok(StateVector::from_raw(self.fourier.inverse(&phi)))
    }

    /// `U = F⁻¹ e^{−ip²/2ħ} F e^{−iK cos x/ħ}` in the position basis.
    ///
    /// The free part is a circulant, so the matrix costs `O(M²)`.
    pub fn floquet_matrix(&self) -> CMatrix {
        let n = self.params.dim();
        // c[d] = (1/M) Σ_k e^{i2πdk/M} e^{−ip_k²/2ħ}
        let circ: Vec<Complex64> = self
            .fourier
            .inverse(&self.kinetic)
            .into_iter()
            .map(|z| z / (n as f64).sqrt())
            .collect();
        CMatrix::from_fn(n, n, |j, k| circ[(j + n - k) % n] * self.kick[k])
    }

    /// Circular means `(⟨q̂⟩, ⟨p̂⟩)` over the position and momentum distributions.
    pub fn expectation_point(&self, state: &StateVector) -> Option<ClassicalPoint> {
        let n = self.params.dim();
        let grid = self.params.grid();
        let px: Vec<f64> = state.amplitudes().iter().map(|z| z.norm_sqr()).collect();
        let pp: Vec<f64> = self
            .to_momentum(state.amplitudes())
            .iter()
            .map(|z| z.norm_sqr())
            .collect();
        let moms: Vec<f64> = (0..n).map(|k| self.params.hbar() * k as f64).collect();
        Some(ClassicalPoint::new(
            circular_mean(&px, &grid)?,
            circular_mean(&pp, &moms)?,
        ))
    }

    /// Maximally localized packet `exp[−(x−q)²/(2ħ) + ip(x−q)/ħ]` on the grid.
    pub fn packet(&self, at: ClassicalPoint) -> Result<StateVector> {
        let pk = GaussianPacket::maximally_localized(at.q, at.p, self.params.hbar())?;
        gaussian_packet_state(&pk, &self.params.grid(), self.params.hbar())
    }
}

/// The `m × m` Wannier cells of the rotor.
///
/// Cell `(ℓ, ϑ)` groups momenta `ħ(ℓm + k)`, `k < m`, with the phase
/// `e^{−i2πkϑ/m}`, so it sits at `X = 2πϑ/m`, `P = 2πℓ/m + π(m−1)/m²`.
/// Labels are ordered `ℓ·m + ϑ`; the metric is the Euclidean minimal-image
/// distance between cell centres.
#[derive(Debug, Clone)]
pub struct RotorBasis {
    m: usize,
    fourier: Fourier,
    cell_twiddle: Vec<Complex64>,
    space: MetricSpace,
}

pub fn rotor_wannier_basis(m: usize) -> Result<RotorBasis> {
    if m < 2 {
        return Err(Error::InvalidInput(
            "resolution m must be at least 2".into(),
        ));
    }
    let centers: Vec<Vec<f64>> = (0..m * m)
        .map(|idx| {
            let (x, p) = cell_center(m, idx / m, idx % m);
            vec![x, p]
        })
        .collect();
    let space = torus_product_metric(&centers, &[TAU, TAU], &[true, true], 1.0)?;
    Ok(RotorBasis {
        m,
        fourier: Fourier::new(m * m),
        cell_twiddle: (0..m)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64))
            .collect(),
        space,
    })
}

/// `(X, P)` centre of cell `(ℓ, ϑ)`.
pub fn cell_center(m: usize, ell: usize, theta: usize) -> (f64, f64) {
    let mf = m as f64;
    (
        TAU * theta as f64 / mf,
        TAU * ell as f64 / mf + PI * (mf - 1.0) / (mf * mf),
    )
}

impl RotorBasis {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Cell states as columns over the position grid.
    pub fn matrix(&self) -> CMatrix {
        let m = self.m;
        let n = m * m;
        let s = 1.0 / (m as f64).sqrt();
        let mut out = CMatrix::zeros(n, n);
        for ell in 0..m {
            for theta in 0..m {
                let mut phi = vec![Complex64::new(0.0, 0.0); n];
                for k in 0..m {
                    phi[ell * m + k] = self.cell_twiddle[(k * theta) % m].conj() * s;
                }
                let x = self.fourier.inverse(&phi);
                for (r, z) in x.into_iter().enumerate() {
                    out[(r, ell * m + theta)] = z;
                }
            }
        }
        out
    }
}

impl Basis for RotorBasis {
    fn hilbert_dim(&self) -> usize {
        self.m * self.m
    }

    fn len(&self) -> usize {
        self.m * self.m
    }

    fn space(&self) -> &MetricSpace {
        &self.space
    }

    fn analyze(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let m = self.m;
        let phi = self.fourier.forward(psi);
        let s = 1.0 / (m as f64).sqrt();
        let mut out = vec![Complex64::new(0.0, 0.0); m * m];
        for ell in 0..m {
            for theta in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    acc += self.cell_twiddle[(k * theta) % m] * phi[ell * m + k];
                }
                out[ell * m + theta] = acc * s;
            }
        }
        out
    }
}

/// One row of the two-packet experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceRow {
    pub kick: usize,
    /// Torus distance between the classical trajectories.
    pub classical: f64,
    /// Wasserstein distance between the Wannier distributions.
    pub physical: f64,
    /// Torus distance between `(⟨q̂⟩, ⟨p̂⟩)` of the two packets.
    pub expectation: f64,
    /// `|⟨ψ1|ψ2⟩|`.
    pub overlap: f64,
}

/// Evolves packets at `start1`, `start2` and their classical counterparts,
/// recording three distances before each of `n_kicks + 1` kicks.
pub fn three_distance_experiment(
    params: RotorParams,
    start1: ClassicalPoint,
    start2: ClassicalPoint,
    n_kicks: usize,
    cfg: DistanceConfig,
) -> Result<Vec<DistanceRow>> {
    let rotor = QuantumRotor::new(params);
    let basis = rotor_wannier_basis(params.m())?;
    let mut psi1 = rotor.packet(start1)?;
    let mut psi2 = rotor.packet(start2)?;
    let (mut c1, mut c2) = (start1, start2);
    let mut rows = Vec::with_capacity(n_kicks + 1);
    for kick in 0..=n_kicks {
        let p = Distribution::from_masses(basis.probabilities(psi1.amplitudes()))?;
        let q = Distribution::from_masses(basis.probabilities(psi2.amplitudes()))?;
        let physical = wasserstein(&p, &q, basis.space(), cfg)?;
        let expectation = match (
            rotor.expectation_point(&psi1),
            rotor.expectation_point(&psi2),
        ) {
            (Some(a), Some(b)) => a.torus_distance(&b),
            _ => f64::NAN,
        };
        rows.push(DistanceRow {
            kick,
            classical: c1.torus_distance(&c2),
            physical,
            expectation,
            overlap: psi1.inner(&psi2)?.norm(),
        });
        if kick < n_kicks {
            psi1 = rotor.floquet_step(&psi1)?;
            psi2 = rotor.floquet_step(&psi2)?;
            c1 = standard_map_step(c1, params.k());
            c2 = standard_map_step(c2, params.k());
        }
    }
    Ok(rows)
}

/// The default pair: `(4.7, 3)` and its neighbour one cell up and right.
pub fn default_starts(m: usize) -> (ClassicalPoint, ClassicalPoint) {
    let w = TAU / m as f64;
    (
        ClassicalPoint::new(4.7, 3.0),
        ClassicalPoint::new(4.7 + w, 3.0 + w),
    )
}

/// How the long-time state is obtained in a chaos scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LongTimeAverage {
    /// Exact infinite-time average from the Floquet eigensystem.
    DiagonalEnsemble,
    /// Mean of the Wannier distributions before each of the first `n` kicks.
    Stroboscopic(usize),
}

/// Shared state of a rotor chaos scan: one Floquet diagonalization reused by
/// every initial cell.
#[derive(Debug)]
pub struct RotorScan {
    params: RotorParams,
    rotor: QuantumRotor,
    basis: RotorBasis,
    mode: LongTimeAverage,
    projector: Option<EnsembleProjector>,
    floquet: Option<CMatrix>,
    cfg: DistanceConfig,
}

impl RotorScan {
    pub fn new(params: RotorParams, mode: LongTimeAverage, cfg: DistanceConfig) -> Result<Self> {
        let rotor = QuantumRotor::new(params);
        let basis = rotor_wannier_basis(params.m())?;
        let u = rotor.floquet_matrix();
        let (projector, floquet) = match mode {
            LongTimeAverage::DiagonalEnsemble => {
                let eig: Eigensystem = diagonalize_unitary(&u)?;
                (Some(EnsembleProjector::new(&eig, &basis)?), None)
            }
            LongTimeAverage::Stroboscopic(n) => {
                if n == 0 {
                    return Err(Error::InvalidInput(
                        "stroboscopic average needs at least one kick".into(),
                    ));
                }
                (None, Some(u))
            }
        };
        Ok(Self {
            params,
            rotor,
            basis,
            mode,
            projector,
            floquet,
            cfg,
        })
    }

    pub fn params(&self) -> &RotorParams {
        &self.params
    }

    pub fn basis(&self) -> &RotorBasis {
        &self.basis
    }

    /// Long-time Wannier distribution of the packet started at the centre of cell `(ℓ, ϑ)`.
    pub fn long_time_distribution(&self, ell: usize, theta: usize) -> Result<Distribution> {
        let (x, p) = cell_center(self.params.m(), ell, theta);
        let psi = self.rotor.packet(ClassicalPoint::new(x, p))?;
        match (self.mode, &self.projector, &self.floquet) {
            (LongTimeAverage::DiagonalEnsemble, Some(proj), _) => proj.project(&psi),
            (LongTimeAverage::Stroboscopic(n), _, Some(u)) => {
                let mut acc = vec![0.0; self.basis.len()];
                let mut state = psi;
                for step in 0..n {
                    for (a, w) in acc
                        .iter_mut()
                        .zip(self.basis.probabilities(state.amplitudes()))
                    {
                        *a += w;
                    }
                    if step + 1 < n {
                        state = state.evolve(u)?;
                    }
                }
                Distribution::from_masses(acc)
            }
            _ => unreachable!("scan mode and cached operators always agree"),
        }
    }

    /// `Υ` of one initial cell against the uniform distribution.
    pub fn cell_upsilon(&self, ell: usize, theta: usize) -> Result<f64> {
        let p = self.long_time_distribution(ell, theta)?;
        wasserstein(
            &Distribution::uniform(self.basis.len()),
            &p,
            self.basis.space(),
            self.cfg,
        )
    }

    /// Packs row-major values (`ℓ` rows, `ϑ` columns) into a scan result.
    pub fn assemble(&self, values: Vec<f64>) -> ChaosScanResult {
        let m = self.params.m();
        let mode = match self.mode {
            LongTimeAverage::DiagonalEnsemble => "diagonal-ensemble".into(),
            LongTimeAverage::Stroboscopic(n) => format!("stroboscopic-{n}"),
        };
        ChaosScanResult {
            rows: m,
            cols: m,
            values: values.into_iter().map(Some).collect(),
            row_coords: (0..m).map(|l| cell_center(m, l, 0).1).collect(),
            col_coords: (0..m).map(|t| cell_center(m, 0, t).0).collect(),
            metadata: vec![
                ("model".into(), "kicked-rotor".into()),
                ("K".into(), format!("{}", self.params.k())),
                ("m".into(), format!("{m}")),
                ("lambda".into(), format!("{}", self.cfg.lambda())),
                ("reference".into(), "uniform".into()),
                ("average".into(), mode),
            ],
        }
    }
}

/// Sequential `m × m` scan of `Υ` over every initial cell.
pub fn chaos_scan(
    params: RotorParams,
    mode: LongTimeAverage,
    cfg: DistanceConfig,
) -> Result<ChaosScanResult> {
    let scan = RotorScan::new(params, mode, cfg)?;
    let m = params.m();
    let mut values = Vec::with_capacity(m * m);
    for ell in 0..m {
        for theta in 0..m {
            values.push(scan.cell_upsilon(ell, theta)?);
        }
    }
    Ok(scan.assemble(values))
}

/// Cells `(ℓ, ϑ)` whose centres have the smallest and largest classical
/// finite-time Lyapunov exponent: a regular and a chaotic showcase.
pub fn showcase_cells(params: RotorParams, iterations: usize) -> ((usize, usize), (usize, usize)) {
    let m = params.m();
    let mut best = ((0, 0), f64::INFINITY);
    let mut worst = ((0, 0), f64::NEG_INFINITY);
    for ell in 0..m {
        for theta in 0..m {
            let (x, p) = cell_center(m, ell, theta);
            let l = finite_time_lyapunov(ClassicalPoint::new(x, p), params.k(), iterations);
            if l < best.1 {
                best = ((ell, theta), l);
            }
            if l > worst.1 {
                worst = ((ell, theta), l);
            }
        }
    }
    (best.0, worst.0)
}
