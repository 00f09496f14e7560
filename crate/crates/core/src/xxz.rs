//! Open XXZ spin-1/2 chain with a single-site field, restricted to a fixed
//! number of up spins.
//!
//! `H = J₁ Σ (s^x_i s^x_{i+1} + s^y_i s^y_{i+1}) + J₂ Σ s^z_i s^z_{i+1} + ε s^z_{i*}`

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::chaos::upsilon_of;
use crate::linalg::{diagonalize_real_symmetric, Eigensystem};
use crate::math::binomial;
use crate::ot::{occupied_positions_metric, DistanceConfig, Distribution, MetricSpace};
use crate::quantum::{Basis, EnsembleProjector, LabeledBasis, StateVector};
use crate::{Error, Result};

/// Largest subspace dimension accepted for dense diagonalization.
pub const MAX_DIM: u64 = 6000;
/// Minimum number of levels kept for spacing statistics.
pub const MIN_LEVELS: usize = 100;
/// Fraction of the spectrum dropped at each edge before computing spacings.
pub const EDGE_FRACTION: f64 = 0.1;
pub const HISTOGRAM_BINS: usize = 40;
pub const HISTOGRAM_MAX: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainParams {
    pub n_sites: usize,
    pub n_up: usize,
    pub j1: f64,
    pub j2: f64,
    pub eps: f64,
    pub defect_site: usize,
}

impl SpinChainParams {
    pub fn new(
        n_sites: usize,
        n_up: usize,
        j1: f64,
        j2: f64,
        eps: f64,
        defect_site: usize,
    ) -> Result<Self> {
        if n_sites == 0 || n_up > n_sites {
            return Err(Error::InvalidInput(format!(
                "need 0 <= n_up <= n_sites, got {n_up} of {n_sites}"
            )));
        }
        if defect_site >= n_sites {
            return Err(Error::InvalidInput(format!(
                "defect site {defect_site} outside 0..{n_sites}"
            )));
        }
        if ![j1, j2, eps].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("couplings must be finite".into()));
        }
        if binomial(n_sites, n_up) > MAX_DIM {
            return Err(Error::ResourceLimit(format!(
                "subspace dimension C({n_sites}, {n_up}) exceeds {MAX_DIM}"
            )));
        }
        Ok(Self {
            n_sites,
            n_up,
            j1,
            j2,
            eps,
            defect_site,
        })
    }

    /// The 15-site, 5-up chain with `J₁ = 1`, `J₂ = 0.5` and the field on site 2.
    pub fn reference(eps: f64) -> Self {
        Self::new(15, 5, 1.0, 0.5, eps, 2).expect("valid reference parameters")
    }

    pub fn dim(&self) -> usize {
        binomial(self.n_sites, self.n_up) as usize
    }
}

/// A basis configuration: `bits[i]` is true when site `i` is up.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinConfiguration {
    bits: Vec<bool>,
}

impl SpinConfiguration {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn n_up(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    fn sz(&self, i: usize) -> f64 {
        if self.bits[i] {
            0.5
        } else {
            -0.5
        }
    }
}

impl AsRef<[bool]> for SpinConfiguration {
    fn as_ref(&self) -> &[bool] {
        &self.bits
    }
}

/// All configurations with `n_up` ones, in lexicographic order with `1 > 0`
/// (so the first one has all up spins on the left).
pub fn spin_basis(n_sites: usize, n_up: usize) -> Vec<SpinConfiguration> {
    let mut out = Vec::new();
    let mut bits = vec![false; n_sites];
    fill(&mut bits, 0, n_up, &mut out);
    out
}

fn fill(bits: &mut Vec<bool>, pos: usize, left: usize, out: &mut Vec<SpinConfiguration>) {
    if left == 0 {
        out.push(SpinConfiguration::new(bits.clone()));
        return;
    }
    if bits.len() - pos < left {
        return;
    }
    bits[pos] = true;
    fill(bits, pos + 1, left - 1, out);
    bits[pos] = false;
    fill(bits, pos + 1, left, out);
}

fn index_of(basis: &[SpinConfiguration], c: &SpinConfiguration) -> usize {
    basis
        .binary_search_by(|probe| c.cmp(probe))
        .expect("configuration belongs to the subspace")
}

/// Real symmetric Hamiltonian on the fixed-magnetization subspace.
pub fn build_xxz_hamiltonian(params: &SpinChainParams) -> DMatrix<f64> {
    let basis = spin_basis(params.n_sites, params.n_up);
    hamiltonian_on(params, &basis)
}

fn hamiltonian_on(params: &SpinChainParams, basis: &[SpinConfiguration]) -> DMatrix<f64> {
    let n = basis.len();
    let mut h = DMatrix::zeros(n, n);
    for (a, c) in basis.iter().enumerate() {
        let mut diag = params.eps * c.sz(params.defect_site);
        for i in 0..params.n_sites - 1 {
            diag += params.j2 * c.sz(i) * c.sz(i + 1);
            if c.bits[i] != c.bits[i + 1] {
                let mut flipped = c.clone();
                flipped.bits.swap(i, i + 1);
                let b = index_of(basis, &flipped);
                h[(b, a)] += 0.5 * params.j1;
            }
        }
        h[(a, a)] = diag;
    }
    h
}

/// Hamiltonian of the mirrored chain (`i → n−1−i`) expressed on the same basis.
pub fn reflected_hamiltonian(params: &SpinChainParams) -> DMatrix<f64> {
    let mirrored = SpinChainParams {
        defect_site: params.n_sites - 1 - params.defect_site,
        ..*params
    };
    build_xxz_hamiltonian(&mirrored)
}

/// Diagonalizes the chain.
pub fn diagonalize_chain(params: &SpinChainParams) -> Result<Eigensystem> {
    diagonalize_real_symmetric(build_xxz_hamiltonian(params))
}

/// Normalized nearest-neighbour spacings and their distance to the two
/// reference laws.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingStatistics {
    pub spacings: Vec<f64>,
    /// `(bin centre, density)` over `[0, HISTOGRAM_MAX)`.
    pub histogram: Vec<(f64, f64)>,
    pub ks_poisson: f64,
    pub ks_wigner: f64,
}

pub fn poisson_cdf(s: f64) -> f64 {
    1.0 - (-s).exp()
}

pub fn wigner_cdf(s: f64) -> f64 {
    1.0 - (-PI * s * s / 4.0).exp()
}

pub fn poisson_density(s: f64) -> f64 {
    (-s).exp()
}

pub fn wigner_density(s: f64) -> f64 {
    PI * s / 2.0 * (-PI * s * s / 4.0).exp()
}

/// Spacing statistics of a sorted spectrum after trimming each edge.
pub fn level_spacing_statistics(levels: &[f64]) -> Result<SpacingStatistics> {
    if levels.len() < MIN_LEVELS {
        return Err(Error::TooFewLevels {
            found: levels.len(),
            required: MIN_LEVELS,
        });
    }
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::UnsortedPositions);
    }
    let cut = (levels.len() as f64 * EDGE_FRACTION).floor() as usize;
    let kept = &levels[cut..levels.len() - cut];
    let raw: Vec<f64> = kept.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    if !(mean > 0.0) {
        return Err(Error::InvalidInput("spectrum has zero mean spacing".into()));
    }
    let spacings: Vec<f64> = raw.iter().map(|s| s / mean).collect();

    let width = HISTOGRAM_MAX / HISTOGRAM_BINS as f64;
    let mut counts = vec![0usize; HISTOGRAM_BINS];
    for &s in &spacings {
        let b = (s / width).floor() as usize;
        if b < HISTOGRAM_BINS {
            counts[b] += 1;
        }
    }
    let total = spacings.len() as f64;
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(b, &c)| ((b as f64 + 0.5) * width, c as f64 / (total * width)))
        .collect();

    Ok(SpacingStatistics {
        ks_poisson: ks_distance(&spacings, poisson_cdf),
        ks_wigner: ks_distance(&spacings, wigner_cdf),
        spacings,
        histogram,
    })
}

/// Kolmogorov–Smirnov statistic of a sample against a continuous CDF.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// The `n_sites − n_up + 1` states with one contiguous block of up spins,
/// ordered by the position of the block.
pub fn localized_initial_states(params: &SpinChainParams) -> Vec<SpinConfiguration> {
    (0..=params.n_sites - params.n_up)
        .map(|start| {
            SpinConfiguration::new(
                (0..params.n_sites)
                    .map(|i| i >= start && i < start + params.n_up)
                    .collect(),
            )
        })
        .collect()
}

/// The configuration basis with the occupied-positions metric.
pub fn spin_configuration_basis(
    params: &SpinChainParams,
) -> Result<(Vec<SpinConfiguration>, LabeledBasis)> {
    let configs = spin_basis(params.n_sites, params.n_up);
    let space: MetricSpace = occupied_positions_metric(&configs)?;
    Ok((configs, LabeledBasis::computational(space)))
}

/// One `Υ` value per block state, in block order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinChaosResult {
    pub states: Vec<SpinConfiguration>,
    pub upsilon: Vec<f64>,
}

impl SpinChaosResult {
    pub fn mean(&self) -> f64 {
        self.upsilon.iter().sum::<f64>() / self.upsilon.len() as f64
    }

    pub fn median(&self) -> f64 {
        let mut v = self.upsilon.clone();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }
}

/// `Υ` of each block state against the uniform distribution over configurations.
pub fn spin_chaos_measure(params: &SpinChainParams, eig: &Eigensystem) -> Result<SpinChaosResult> {
    let (configs, basis) = spin_configuration_basis(params)?;
    let projector = EnsembleProjector::new(eig, &basis)?;
    let states = localized_initial_states(params);
    let uniform = Distribution::uniform(basis.len());
    let mut upsilon = Vec::with_capacity(states.len());
    for s in &states {
        let psi = StateVector::basis_state(basis.hilbert_dim(), index_of(&configs, s));
        let dist = projector.project(&psi)?;
        upsilon.push(upsilon_of(dist, &basis, Some(&uniform), DistanceConfig::default())?.upsilon);
    }
    Ok(SpinChaosResult { states, upsilon })
}
