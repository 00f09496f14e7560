use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Tolerance on `Σ p_i = 1` accepted by [`Distribution::new`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Probability weights over the points of a finite metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Validates nonnegativity and normalization (within [`NORMALIZATION_TOL`]).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { weights })
    }

    /// Rescales nonnegative masses so they sum to one.
    pub fn from_masses(mut masses: Vec<f64>) -> Result<Self> {
        check_weights(&masses)?;
        let sum: f64 = masses.iter().sum();
        if sum <= 0.0 {
            return Err(Error::NotNormalized { sum });
        }
        masses.iter_mut().for_each(|w| *w /= sum);
        Ok(Self { weights: masses })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one point");
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        assert!(at < n);
        let mut weights = vec![0.0; n];
        weights[at] = 1.0;
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    /// Keeps the listed points only and renormalizes. Fails if no mass remains.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let masses = indices.iter().map(|&i| self.weights[i]).collect();
        Self::from_masses(masses)
    }

    /// Mass carried by the listed points.
    pub fn mass_on(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.weights[i]).sum()
    }
}

fn check_weights(w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::InvalidInput("empty distribution".into()));
    }
    for (index, &value) in w.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    Ok(())
}

/// Order λ of the Wasserstein distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceConfig {
    lambda: u32,
}

impl DistanceConfig {
    pub fn new(lambda: u32) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::InvalidInput("Wasserstein order must be >= 1".into()));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self { lambda: 1 }
    }
}

/// An optimal coupling between two distributions, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    size: usize,
    entries: Vec<(usize, usize, f64)>,
    cost: f64,
}

impl TransportPlan {
    pub(crate) fn new(size: usize, entries: Vec<(usize, usize, f64)>, cost: f64) -> Self {
        Self {
            size,
            entries,
            cost,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Nonzero entries `(i, j, P_ij)`.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// `Σ P_ij d_ij^λ`, i.e. the distance raised to the power λ.
    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut r = vec![0.0; self.size];
        for &(i, _, m) in &self.entries {
            r[i] += m;
        }
        r
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.size];
        for &(_, j, m) in &self.entries {
            c[j] += m;
        }
        c
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.size]; self.size];
        for &(i, j, v) in &self.entries {
            m[i][j] += v;
        }
        m
    }

    /// Largest marginal violation against `(p, q)`.
    pub fn marginal_error(&self, p: &Distribution, q: &Distribution) -> f64 {
        let rows = self.row_sums();
        let cols = self.col_sums();
        let a = rows
            .iter()
            .zip(p.weights())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let b = cols
            .iter()
            .zip(q.weights())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        a.max(b)
    }
}

/// `-Σ p_i ln p_i` over the support.
pub fn shannon_entropy(p: &Distribution) -> f64 {
    -p.weights()
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * w.ln())
        .sum::<f64>()
}
