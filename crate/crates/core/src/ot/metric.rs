use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::simplex;
use crate::math::min_image;
use crate::{Error, Result};

/// A finite set of `n` points with a bounded pairwise distance matrix.
///
/// Every entry is finite: Wasserstein distances are not robust against
/// unbounded ground metrics, so constructors reject them.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
}

impl MetricSpace {
    /// Builds from a row-major `n × n` matrix, checking the metric axioms that
    /// the transport solver relies on (zero diagonal, symmetry, nonnegativity,
    /// finiteness). Asymmetry up to 1e-12 relative is averaged away.
    pub fn from_matrix(n: usize, mut dist: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMetric("empty point set".into()));
        }
        if dist.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                found: dist.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = dist[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NonFiniteMetric { i, j });
                }
                if v < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "negative entry at ({i}, {j})"
                    )));
                }
            }
            if dist[i * n + i].abs() > 1e-12 {
                return Err(Error::InvalidMetric(format!("nonzero diagonal at {i}")));
            }
            dist[i * n + i] = 0.0;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidMetric(format!("asymmetric at ({i}, {j})")));
                }
                let m = 0.5 * (a + b);
                dist[i * n + j] = m;
                dist[j * n + i] = m;
            }
        }
        Ok(Self { n, dist })
    }

    /// Fills the upper triangle from `f` and mirrors it.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMetric("empty point set".into()));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFiniteMetric { i, j });
                }
                if v < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "negative entry at ({i}, {j})"
                    )));
                }
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        Ok(Self { n, dist })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.dist
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Every distance multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "scale factor {s} must be positive"
            )));
        }
        Ok(Self {
            n: self.n,
            dist: self.dist.iter().map(|d| d * s).collect(),
        })
    }

    /// Sub-space on the listed points, in the listed order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        let mut dist = vec![0.0; k * k];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                dist[a * k + b] = self.get(i, j);
            }
        }
        Self { n: k, dist }
    }

    /// Largest violation of `d(i,k) <= d(i,j) + d(j,k)` over all triples (O(n³)).
    pub fn triangle_violation(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max(self.get(i, k) - self.get(i, j) - self.get(j, k));
                }
            }
        }
        worst
    }
}

/// `d(x, y) = |x − y|` on the real line.
pub fn line_metric(positions: &[f64]) -> Result<MetricSpace> {
    check_finite(positions)?;
    MetricSpace::from_fn(positions.len(), |i, j| (positions[i] - positions[j]).abs())
}

/// Arc-length distance on a circle of circumference `period` (minimal image).
pub fn torus_metric_1d(positions: &[f64], period: f64) -> Result<MetricSpace> {
    check_period(period)?;
    check_finite(positions)?;
    MetricSpace::from_fn(positions.len(), |i, j| {
        min_image(positions[i], positions[j], period)
    })
}

/// Euclidean distance on a product of lines and circles.
///
/// `points[k]` holds the coordinates of point `k`; axis `a` is periodic with
/// period `periods[a]` when `periodic[a]` is set. The result is multiplied by
/// `scale`.
pub fn torus_product_metric(
    points: &[Vec<f64>],
    periods: &[f64],
    periodic: &[bool],
    scale: f64,
) -> Result<MetricSpace> {
    let dim = periods.len();
    if periodic.len() != dim {
        return Err(Error::SizeMismatch {
            expected: dim,
            found: periodic.len(),
        });
    }
    for (p, &flag) in periods.iter().zip(periodic) {
        if flag {
            check_period(*p)?;
        }
    }
    for pt in points {
        if pt.len() != dim {
            return Err(Error::SizeMismatch {
                expected: dim,
                found: pt.len(),
            });
        }
        check_finite(pt)?;
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "scale {scale} must be positive"
        )));
    }
    MetricSpace::from_fn(points.len(), |i, j| {
        let mut s = 0.0;
        for a in 0..dim {
            let d = if periodic[a] {
                min_image(points[i][a], points[j][a], periods[a])
            } else {
                (points[i][a] - points[j][a]).abs()
            };
            s += d * d;
        }
        scale * s.sqrt()
    })
}

/// Number of differing sites between equal-length bitstrings.
pub fn hamming_metric<B: AsRef<[bool]>>(bitstrings: &[B]) -> Result<MetricSpace> {
    check_equal_length(bitstrings)?;
    MetricSpace::from_fn(bitstrings.len(), |i, j| {
        bitstrings[i]
            .as_ref()
            .iter()
            .zip(bitstrings[j].as_ref())
            .filter(|(a, b)| a != b)
            .count() as f64
    })
}

/// Sorted site indices of the set bits.
pub fn occupied_positions(bits: &[bool]) -> Vec<usize> {
    bits.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

/// L1 distance between the sorted arrays of occupied sites.
///
/// All bitstrings must have the same length and the same number of set bits.
pub fn occupied_positions_metric<B: AsRef<[bool]>>(bitstrings: &[B]) -> Result<MetricSpace> {
    check_equal_length(bitstrings)?;
    let occ: Vec<Vec<usize>> = bitstrings
        .iter()
        .map(|b| occupied_positions(b.as_ref()))
        .collect();
    if let Some(first) = occ.first() {
        if let Some(bad) = occ.iter().position(|o| o.len() != first.len()) {
            return Err(Error::InvalidMetric(format!(
                "bitstring {bad} has {} set bits, expected {}",
                occ[bad].len(),
                first.len()
            )));
        }
    }
    MetricSpace::from_fn(bitstrings.len(), |i, j| {
        occ[i]
            .iter()
            .zip(&occ[j])
            .map(|(&a, &b)| a.abs_diff(b))
            .sum::<usize>() as f64
    })
}

/// Transport distance between Fock occupation vectors.
///
/// `mode_metric` holds `d_ij` between the single-particle modes and
/// `vacuum_distances[i]` holds `d_i0`. When the total particle numbers differ,
/// the smaller state is padded with vacuum occupation so both carry
/// `max(Σ n_i, Σ m_i)` particles, and the minimal `Σ d_ij Δ_ij` is solved as a
/// transport problem over modes plus vacuum.
pub fn fock_metric(
    occupations: &[Vec<u32>],
    mode_metric: &MetricSpace,
    vacuum_distances: &[f64],
) -> Result<MetricSpace> {
    let k = mode_metric.len();
    if vacuum_distances.len() != k {
        return Err(Error::SizeMismatch {
            expected: k,
            found: vacuum_distances.len(),
        });
    }
    check_finite(vacuum_distances)?;
    if vacuum_distances.iter().any(|&d| d < 0.0) {
        return Err(Error::InvalidMetric("negative vacuum distance".into()));
    }
    for occ in occupations {
        if occ.len() != k {
            return Err(Error::SizeMismatch {
                expected: k,
                found: occ.len(),
            });
        }
    }
    // Node 0 is the vacuum, node i+1 is mode i.
    let ext = |a: usize, b: usize| -> f64 {
        match (a, b) {
            (0, 0) => 0.0,
            (0, m) | (m, 0) => vacuum_distances[m - 1],
            (x, y) => mode_metric.get(x - 1, y - 1),
        }
    };
    let mut failure = None;
    let space = MetricSpace::from_fn(occupations.len(), |i, j| {
        match fock_pair_distance(&occupations[i], &occupations[j], &ext) {
            Ok(d) => d,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(space),
    }
}

fn fock_pair_distance(n: &[u32], m: &[u32], ext: &dyn Fn(usize, usize) -> f64) -> Result<f64> {
    let tn: u64 = n.iter().map(|&x| u64::from(x)).sum();
    let tm: u64 = m.iter().map(|&x| u64::from(x)).sum();
    let total = tn.max(tm);
    if total == 0 {
        return Ok(0.0);
    }
    let mut supply = Vec::with_capacity(n.len() + 1);
    let mut demand = Vec::with_capacity(m.len() + 1);
    supply.push((total - tn) as f64);
    demand.push((total - tm) as f64);
    supply.extend(n.iter().map(|&x| f64::from(x)));
    demand.extend(m.iter().map(|&x| f64::from(x)));
    let sol = simplex::solve(&supply, &demand, ext)?;
    Ok(sol.cost)
}

fn check_period(period: f64) -> Result<()> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "period {period} must be positive"
        )));
    }
    Ok(())
}

fn check_finite(xs: &[f64]) -> Result<()> {
    if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("coordinate {i} is not finite")));
    }
    Ok(())
}

fn check_equal_length<B: AsRef<[bool]>>(bitstrings: &[B]) -> Result<()> {
    if let Some(first) = bitstrings.first() {
        let len = first.as_ref().len();
        for b in bitstrings {
            if b.as_ref().len() != len {
                return Err(Error::SizeMismatch {
                    expected: len,
                    found: b.as_ref().len(),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::TAU;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn occupied_positions_golden() {
        let m = occupied_positions_metric(&[bits("11000"), bits("00011")]).unwrap();
        assert_eq!(m.get(0, 1), 6.0);
        let h = hamming_metric(&[bits("11000"), bits("00011")]).unwrap();
        assert_eq!(h.get(0, 1), 4.0);
    }

    #[test]
    fn occupied_positions_needs_equal_popcount() {
        assert!(occupied_positions_metric(&[bits("110"), bits("100")]).is_err());
        assert!(hamming_metric(&[bits("110"), bits("10")]).is_err());
    }

    #[test]
    fn torus_minimal_image() {
        let m = torus_metric_1d(&[0.1, TAU - 0.1], TAU).unwrap();
        assert!((m.get(0, 1) - 0.2).abs() < 1e-12);
        assert!(torus_metric_1d(&[0.0], 0.0).is_err());
    }

    #[test]
    fn product_metric_mixes_axes() {
        let pts = vec![vec![0.0, 0.0], vec![3.0, 9.0]];
        let m = torus_product_metric(&pts, &[100.0, 10.0], &[false, true], 0.5).unwrap();
        // Δx = 3, Δθ = min(9, 1) = 1
        assert!((m.get(0, 1) - 0.5 * 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn from_matrix_rejects_bad_input() {
        assert!(matches!(
            MetricSpace::from_matrix(2, vec![0.0, f64::INFINITY, f64::INFINITY, 0.0]),
            Err(Error::NonFiniteMetric { .. })
        ));
        assert!(MetricSpace::from_matrix(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(MetricSpace::from_matrix(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(MetricSpace::from_matrix(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(MetricSpace::from_matrix(2, vec![0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn fock_metric_pads_with_vacuum() {
        let modes = line_metric(&[0.0, 1.0, 2.0]).unwrap();
        let vac = [2.0, 2.0, 2.0];
        let states = vec![vec![2, 0, 0], vec![0, 0, 2], vec![1, 0, 0], vec![0, 0, 0]];
        let m = fock_metric(&states, &modes, &vac).unwrap();
        assert!((m.get(0, 1) - 4.0).abs() < 1e-12);
        // one particle stays, the other goes to the vacuum
        assert!((m.get(0, 2) - 2.0).abs() < 1e-12);
        assert!((m.get(0, 3) - 4.0).abs() < 1e-12);
        assert!(m.triangle_violation() <= 1e-12);
    }
}
