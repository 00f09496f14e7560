#[allow(unused_imports)]
use num_traits::Float;

use super::{DistanceConfig, Distribution};
use crate::{Error, Result};

/// Wasserstein-λ distance on the real line, computed without a solver.
///
/// λ = 1 integrates `|F_p − F_q|` between consecutive positions; larger orders
/// walk the monotone (quantile) coupling, which is optimal for convex costs.
pub fn wasserstein_1d(
    p: &Distribution,
    q: &Distribution,
    positions: &[f64],
    cfg: DistanceConfig,
) -> Result<f64> {
    let n = positions.len();
    if p.len() != n || q.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: if p.len() != n { p.len() } else { q.len() },
        });
    }
    if positions.windows(2).any(|w| !(w[0] < w[1])) || positions.iter().any(|x| !x.is_finite()) {
        return Err(Error::UnsortedPositions);
    }
    if cfg.lambda() == 1 {
        let (mut fp, mut fq, mut acc) = (0.0, 0.0, 0.0);
        for k in 0..n.saturating_sub(1) {
            fp += p.weights()[k];
            fq += q.weights()[k];
            acc += (fp - fq).abs() * (positions[k + 1] - positions[k]);
        }
        return Ok(acc);
    }
    Ok(
        quantile_cost(p.weights(), q.weights(), positions, cfg.lambda())
            .powf(1.0 / f64::from(cfg.lambda())),
    )
}

/// `∫₀¹ |F_p⁻¹(t) − F_q⁻¹(t)|^λ dt` by merging the two staircases.
fn quantile_cost(p: &[f64], q: &[f64], x: &[f64], lambda: u32) -> f64 {
    let n = x.len();
    let (mut i, mut j) = (0, 0);
    let (mut ri, mut rj) = (p[0], q[0]);
    let mut acc = 0.0;
    loop {
        while ri <= 0.0 && i + 1 < n {
            i += 1;
            ri = p[i];
        }
        while rj <= 0.0 && j + 1 < n {
            j += 1;
            rj = q[j];
        }
        if ri <= 0.0 || rj <= 0.0 {
            break;
        }
        let m = ri.min(rj);
        acc += m * (x[i] - x[j]).abs().powi(lambda as i32);
        ri -= m;
        rj -= m;
        if (i + 1 == n && ri <= 0.0) || (j + 1 == n && rj <= 0.0) {
            break;
        }
    }
    acc
}
