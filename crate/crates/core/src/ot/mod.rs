//! Exact discrete optimal transport.
//!
//! [`wasserstein`] and [`transport_plan`] solve the transport linear program
//! with a network simplex, so results are exact up to floating-point
//! rounding. [`wasserstein_1d`] is an independent closed-form path for points
//! on a line, kept mainly as a cross-check.

mod distribution;
mod metric;
mod oned;
pub(crate) mod simplex;

pub use distribution::{
    shannon_entropy, DistanceConfig, Distribution, TransportPlan, NORMALIZATION_TOL,
};
pub use metric::{
    fock_metric, hamming_metric, line_metric, occupied_positions, occupied_positions_metric,
    torus_metric_1d, torus_product_metric, MetricSpace,
};
pub use oned::wasserstein_1d;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// `[min_P Σ P_ij d_ij^λ]^{1/λ}` over couplings of `p` and `q`.
pub fn wasserstein(
    p: &Distribution,
    q: &Distribution,
    space: &MetricSpace,
    cfg: DistanceConfig,
) -> Result<f64> {
    let plan = transport_plan(p, q, space, cfg)?;
    Ok(root(plan.cost(), cfg.lambda()))
}

/// An optimal coupling; its [`TransportPlan::cost`] is the distance raised to λ.
pub fn transport_plan(
    p: &Distribution,
    q: &Distribution,
    space: &MetricSpace,
    cfg: DistanceConfig,
) -> Result<TransportPlan> {
    let n = space.len();
    for len in [p.len(), q.len()] {
        if len != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let lambda = cfg.lambda();
    let sol = simplex::solve(p.weights(), q.weights(), |i, j| {
        power(space.get(i, j), lambda)
    })?;
    Ok(TransportPlan::new(n, sol.flows, sol.cost))
}

fn power(d: f64, lambda: u32) -> f64 {
    if lambda == 1 {
        d
    } else {
        d.powi(lambda as i32)
    }
}

fn root(c: f64, lambda: u32) -> f64 {
    let c = c.max(0.0);
    match lambda {
        1 => c,
        2 => c.sqrt(),
        l => c.powf(1.0 / f64::from(l)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn positions(n: usize) -> Vec<f64> {
        (0..n).map(|x| x as f64).collect()
    }

    fn half_blocks() -> (Distribution, Distribution) {
        let pa =
            Distribution::new((0..10).map(|x| if x < 5 { 0.2 } else { 0.0 }).collect()).unwrap();
        let pb = Distribution::new(
            (0..10)
                .map(|x| if x % 2 == 0 { 0.2 } else { 0.0 })
                .collect(),
        )
        .unwrap();
        (pa, pb)
    }

    #[test]
    fn worked_values_against_uniform() {
        let (pa, pb) = half_blocks();
        let space = line_metric(&positions(10)).unwrap();
        let u = Distribution::uniform(10);
        let cfg = DistanceConfig::default();
        assert!((wasserstein(&pa, &u, &space, cfg).unwrap() - 2.5).abs() < 1e-9);
        assert!((wasserstein(&pb, &u, &space, cfg).unwrap() - 0.5).abs() < 1e-9);
        let plan = transport_plan(&pa, &u, &space, cfg).unwrap();
        assert!((plan.cost() - 2.5).abs() < 1e-9);
        assert!(plan.marginal_error(&pa, &u) < 1e-9);
    }

    #[test]
    fn identical_inputs_cost_nothing() {
        let (pa, _) = half_blocks();
        let space = line_metric(&positions(10)).unwrap();
        let plan = transport_plan(&pa, &pa, &space, DistanceConfig::default()).unwrap();
        assert_eq!(plan.cost(), 0.0);
        assert!(plan.entries().iter().all(|&(i, j, _)| i == j));
    }

    #[test]
    fn point_masses_move_whole() {
        let space = line_metric(&[0.0, 1.0, 3.0]).unwrap();
        let a = Distribution::point_mass(3, 0);
        let b = Distribution::point_mass(3, 2);
        let plan = transport_plan(&a, &b, &space, DistanceConfig::new(2).unwrap()).unwrap();
        assert_eq!(plan.entries(), &[(0, 2, 1.0)]);
        assert!((plan.cost() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let space = line_metric(&positions(3)).unwrap();
        let u = Distribution::uniform(4);
        assert!(matches!(
            wasserstein(&u, &u, &space, DistanceConfig::default()),
            Err(Error::SizeMismatch { .. })
        ));
    }
}
