use std::f64::consts::TAU;

use num_complex::Complex64;
use physdist_core::linalg::unitarity_residual;
use physdist_core::math::min_image;
use physdist_core::ot::DistanceConfig;
use physdist_core::quantum::{Basis, StateVector};
use physdist_core::rotor::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn floquet_step_is_unitary() {
    let params = RotorParams::new(4.7, 20).unwrap();
    let rotor = QuantumRotor::new(params);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let amps = (0..400)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut psi = StateVector::normalized(amps).unwrap();
    for _ in 0..20 {
        psi = rotor.floquet_step(&psi).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
    }
    assert!(unitarity_residual(&rotor.floquet_matrix()) < 1e-10);
}

#[test]
fn free_rotor_keeps_momentum_probabilities() {
    let params = RotorParams::new(0.0, 8).unwrap();
    let rotor = QuantumRotor::new(params);
    let mut phi = vec![Complex64::new(0.0, 0.0); 64];
    phi[13] = Complex64::new(1.0, 0.0);
    let psi = StateVector::new(rotor.from_momentum(&phi)).unwrap();
    let out = rotor.to_momentum(rotor.floquet_step(&psi).unwrap().amplitudes());
    for (k, z) in out.iter().enumerate() {
        let want = if k == 13 { 1.0 } else { 0.0 };
        assert!((z.norm_sqr() - want).abs() < 1e-12);
    }
}

#[test]
fn centroid_follows_classical_map_for_one_kick() {
    let params = RotorParams::new(0.3, 30).unwrap();
    let rotor = QuantumRotor::new(params);
    let start = ClassicalPoint::new(4.7, 3.0);
    let psi = rotor.floquet_step(&rotor.packet(start).unwrap()).unwrap();
    let q = rotor.expectation_point(&psi).unwrap();
    let c = standard_map_step(start, 0.3);
    assert!(q.torus_distance(&c) < 0.1, "{q:?} vs {c:?}");
}

#[test]
fn kick_zero_distances_match_the_separation() {
    let (a, b) = default_starts(30);
    let rows = three_distance_experiment(
        RotorParams::new(1.5, 30).unwrap(),
        a,
        b,
        0,
        DistanceConfig::default(),
    )
    .unwrap();
    let sep = TAU * 2f64.sqrt() / 30.0;
    let cell = TAU / 30.0;
    assert!((rows[0].classical - sep).abs() < 1e-12);
    assert!((rows[0].physical - sep).abs() < cell);
    assert!((rows[0].expectation - sep).abs() < cell);
}

#[test]
fn cell_momentum_spread() {
    let m = 10;
    let basis = rotor_wannier_basis(m).unwrap();
    let params = RotorParams::new(0.0, m).unwrap();
    let rotor = QuantumRotor::new(params);
    let mat = basis.matrix();
    let width = TAU / m as f64;
    let expected = (1.0 - 1.0 / (m * m) as f64).sqrt() / 12f64.sqrt();
    for idx in [0, 37, 99] {
        let col: Vec<Complex64> = mat.column(idx).iter().copied().collect();
        let p: Vec<f64> = rotor
            .to_momentum(&col)
            .iter()
            .map(|z| z.norm_sqr())
            .collect();
        let moms: Vec<f64> = (0..m * m).map(|k| params.hbar() * k as f64).collect();
        let mean: f64 = p.iter().zip(&moms).map(|(w, x)| w * x).sum();
        let var: f64 = p
            .iter()
            .zip(&moms)
            .map(|(w, x)| w * (x - mean).powi(2))
            .sum();
        let (_, centre) = cell_center(m, idx / m, idx % m);
        assert!((mean - centre).abs() < 1e-10);
        assert!((var.sqrt() / width - expected).abs() < 1e-10);
    }
}

#[test]
fn theta_shift_translates_position_marginal() {
    let m = 6;
    let basis = rotor_wannier_basis(m).unwrap();
    let mat = basis.matrix();
    let n = m * m;
    for ell in [0, 4] {
        for theta in 0..m {
            let a = ell * m + theta;
            let b = ell * m + (theta + 1) % m;
            for j in 0..n {
                let pa = mat[(j, a)].norm_sqr();
                let pb = mat[((j + m) % n, b)].norm_sqr();
                assert!((pa - pb).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cells_are_centred_in_position() {
    let m = 8;
    let basis = rotor_wannier_basis(m).unwrap();
    let params = RotorParams::new(0.0, m).unwrap();
    let mat = basis.matrix();
    let grid = params.grid();
    for idx in 0..m * m {
        let w: Vec<f64> = mat.column(idx).iter().map(|z| z.norm_sqr()).collect();
        let x = physdist_core::math::circular_mean(&w, &grid).unwrap();
        let (cx, _) = cell_center(m, idx / m, idx % m);
        assert!(min_image(x, cx, TAU) < 1e-9);
    }
}

#[test]
fn scan_distributions_are_normalized() {
    let scan = RotorScan::new(
        RotorParams::new(2.0, 6).unwrap(),
        LongTimeAverage::DiagonalEnsemble,
        DistanceConfig::default(),
    )
    .unwrap();
    for (l, t) in [(0, 0), (3, 2), (5, 5)] {
        let p = scan.long_time_distribution(l, t).unwrap();
        assert!((p.weights().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert_eq!(p.len(), scan.basis().len());
    }
}

#[test]
fn free_rotor_scan_is_far_from_uniform() {
    let res = chaos_scan(
        RotorParams::new(0.0, 6).unwrap(),
        LongTimeAverage::DiagonalEnsemble,
        DistanceConfig::default(),
    )
    .unwrap();
    // Momentum never spreads, so every cell stays roughly one momentum row wide.
    assert!(res.min().unwrap() > 0.5, "{:?}", res.min());
}

#[test]
fn stroboscopic_average_approaches_the_ensemble() {
    let p = RotorParams::new(5.0, 6).unwrap();
    let cfg = DistanceConfig::default();
    let de = RotorScan::new(p, LongTimeAverage::DiagonalEnsemble, cfg).unwrap();
    let st = RotorScan::new(p, LongTimeAverage::Stroboscopic(4000), cfg).unwrap();
    let a = de.long_time_distribution(2, 3).unwrap();
    let b = st.long_time_distribution(2, 3).unwrap();
    let diff: f64 = a
        .weights()
        .iter()
        .zip(b.weights())
        .map(|(x, y)| (x - y).abs())
        .sum();
    assert!(diff < 0.05, "{diff}");
}

proptest! {
    #[test]
    fn standard_map_preserves_area(q in 0.0..TAU, p in 0.0..TAU, k in 0.0..8.0f64) {
        let h = 1e-7;
        let pt = ClassicalPoint { q, p };
        let f = |dq: f64, dp: f64| {
            let s = standard_map_step(ClassicalPoint { q: q + dq, p: p + dp }, k);
            let b = standard_map_step(pt, k);
            (wrap_diff(s.q, b.q), wrap_diff(s.p, b.p))
        };
        let (a, c) = f(h, 0.0);
        let (b, d) = f(0.0, h);
        let det = (a * d - b * c) / (h * h);
        prop_assert!((det - 1.0).abs() < 1e-6 * (1.0 + k * k), "det = {}", det);
        let j = standard_map_jacobian(pt, k);
        prop_assert!((j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn map_stays_on_the_torus(q in -20.0..20.0f64, p in -20.0..20.0f64, k in 0.0..10.0f64) {
        let s = standard_map_step(ClassicalPoint::new(q, p), k);
        prop_assert!((0.0..TAU).contains(&s.q) && (0.0..TAU).contains(&s.p));
    }
}

fn wrap_diff(a: f64, b: f64) -> f64 {
    physdist_core::math::wrap_signed(a - b)
}
