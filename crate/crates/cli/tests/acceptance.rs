//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use physdist_core::bose_hubbard::{
    build_bh_hamiltonian, section_dispersion, section_points, BHParams, BhChaosContext,
    SectionSpec, DEFAULT_DT,
};
use physdist_core::linalg::{diagonalize, hermiticity_residual, unitarity_residual, CMatrix};
use physdist_core::ot::{
    fock_metric, hamming_metric, line_metric, occupied_positions_metric, shannon_entropy,
    torus_metric_1d, transport_plan, wasserstein, wasserstein_1d, DistanceConfig, Distribution,
    MetricSpace,
};
use physdist_core::phase::{
    build_phase_lattice_1d, build_phase_lattice_2d, localization_report, PhaseWindow,
};
use physdist_core::quantum::{
    diagonal_ensemble, gaussian_line_state, project_probabilities, Basis, GaussianPacket,
    LabeledBasis, StateVector,
};
use physdist_core::rotor::{
    chaos_scan, default_starts, showcase_cells, three_distance_experiment, LongTimeAverage,
    QuantumRotor, RotorParams, RotorScan,
};
use physdist_core::xxz::{build_xxz_hamiltonian, spin_basis, SpinChainParams};
use physdist_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn physdist(args: &[&str], out: &Path) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_physdist"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .output()
        .map_err(fail)?;
    if !o.status.success() {
        return Err(format!(
            "physdist {args:?} failed: {}",
            String::from_utf8_lossy(&o.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&o.stdout).into_owned())
}

fn csv_rows(path: &Path) -> Result<Vec<Vec<String>>, String> {
    Ok(fs::read_to_string(path)
        .map_err(fail)?
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect())
}

fn csv_meta(path: &Path, key: &str) -> Result<f64, String> {
    let prefix = format!("# {key}: ");
    fs::read_to_string(path)
        .map_err(fail)?
        .lines()
        .find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
        .ok_or_else(|| format!("{} has no {key}", path.display()))?
        .parse()
        .map_err(fail)
}

fn block_pair() -> (Distribution, Distribution) {
    let pa = Distribution::new((0..10).map(|x| if x < 5 { 0.2 } else { 0.0 }).collect()).unwrap();
    let pb = Distribution::new(
        (0..10)
            .map(|x| if x % 2 == 0 { 0.2 } else { 0.0 })
            .collect(),
    )
    .unwrap();
    (pa, pb)
}

fn positions(n: usize) -> Vec<f64> {
    (0..n).map(|x| x as f64).collect()
}

fn c1_golden(tmp: &Path) -> Outcome {
    let labels = positions(10);
    let write = |name: &str, w: &[f64]| {
        let path = tmp.join(name);
        let body: String = labels
            .iter()
            .zip(w)
            .map(|(l, x)| format!("{l},{x}\n"))
            .collect();
        fs::write(&path, body).map(|_| path)
    };
    let (pa, pb) = block_pair();
    let a = write("pa.csv", pa.weights()).map_err(fail)?;
    let b = write("pb.csv", pb.weights()).map_err(fail)?;
    let u = write("u.csv", &[0.1; 10]).map_err(fail)?;
    let out = tmp.join("c1");
    let da: f64 = physdist(
        &["ot", "--p", a.to_str().unwrap(), "--q", u.to_str().unwrap()],
        &out,
    )?
    .trim()
    .parse()
    .map_err(fail)?;
    let db: f64 = physdist(
        &["ot", "--p", b.to_str().unwrap(), "--q", u.to_str().unwrap()],
        &out,
    )?
    .trim()
    .parse()
    .map_err(fail)?;
    let space = line_metric(&labels).map_err(fail)?;
    let plan = transport_plan(
        &pa,
        &Distribution::uniform(10),
        &space,
        DistanceConfig::default(),
    )
    .map_err(fail)?;
    let err = plan.marginal_error(&pa, &Distribution::uniform(10));
    check(
        (da - 2.5).abs() <= 1e-9
            && (db - 0.5).abs() <= 1e-9
            && (plan.cost() - 2.5).abs() <= 1e-9
            && err <= 1e-9,
        format!(
            "D(pA,u)={da}, D(pB,u)={db}, plan cost {}, marginal error {err:.1e}",
            plan.cost()
        ),
    )
}

fn c2_entropy() -> Outcome {
    let (pa, pb) = block_pair();
    let (ha, hb) = (shannon_entropy(&pa), shannon_entropy(&pb));
    let space = line_metric(&positions(10)).map_err(fail)?;
    let u = Distribution::uniform(10);
    let cfg = DistanceConfig::default();
    let ua = wasserstein(&pa, &u, &space, cfg).map_err(fail)?;
    let ub = wasserstein(&pb, &u, &space, cfg).map_err(fail)?;
    let ln5 = 5f64.ln();
    check(
        (ha - ln5).abs() <= 1e-12 && (hb - ln5).abs() <= 1e-12 && (ua / ub - 5.0).abs() <= 1e-9,
        format!(
            "H(pA)={ha:.15}, H(pB)={hb:.15}, ln5={ln5:.15}, Υ ratio {:.12}",
            ua / ub
        ),
    )
}

fn c3_gaussian() -> Outcome {
    let n = 2048;
    let grid: Vec<f64> = (0..n)
        .map(|k| -20.0 + 40.0 * k as f64 / (n - 1) as f64)
        .collect();
    let basis = LabeledBasis::computational(line_metric(&grid).map_err(fail)?);
    let cfg = DistanceConfig::new(2).map_err(fail)?;
    let sigma = 0.4;
    let mut worst: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    for sep in [10.0, 15.0, 25.0, 40.0] {
        let (x1, x2) = (-0.5 * sep * sigma, 0.5 * sep * sigma);
        let dist = |x: f64| -> Result<Distribution, String> {
            let psi = gaussian_line_state(
                &GaussianPacket::new(x, 0.0, sigma).map_err(fail)?,
                &grid,
                1.0,
            )
            .map_err(fail)?;
            project_probabilities(&psi, &basis).map_err(fail)
        };
        let (a, b) = (dist(x1)?, dist(x2)?);
        let d = wasserstein(&a, &b, basis.space(), cfg).map_err(fail)?;
        let oracle = wasserstein_1d(&a, &b, &grid, cfg).map_err(fail)?;
        let want = x2 - x1;
        worst = worst.max((d - want).abs() / want);
        oracle_gap = oracle_gap.max((d - oracle).abs() / oracle);
    }
    check(
        worst <= 0.01 && oracle_gap <= 1e-6,
        format!("max relative error {worst:.2e} vs |x1-x2|, solver vs 1-D oracle {oracle_gap:.1e}"),
    )
}

fn c4_spin_metric() -> Outcome {
    let pair = [
        physdist_core::xxz::SpinConfiguration::from_bits(&[1, 1, 0, 0, 0]),
        physdist_core::xxz::SpinConfiguration::from_bits(&[0, 0, 0, 1, 1]),
    ];
    let golden = occupied_positions_metric(&pair).map_err(fail)?.get(0, 1);
    let configs = spin_basis(6, 3);
    let metric = occupied_positions_metric(&configs).map_err(fail)?;
    let line = line_metric(&positions(6)).map_err(fail)?;
    let mut worst: f64 = 0.0;
    for (i, a) in configs.iter().enumerate() {
        for (j, b) in configs.iter().enumerate() {
            let mass = |c: &physdist_core::xxz::SpinConfiguration| {
                Distribution::new(
                    c.bits()
                        .iter()
                        .map(|&x| if x { 1.0 / 3.0 } else { 0.0 })
                        .collect(),
                )
            };
            let w = wasserstein(
                &mass(a).map_err(fail)?,
                &mass(b).map_err(fail)?,
                &line,
                DistanceConfig::default(),
            )
            .map_err(fail)?;
            worst = worst.max((3.0 * w - metric.get(i, j)).abs());
        }
    }
    check(
        golden == 6.0 && worst <= 1e-9 && configs.len() == 20,
        format!(
            "d = {golden}; {} pairs, max |metric - k·W1| = {worst:.1e}",
            configs.len() * configs.len()
        ),
    )
}

struct SpinRun {
    ks_poisson: f64,
    ks_wigner: f64,
    upsilon: Vec<f64>,
    levels: usize,
}

fn spin_run(tmp: &Path, eps: &str) -> Result<SpinRun, String> {
    let out = tmp.join(format!("spin-{eps}"));
    physdist(&["spin", "--eps", eps], &out)?;
    let spacings = out.join("spin_spacings.csv");
    Ok(SpinRun {
        ks_poisson: csv_meta(&spacings, "ks_poisson")?,
        ks_wigner: csv_meta(&spacings, "ks_wigner")?,
        upsilon: csv_rows(&out.join("spin_upsilon.csv"))?
            .iter()
            .map(|r| r[2].parse().map_err(fail))
            .collect::<Result<_, _>>()?,
        levels: csv_rows(&out.join("spin_eigenvalues.csv"))?.len(),
    })
}

fn c5_levels(weak: &SpinRun, strong: &SpinRun) -> Outcome {
    check(
        strong.ks_wigner < strong.ks_poisson && weak.ks_poisson < weak.ks_wigner && weak.levels == 3003,
        format!(
            "eps=0.01: KS Poisson {:.3} < Wigner {:.3}; eps=0.5: KS Wigner {:.3} < Poisson {:.3}; {} levels",
            weak.ks_poisson, weak.ks_wigner, strong.ks_wigner, strong.ks_poisson, weak.levels
        ),
    )
}

fn c6_spin_chaos(weak: &SpinRun, strong: &SpinRun) -> Outcome {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mut sorted = strong.upsilon.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let (mw, ms) = (mean(&weak.upsilon), mean(&strong.upsilon));
    check(
        ms < mw && strong.upsilon[0] > median,
        format!(
            "mean Υ {mw:.3} -> {ms:.3} over {} block states; eps=0.5 first state {:.3} > median {median:.3}",
            strong.upsilon.len(),
            strong.upsilon[0]
        ),
    )
}

fn agreement_window(k: f64) -> Result<(usize, f64), String> {
    let params = RotorParams::new(k, 30).map_err(fail)?;
    let (s1, s2) = default_starts(30);
    let rows =
        three_distance_experiment(params, s1, s2, 40, DistanceConfig::default()).map_err(fail)?;
    let dev: Vec<f64> = rows[1..]
        .iter()
        .map(|r| (r.physical - r.classical).abs() / r.classical)
        .collect();
    let window = dev.iter().take_while(|&&d| d <= 0.25).count();
    Ok((window, dev[..3].iter().cloned().fold(0.0, f64::max)))
}

fn c7_rotor_agreement() -> Outcome {
    let (w_reg, first3) = agreement_window(0.3)?;
    let (w_chaos, _) = agreement_window(1.5)?;
    check(
        first3 <= 0.25 && w_chaos < w_reg,
        format!("K=0.3: max deviation over kicks 1-3 {first3:.3}, window {w_reg} kicks; K=1.5 window {w_chaos} kicks"),
    )
}

fn c8_linearity() -> Outcome {
    let params = RotorParams::new(1.5, 30).map_err(fail)?;
    let (s1, s2) = default_starts(30);
    let rows =
        three_distance_experiment(params, s1, s2, 50, DistanceConfig::default()).map_err(fail)?;
    let o0 = rows[0].overlap;
    let drift = rows
        .iter()
        .map(|r| (r.overlap - o0).abs())
        .fold(0.0, f64::max);
    let growth = rows.iter().map(|r| r.physical).fold(0.0, f64::max) / rows[0].physical;
    check(
        drift <= 1e-8 && growth >= 3.0,
        format!(
            "|<ψ1|ψ2>| = {o0:.6} drifts {drift:.1e} over 50 kicks; distance grows {growth:.2}x"
        ),
    )
}

fn c9_rotor_scans() -> Outcome {
    let cfg = DistanceConfig::default();
    let med = |k: f64| -> Result<f64, String> {
        let r = chaos_scan(
            RotorParams::new(k, 20).map_err(fail)?,
            LongTimeAverage::DiagonalEnsemble,
            cfg,
        )
        .map_err(fail)?;
        r.median().ok_or_else(|| "empty scan".to_string())
    };
    let (m_lo, m_hi) = (med(0.9)?, med(5.0)?);
    let params = RotorParams::new(4.7, 20).map_err(fail)?;
    let scan = RotorScan::new(params, LongTimeAverage::DiagonalEnsemble, cfg).map_err(fail)?;
    let (reg, chaos) = showcase_cells(params, 200);
    let u_reg = scan.cell_upsilon(reg.0, reg.1).map_err(fail)?;
    let u_chaos = scan.cell_upsilon(chaos.0, chaos.1).map_err(fail)?;
    check(
        m_lo > m_hi && u_reg >= 3.0 * u_chaos,
        format!(
            "median Υ {m_lo:.3} (K=0.9) > {m_hi:.3} (K=5); K=4.7 regular cell {reg:?} {u_reg:.3} vs chaotic {chaos:?} {u_chaos:.3} ({:.1}x)",
            u_reg / u_chaos
        ),
    )
}

fn c10_phase_identities() -> Outcome {
    let mut unit: f64 = 0.0;
    let (mut n_err, mut dn_err, mut c_theta): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut scaled = Vec::new();
    for l in [4usize, 6, 8] {
        let b = build_phase_lattice_1d(l, PhaseWindow::Shifted).map_err(fail)?;
        unit = unit.max(unitarity_residual(&b.matrix()));
        let big_n = (l * l - 1) as f64;
        let r = &localization_report(&b)[0];
        for c in &r.cells {
            n_err =
                n_err.max((c.mean_n - ((c.cell.ell * l) as f64 + (l as f64 - 1.0) / 2.0)).abs());
            dn_err = dn_err.max((c.delta_n - 1.0 / (12.0 * big_n).sqrt()).abs());
            c_theta = c_theta.max(c.c_theta.abs());
        }
        scaled.push(r.delta_theta * (l as f64).sqrt());
    }
    for l in [4usize, 6] {
        unit = unit.max(unitarity_residual(
            &build_phase_lattice_2d(l).map_err(fail)?.matrix(),
        ));
    }
    let spread = scaled.iter().cloned().fold(0.0, f64::max)
        / scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    check(
        unit <= 1e-8 && n_err <= 1e-10 && dn_err <= 1e-12 && c_theta <= 1e-10 && spread < 1.5,
        format!(
            "unitarity {unit:.1e}, <N> {n_err:.1e}, Δn {dn_err:.1e}, C_θ {c_theta:.1e}, Δθ·√L in [{:.3}, {:.3}]",
            scaled.iter().cloned().fold(f64::INFINITY, f64::min),
            scaled.iter().cloned().fold(0.0, f64::max)
        ),
    )
}

const REGULAR_SEED: (f64, f64) = (0.220, 0.8 * PI);
const CHAOTIC_SEED: (f64, f64) = (0.420, 0.8 * PI);

fn bh_context(l: usize) -> Result<BhChaosContext, String> {
    let params = BHParams::new(1.0, 2.0, l).map_err(fail)?;
    BhChaosContext::new(params, SectionSpec::reference(1.0), 1.0 / (3.0 * l as f64)).map_err(fail)
}

fn c11_bose_hubbard(l6: &BhChaosContext) -> Outcome {
    let pair = |ctx: &BhChaosContext| -> Result<(f64, f64), String> {
        Ok((
            ctx.point_upsilon(REGULAR_SEED.0, REGULAR_SEED.1)
                .map_err(fail)?,
            ctx.point_upsilon(CHAOTIC_SEED.0, CHAOTIC_SEED.1)
                .map_err(fail)?,
        ))
    };
    let (r6, c6) = pair(l6)?;
    let (r8, c8) = pair(&bh_context(8)?)?;
    let params = BHParams::new(1.0, 2.0, 6).map_err(fail)?;
    let spec = SectionSpec::reference(1.0);
    let island = section_points(&spec, &params, REGULAR_SEED, 400.0, DEFAULT_DT).map_err(fail)?;
    let sea = section_points(&spec, &params, CHAOTIC_SEED, 400.0, DEFAULT_DT).map_err(fail)?;
    let (di, ds) = (section_dispersion(&island), section_dispersion(&sea));
    check(
        r6 > c6 && r8 > c8 && di < ds / 10.0,
        format!("L=6: Υ {r6:.4} > {c6:.4}; L=8: Υ {r8:.4} > {c8:.4}; dispersion island {di:.2e} vs sea {ds:.3}"),
    )
}

fn c12_energy_shell(l6: &BhChaosContext) -> Outcome {
    let s = l6.shell();
    check(
        s.fit.r_squared >= 0.95 && s.captured_mean > 0.0 && s.captured_mean <= 1.0,
        format!(
            "L=6: R² = {:.4}, {} shell cells, captured fraction {:.1}% ± {:.1}%",
            s.fit.r_squared,
            s.cells.len(),
            100.0 * s.captured_mean,
            100.0 * s.captured_std
        ),
    )
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= y * proj;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

fn propagator(h: &CMatrix, dt: f64) -> CMatrix {
    let n = h.nrows();
    let squarings = 10;
    let a = h * Complex64::new(0.0, -dt / f64::from(1 << squarings));
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..20 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn c13_properties(tmp: &Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut notes = Vec::new();
    let mut ok = true;

    // Transport feasibility and the 1-D oracle on random instances.
    let (mut marg, mut oracle): (f64, f64) = (0.0, 0.0);
    for _ in 0..40 {
        let n = rng.random_range(2..40);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let draw = |rng: &mut ChaCha8Rng| {
            Distribution::from_masses((0..xs.len()).map(|_| rng.random_range(0.0..1.0)).collect())
                .unwrap()
        };
        let (p, q) = (draw(&mut rng), draw(&mut rng));
        let space = line_metric(&xs).map_err(fail)?;
        for lambda in [1, 2] {
            let cfg = DistanceConfig::new(lambda).map_err(fail)?;
            let plan = transport_plan(&p, &q, &space, cfg).map_err(fail)?;
            marg = marg.max(plan.marginal_error(&p, &q));
            let d = wasserstein(&p, &q, &space, cfg).map_err(fail)?;
            let o = wasserstein_1d(&p, &q, &xs, cfg).map_err(fail)?;
            oracle = oracle.max((d - o).abs());
        }
    }
    ok &= marg <= 1e-9 && oracle <= 1e-9;
    notes.push(format!("marginals {marg:.1e}, 1-D oracle {oracle:.1e}"));

    // Metric axioms of every constructor.
    let pts: Vec<f64> = (0..12).map(|_| rng.random_range(0.0..6.0)).collect();
    let bits: Vec<Vec<bool>> = (0..12)
        .map(|_| (0..6).map(|_| rng.random_bool(0.5)).collect())
        .collect();
    let modes = MetricSpace::from_matrix(3, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0])
        .map_err(fail)?;
    let occ: Vec<Vec<u32>> = (0..=4)
        .flat_map(|a| (0..=4 - a).map(move |b| vec![a, b, 4 - a - b]))
        .collect();
    let spaces = [
        line_metric(&pts).map_err(fail)?,
        torus_metric_1d(&pts, 6.0).map_err(fail)?,
        hamming_metric(&bits).map_err(fail)?,
        occupied_positions_metric(&spin_basis(7, 3)).map_err(fail)?,
        fock_metric(&occ, &modes, &[1.0, 1.0, 1.0]).map_err(fail)?,
    ];
    let tri = spaces
        .iter()
        .map(|s| s.triangle_violation())
        .fold(0.0, f64::max);
    ok &= tri <= 1e-12;
    notes.push(format!("triangle violation {tri:.1e}"));

    // Unitarity and Hermiticity residuals of the model operators.
    let floquet = unitarity_residual(
        &QuantumRotor::new(RotorParams::new(1.5, 30).map_err(fail)?).floquet_matrix(),
    );
    let h_bh = build_bh_hamiltonian(&BHParams::with_particles(1.0, 2.0, 20).map_err(fail)?);
    let bh = (&h_bh - h_bh.transpose()).abs().max();
    let h_spin =
        build_xxz_hamiltonian(&SpinChainParams::new(10, 4, 1.0, 0.5, 0.5, 2).map_err(fail)?);
    let spin = (&h_spin - h_spin.transpose()).abs().max();
    ok &= floquet <= 1e-10 && bh <= 1e-12 && spin <= 1e-12;
    notes.push(format!(
        "Floquet unitarity {floquet:.1e}, Hermiticity {:.1e}",
        bh.max(spin)
    ));

    // Diagonal ensemble against an explicit time average.
    let energies = [-2.1, -1.3, -0.2, 0.7, 1.6, 2.9];
    let qm = random_unitary(&mut rng, 6);
    let h =
        &qm * CMatrix::from_fn(6, 6, |i, j| {
            if i == j {
                Complex64::new(energies[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }) * qm.adjoint();
    let herm = hermiticity_residual(&h);
    let amps: Vec<Complex64> = (0..6)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let psi0 = StateVector::normalized(amps).map_err(fail)?;
    let rho = diagonal_ensemble(&psi0, &diagonalize(&h).map_err(fail)?).map_err(fail)?;
    let u = propagator(&h, 0.37);
    let steps = 100_000;
    let mut psi = CMatrix::from_column_slice(6, 1, psi0.amplitudes());
    let mut acc = CMatrix::zeros(6, 6);
    for _ in 0..steps {
        acc += &psi * psi.adjoint();
        psi = &u * psi;
    }
    acc /= Complex64::new(steps as f64, 0.0);
    let ens = (rho.matrix() - acc)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    ok &= ens <= 1e-3 && herm <= 1e-12;
    notes.push(format!("ensemble vs time average {ens:.1e}"));

    // N-boson scaling.
    let d12 = 0.7;
    let two = MetricSpace::from_matrix(2, vec![0.0, d12, d12, 0.0]).map_err(fail)?;
    let (a2, b2): (f64, f64) = (0.8, 0.2);
    let mut scaling: f64 = 0.0;
    for n in [2u32, 5, 10, 20] {
        let occ: Vec<Vec<u32>> = (0..=n).map(|k| vec![n - k, k]).collect();
        let space = fock_metric(&occ, &two, &[1.0, 1.0]).map_err(fail)?;
        let binom = |k: u32| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
        let spread = Distribution::new(
            (0..=n)
                .map(|k| binom(k) * b2.powi(k as i32) * a2.powi((n - k) as i32))
                .collect(),
        )
        .map_err(fail)?;
        let d = wasserstein(
            &Distribution::point_mass(occ.len(), 0),
            &spread,
            &space,
            DistanceConfig::default(),
        )
        .map_err(fail)?;
        scaling = scaling.max((d - n as f64 * b2 * d12).abs());
    }
    ok &= scaling <= 1e-6;
    notes.push(format!("N-boson scaling {scaling:.1e}"));

    // CSV byte-determinism through the CLI.
    let (da, db) = (tmp.join("det-a"), tmp.join("det-b"));
    for d in [&da, &db] {
        physdist(&["rotor-evolve", "-m", "16", "--kicks", "8"], d)?;
        physdist(&["rotor-scan", "-m", "8"], d)?;
    }
    let same = ["rotor_evolve.csv", "rotor_scan.csv", "rotor_scan.pgm"]
        .iter()
        .all(|f| fs::read(da.join(f)).ok() == fs::read(db.join(f)).ok());
    ok &= same;
    notes.push(format!(
        "CSV determinism {}",
        if same { "ok" } else { "BROKEN" }
    ));

    check(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let tmp = tmp.path();
    let mut failures = 0;
    let mut report = |n: usize, name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {n:>2} {name} [{secs:.1}s]: {d}"),
            Err(d) => {
                failures += 1;
                println!("FAIL {n:>2} {name} [{secs:.1}s]: {d}");
            }
        }
    };

    let t = Instant::now();
    report(1, "transport golden values", t, c1_golden(tmp));
    let t = Instant::now();
    report(2, "entropy contrast", t, c2_entropy());
    let t = Instant::now();
    report(3, "Gaussian closed form", t, c3_gaussian());
    let t = Instant::now();
    report(4, "spin metric", t, c4_spin_metric());

    let t = Instant::now();
    let spins = spin_run(tmp, "0.01").and_then(|w| spin_run(tmp, "0.5").map(|s| (w, s)));
    match &spins {
        Ok((w, s)) => {
            report(5, "XXZ level statistics", t, c5_levels(w, s));
            report(6, "XXZ chaos measure", Instant::now(), c6_spin_chaos(w, s));
        }
        Err(e) => {
            report(5, "XXZ level statistics", t, Err(e.clone()));
            report(6, "XXZ chaos measure", Instant::now(), Err(e.clone()));
        }
    }

    let t = Instant::now();
    report(7, "rotor short-time agreement", t, c7_rotor_agreement());
    let t = Instant::now();
    report(8, "rotor linearity vs divergence", t, c8_linearity());
    let t = Instant::now();
    report(9, "rotor chaos scans", t, c9_rotor_scans());
    let t = Instant::now();
    report(10, "phase-cell identities", t, c10_phase_identities());

    let t = Instant::now();
    match bh_context(6) {
        Ok(l6) => {
            report(
                11,
                "Bose-Hubbard regular vs chaotic",
                t,
                c11_bose_hubbard(&l6),
            );
            report(12, "energy shell", Instant::now(), c12_energy_shell(&l6));
        }
        Err(e) => {
            report(11, "Bose-Hubbard regular vs chaotic", t, Err(e.clone()));
            report(12, "energy shell", Instant::now(), Err(e));
        }
    }

    let t = Instant::now();
    report(13, "property suites", t, c13_properties(tmp));

    println!("{} of 13 criteria passed", 13 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
