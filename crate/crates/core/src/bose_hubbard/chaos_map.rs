use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;

use super::{
    build_bh_hamiltonian, coherent_state, energy_shell_reference, lift_to_section, BHParams,
    BhCellBasis, EnergyShell, SectionSpec, SHELL_WIDTH, SMOOTHING_WINDOW,
};
use crate::chaos::ChaosScanResult;
use crate::linalg::{diagonalize_real_symmetric, Eigensystem};
use crate::ot::{wasserstein, DistanceConfig, Distribution, MetricSpace};
use crate::quantum::{Basis, EnsembleProjector, StateVector};
use crate::{Error, Result};

/// Everything a Bose–Hubbard chaos map shares between grid points: one
/// diagonalization, the cell basis and the fitted energy shell.
#[derive(Debug)]
pub struct BhChaosContext {
    params: BHParams,
    spec: SectionSpec,
    grid_step: f64,
    n1_coords: Vec<f64>,
    theta_coords: Vec<f64>,
    basis: BhCellBasis,
    eig: Eigensystem,
    projector: EnsembleProjector,
    shell: EnergyShell,
    shell_space: MetricSpace,
}

impl BhChaosContext {
    /// `grid_step` is in units of the section axes `n₁ ∈ [0, 1]` and `θ₁/2π ∈ [0, 1)`.
    pub fn new(params: BHParams, spec: SectionSpec, grid_step: f64) -> Result<Self> {
        if !(grid_step > 0.0 && grid_step <= 0.5) {
            return Err(Error::InvalidInput(format!(
                "grid step {grid_step} must lie in (0, 0.5]"
            )));
        }
        let basis = BhCellBasis::new(&params)?;
        let h = build_bh_hamiltonian(&params);
        let eig = diagonalize_real_symmetric(h.clone())?;
        let cells = (1.0 / grid_step).round() as usize;
        let n1_coords: Vec<f64> = (0..cells)
            .map(|k| (k as f64 + 0.5) * grid_step)
            .filter(|&x| x < 1.0)
            .collect();
        let theta_coords: Vec<f64> = (0..cells)
            .map(|k| TAU * (k as f64 + 0.5) * grid_step)
            .collect();

        let mut packets = Vec::new();
        for &n1 in &n1_coords {
            for &t in &theta_coords {
                if let Ok(s) = lift_to_section(&spec, &params, n1, t) {
                    packets.push(coherent_state(&s, params.particles()));
                }
            }
        }
        if packets.is_empty() {
            return Err(Error::EmptyWindow { samples: 0 });
        }
        let shell = energy_shell_reference(&h, &eig, &basis, &packets)?;
        let shell_space = basis.space().restrict(&shell.cells);
        let projector = EnsembleProjector::new(&eig, &basis)?;
        Ok(Self {
            params,
            spec,
            grid_step,
            n1_coords,
            theta_coords,
            basis,
            eig,
            projector,
            shell,
            shell_space,
        })
    }

    pub fn params(&self) -> &BHParams {
        &self.params
    }

    pub fn basis(&self) -> &BhCellBasis {
        &self.basis
    }

    pub fn eigensystem(&self) -> &Eigensystem {
        &self.eig
    }

    pub fn shell(&self) -> &EnergyShell {
        &self.shell
    }

    pub fn n1_coords(&self) -> &[f64] {
        &self.n1_coords
    }

    pub fn theta_coords(&self) -> &[f64] {
        &self.theta_coords
    }

    /// Coherent state at a section point.
    pub fn packet(&self, n1: f64, theta1: f64) -> Result<StateVector> {
        let s = lift_to_section(&self.spec, &self.params, n1, theta1)?;
        Ok(coherent_state(&s, self.params.particles()))
    }

    /// Long-time cell distribution of the packet at `(n₁, θ₁)`, over all cells.
    pub fn long_time_distribution(&self, n1: f64, theta1: f64) -> Result<Distribution> {
        self.projector.project(&self.packet(n1, theta1)?)
    }

    /// `Υ = D₁(P_erg, P_c)` inside the energy shell.
    pub fn point_upsilon(&self, n1: f64, theta1: f64) -> Result<f64> {
        let p = self
            .shell
            .restrict(&self.long_time_distribution(n1, theta1)?)?;
        wasserstein(
            &self.shell.reference,
            &p,
            &self.shell_space,
            DistanceConfig::default(),
        )
    }

    /// `Υ` at grid point `(row, col)`; `None` when the point is off the energy surface.
    pub fn grid_upsilon(&self, row: usize, col: usize) -> Result<Option<f64>> {
        match self.point_upsilon(self.n1_coords[row], self.theta_coords[col]) {
            Ok(v) => Ok(Some(v)),
            Err(Error::Unreachable { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn rows(&self) -> usize {
        self.n1_coords.len()
    }

    pub fn cols(&self) -> usize {
        self.theta_coords.len()
    }

    /// Packs row-major grid values into the map.
    pub fn assemble(&self, values: Vec<Option<f64>>) -> BhChaosMap {
        let fit = self.shell.fit;
        let kv = |k: &str, v: String| (String::from(k), v);
        let metadata = alloc::vec![
            kv("model", "bose-hubbard".into()),
            kv("c0", format!("{}", self.params.c0())),
            kv("c", format!("{}", self.params.c())),
            kv("L", format!("{}", self.basis.resolution())),
            kv("N", format!("{}", self.params.particles())),
            kv("E", format!("{}", self.spec.energy)),
            kv("n2_plane", format!("{}", self.spec.n2_plane)),
            kv("grid_step", format!("{}", self.grid_step)),
            kv("lambda", "1".into()),
            kv("reference", "energy-shell".into()),
            kv("smoothing_window", format!("{SMOOTHING_WINDOW}")),
            kv("shell_width_sigma", format!("{SHELL_WIDTH}")),
            kv("fit_mean", format!("{:.12}", fit.mean)),
            kv("fit_sigma", format!("{:.12}", fit.sigma)),
            kv("fit_r_squared", format!("{:.6}", fit.r_squared)),
            kv("shell_cells", format!("{}", self.shell.cells.len())),
            kv(
                "captured_fraction_mean",
                format!("{:.6}", self.shell.captured_mean)
            ),
            kv(
                "captured_fraction_std",
                format!("{:.6}", self.shell.captured_std)
            ),
        ];
        BhChaosMap {
            scan: ChaosScanResult {
                rows: self.rows(),
                cols: self.cols(),
                values,
                row_coords: self.n1_coords.clone(),
                col_coords: self.theta_coords.clone(),
                metadata,
            },
            fit,
            captured_mean: self.shell.captured_mean,
            captured_std: self.shell.captured_std,
        }
    }
}

/// A chaos map over the `(n₁, θ₁)` section plane together with its shell fit.
#[derive(Debug, Clone)]
pub struct BhChaosMap {
    pub scan: ChaosScanResult,
    pub fit: super::GaussianFit,
    pub captured_mean: f64,
    pub captured_std: f64,
}

/// Sequential chaos map over the whole grid.
pub fn bh_chaos_map(params: BHParams, spec: SectionSpec, grid_step: f64) -> Result<BhChaosMap> {
    let ctx = BhChaosContext::new(params, spec, grid_step)?;
    let mut values = Vec::with_capacity(ctx.rows() * ctx.cols());
    for r in 0..ctx.rows() {
        for c in 0..ctx.cols() {
            values.push(ctx.grid_upsilon(r, c)?);
        }
    }
    Ok(ctx.assemble(values))
}
