//! Three-site Bose–Hubbard model, its mean-field limit and the chaos map over
//! a Poincaré section.
//!
//! ```text
//! H = −(c₀/2) Σ_{i≠j} a_i† a_j + (c/2N) Σ_j a_j† a_j† a_j a_j
//! ```

mod cells;
mod chaos_map;
mod hamiltonian;
mod meanfield;
mod section;
mod shell;

pub use cells::{bh_cell_metric, BhCellBasis};
pub use chaos_map::{bh_chaos_map, BhChaosContext, BhChaosMap};
pub use hamiltonian::{build_bh_hamiltonian, coherent_state, BHParams, FockBasis, MAX_FOCK_DIM};
pub use meanfield::{meanfield_flow, rk4_step, MeanFieldState, Trajectory, DEFAULT_DT};
pub use section::{
    detect_crossings, find_periodic_point, lift_to_section, poincare_section, return_map,
    section_dispersion, section_points, Direction, SectionPoint, SectionSpec, CROSSING_TOL,
};
pub use shell::{
    energy_shell_reference, fit_gaussian, EnergyShell, GaussianFit, SHELL_WIDTH, SMOOTHING_WINDOW,
};
