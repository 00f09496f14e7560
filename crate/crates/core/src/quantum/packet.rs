use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::StateVector;
use crate::math::wrap_signed;
use crate::{Error, Result};

/// A Gaussian wave packet `∝ exp[−(x−x₀)²/(4σ²) + i p₀(x−x₀)/ħ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub center_x: f64,
    pub center_p: f64,
    /// Position-space standard deviation of `|ψ|²`.
    pub sigma: f64,
}

impl GaussianPacket {
    pub fn new(center_x: f64, center_p: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) || !center_x.is_finite() || !center_p.is_finite() {
            return Err(Error::InvalidInput(
                "packet needs finite centers and sigma > 0".into(),
            ));
        }
        Ok(Self {
            center_x,
            center_p,
            sigma,
        })
    }

    /// The minimum-uncertainty packet with equal relative spread in `x` and `p`,
    /// `exp[−(x−x₀)²/(2ħ)]`, i.e. `σ = √(ħ/2)`.
    pub fn maximally_localized(center_x: f64, center_p: f64, hbar: f64) -> Result<Self> {
        Self::new(center_x, center_p, (0.5 * hbar).sqrt())
    }

    fn amplitude(&self, dx: f64, hbar: f64) -> Complex64 {
        let env = (-dx * dx / (4.0 * self.sigma * self.sigma)).exp();
        Complex64::from_polar(env, self.center_p * dx / hbar)
    }
}

/// Samples the packet on grid points of the circle `[0, 2π)`, wrapping `x − x₀`
/// into `[−π, π)`, and renormalizes.
pub fn gaussian_packet_state(
    packet: &GaussianPacket,
    grid: &[f64],
    hbar: f64,
) -> Result<StateVector> {
    check_grid(packet, grid, hbar, Some(TAU))?;
    let amps: Vec<Complex64> = grid
        .iter()
        .map(|&x| packet.amplitude(wrap_signed(x - packet.center_x), hbar))
        .collect();
    StateVector::normalized(amps)
}

/// Samples the packet on an open line and renormalizes.
pub fn gaussian_line_state(
    packet: &GaussianPacket,
    grid: &[f64],
    hbar: f64,
) -> Result<StateVector> {
    check_grid(packet, grid, hbar, None)?;
    let amps: Vec<Complex64> = grid
        .iter()
        .map(|&x| packet.amplitude(x - packet.center_x, hbar))
        .collect();
    StateVector::normalized(amps)
}

fn check_grid(packet: &GaussianPacket, grid: &[f64], hbar: f64, period: Option<f64>) -> Result<()> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidInput("hbar must be positive".into()));
    }
    if grid.len() < 2 {
        return Err(Error::InvalidInput("grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::UnsortedPositions);
    }
    let mut step = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if let Some(p) = period {
        step = step.max(grid[0] + p - grid[grid.len() - 1]);
    }
    if packet.sigma < step {
        return Err(Error::GridTooCoarse {
            sigma: packet.sigma,
            step,
        });
    }
    Ok(())
}
