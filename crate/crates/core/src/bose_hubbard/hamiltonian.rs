use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::MeanFieldState;
use crate::math::ln_factorial;
use crate::quantum::StateVector;
use crate::{Error, Result};

/// Largest Fock-space dimension accepted for dense work.
pub const MAX_FOCK_DIM: usize = 8000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BHParams {
    c0: f64,
    c: f64,
    n: usize,
    l: Option<usize>,
}

impl BHParams {
    /// Parameters at cell resolution `L`, with `N = L² − 1` bosons.
    pub fn new(c0: f64, c: f64, l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidInput(
                "resolution L must be at least 2".into(),
            ));
        }
        let mut p = Self::with_particles(c0, c, l * l - 1)?;
        p.l = Some(l);
        Ok(p)
    }

    /// Parameters for an arbitrary particle number; no cell basis attached.
    pub fn with_particles(c0: f64, c: f64, n: usize) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "hopping c0 = {c0} must be positive"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidInput("interaction must be finite".into()));
        }
        if n == 0 {
            return Err(Error::InvalidInput("need at least one boson".into()));
        }
        let dim = (n + 1) * (n + 2) / 2;
        if dim > MAX_FOCK_DIM {
            return Err(Error::ResourceLimit(format!(
                "Fock dimension {dim} exceeds {MAX_FOCK_DIM}"
            )));
        }
        Ok(Self { c0, c, n, l: None })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> Option<usize> {
        self.l
    }

    pub fn fock_dim(&self) -> usize {
        (self.n + 1) * (self.n + 2) / 2
    }
}

/// Fock states `|N₁,N₂,N₃⟩` with `ΣN_i = N`, ordered by `(N₁, N₂)`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n: usize,
    states: Vec<[usize; 3]>,
    lookup: Vec<usize>,
}

impl FockBasis {
    pub fn new(n: usize) -> Self {
        let mut states = Vec::with_capacity((n + 1) * (n + 2) / 2);
        let mut lookup = vec![usize::MAX; (n + 1) * (n + 1)];
        for n1 in 0..=n {
            for n2 in 0..=n - n1 {
                lookup[n1 * (n + 1) + n2] = states.len();
                states.push([n1, n2, n - n1 - n2]);
            }
        }
        Self { n, states, lookup }
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[[usize; 3]] {
        &self.states
    }

    pub fn index(&self, n1: usize, n2: usize) -> Option<usize> {
        if n1 + n2 > self.n {
            return None;
        }
        Some(self.lookup[n1 * (self.n + 1) + n2])
    }

    fn index_of(&self, s: [usize; 3]) -> usize {
        self.lookup[s[0] * (self.n + 1) + s[1]]
    }
}

/// Real symmetric Hamiltonian on the `N`-particle Fock basis.
pub fn build_bh_hamiltonian(params: &BHParams) -> DMatrix<f64> {
    let basis = FockBasis::new(params.particles());
    let dim = basis.len();
    let n = params.particles() as f64;
    let u = params.c() / (2.0 * n);
    let mut h = DMatrix::zeros(dim, dim);
    for (a, s) in basis.states().iter().enumerate() {
        h[(a, a)] = s
            .iter()
            .map(|&k| u * (k * k.saturating_sub(1)) as f64)
            .sum();
        for i in 0..3 {
            for j in 0..3 {
                if i == j || s[j] == 0 {
                    continue;
                }
                let mut t = *s;
                t[j] -= 1;
                t[i] += 1;
                let b = basis.index_of(t);
                h[(b, a)] += -0.5 * params.c0() * (((s[i] + 1) * s[j]) as f64).sqrt();
            }
        }
    }
    h
}

/// `(N!)^{-1/2} (Σ a_i a_i†)^N |0⟩` on the Fock basis.
pub fn coherent_state(a: &MeanFieldState, n: usize) -> StateVector {
    let basis = FockBasis::new(n);
    let amps = a.amplitudes();
    let ln_nf = ln_factorial(n as u32);
    let v = basis
        .states()
        .iter()
        .map(|s| {
            let mut ln_mod = 0.5 * ln_nf;
            let mut phase = 0.0;
            for i in 0..3 {
                let k = s[i];
                if k == 0 {
                    continue;
                }
                let r = amps[i].norm();
                if r == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                ln_mod += k as f64 * r.ln() - 0.5 * ln_factorial(k as u32);
                phase += k as f64 * amps[i].arg();
            }
            Complex64::from_polar(ln_mod.exp(), phase)
        })
        .collect();
    StateVector::normalized(v).expect("multinomial weights sum to one")
}
