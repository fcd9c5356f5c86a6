//! Brute-force constructions on the two-electron momentum product grid.
//!
//! These build `ψ(p₁, p₂) = Φ(p₁)Φ(p₂) + e^{iα} cosφ Φ(p₁+δ)Φ(p₂−δ)`
//! sample by sample and integrate numerically, without using the overlap
//! `I` or any of the closed forms in [`crate::analytic`].

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::Result;
use crate::model::{Electron, InterferometerParams};

use super::grid::{Distribution1D, MomentumGrid};

/// Largest tolerated truncated probability mass at the grid edges.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Post-selected pair wavefunction sampled on `grid × grid`, row-major with
/// electron 1 along rows.
struct JointState {
    grid: MomentumGrid,
    amplitude: Vec<Complex64>,
}

impl JointState {
    fn build(params: &InterferometerParams, grid: &MomentumGrid) -> Result<Self> {
        let plain = params.packet();
        let kicked1 = params.kicked_packet(Electron::One);
        let kicked2 = params.kicked_packet(Electron::Two);
        grid.require_span(&[plain, kicked1, kicked2], TAIL_LIMIT)?;

        let points = grid.points();
        let f0: Vec<f64> = points.iter().map(|&p| plain.value(p)).collect();
        let f1: Vec<f64> = points.iter().map(|&p| kicked1.value(p)).collect();
        let f2: Vec<f64> = points.iter().map(|&p| kicked2.value(p)).collect();
        let weight = Complex64::from_polar(params.phi().cos(), params.alpha());

        let n = grid.len();
        let mut amplitude = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                amplitude.push(Complex64::new(f0[i] * f0[j], 0.0) + weight * (f1[i] * f2[j]));
            }
        }
        Ok(Self {
            grid: *grid,
            amplitude,
        })
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.amplitude[i * self.grid.len() + j]
    }
}

/// Marginal momentum density of one electron, obtained by squaring the
/// sampled pair state and integrating out the other electron.
pub fn joint_marginal_oracle(
    params: &InterferometerParams,
    grid: &MomentumGrid,
    electron: Electron,
) -> Result<Distribution1D> {
    let state = JointState::build(params, grid)?;
    let n = grid.len();
    let mut row = vec![0.0; n];
    let mut marginal = Vec::with_capacity(n);
    for i in 0..n {
        for (j, slot) in row.iter_mut().enumerate() {
            let amp = match electron {
                Electron::One => state.at(i, j),
                Electron::Two => state.at(j, i),
            };
            *slot = amp.norm_sqr();
        }
        marginal.push(grid.integrate(&row)?);
    }
    Distribution1D::new(*grid, marginal)?.normalize()
}

/// Purity `Tr ρ² / (Tr ρ)²` of one electron's reduced state, from the
/// eigenvalues of the Simpson-weighted kernel `√wᵢ ρ(pᵢ, pⱼ) √wⱼ` where
/// `ρ(p, p') = ∫ ψ(p, q) ψ*(p', q) dq`.
pub fn kernel_purity(
    params: &InterferometerParams,
    grid: &MomentumGrid,
    electron: Electron,
) -> Result<f64> {
    let state = JointState::build(params, grid)?;
    let n = grid.len();
    let weights = grid.simpson_weights();
    let amp = |own: usize, other: usize| match electron {
        Electron::One => state.at(own, other),
        Electron::Two => state.at(other, own),
    };

    let mut kernel = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (q, w) in weights.iter().enumerate() {
                acc += amp(a, q) * amp(b, q).conj() * *w;
            }
            let value = acc * (weights[a] * weights[b]).sqrt();
            kernel[(a, b)] = value;
            kernel[(b, a)] = value.conj();
        }
    }

    let eigen = SymmetricEigen::new(kernel);
    let trace: f64 = eigen.eigenvalues.iter().sum();
    let square: f64 = eigen.eigenvalues.iter().map(|l| l * l).sum();
    if trace <= crate::model::DARK_PORT_EPS {
        return Err(crate::error::Error::ZeroProbability {
            norm: trace,
            threshold: crate::model::DARK_PORT_EPS,
        });
    }
    Ok(square / (trace * trace))
}
