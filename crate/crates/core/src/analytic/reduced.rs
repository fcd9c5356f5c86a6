use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::Result;
use crate::model::{Electron, GaussianPacket, InterferometerParams};

/// Single-electron reduced state of the post-selected pair, expanded in the
/// non-orthogonal basis `{|Φ⟩, |Φ^∓⟩}`.
///
/// `ρ = Σ coeff[i][j] |fᵢ⟩⟨fⱼ|`; traces go through the Gram matrix
/// `[[1, I], [I, 1]]` of the basis rather than through any discretization.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub coeff: Matrix2<Complex64>,
    pub gram: Matrix2<f64>,
    pub electron: Electron,
    basis: [GaussianPacket; 2],
}

impl ReducedState {
    fn weighted(&self) -> Matrix2<Complex64> {
        self.coeff * self.gram.map(|g| Complex64::new(g, 0.0))
    }

    /// `Tr ρ`, the unnormalized post-selection weight.
    pub fn trace(&self) -> f64 {
        self.weighted().trace().re
    }

    /// `Tr ρ² / (Tr ρ)²`.
    pub fn purity(&self) -> f64 {
        let m = self.weighted();
        let tr = m.trace().re;
        (m * m).trace().re / (tr * tr)
    }

    /// Diagonal `⟨p|ρ|p⟩`, unnormalized.
    pub fn density(&self, p: f64) -> f64 {
        let f = [self.basis[0].value(p), self.basis[1].value(p)];
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += self.coeff[(i, j)].re * f[i] * f[j];
            }
        }
        acc
    }

    pub fn normalized_density(&self, p: f64) -> f64 {
        self.density(p) / self.trace()
    }

    pub fn basis(&self) -> &[GaussianPacket; 2] {
        &self.basis
    }
}

/// Partial trace of the post-selected pair state over the other electron.
pub fn reduced_state(params: &InterferometerParams, electron: Electron) -> Result<ReducedState> {
    let i = params.overlap();
    let c = params.phi().cos();
    let off = Complex64::from_polar(i * c, -params.alpha());
    let coeff = Matrix2::new(
        Complex64::new(1.0, 0.0),
        off,
        off.conj(),
        Complex64::new(c * c, 0.0),
    );
    let state = ReducedState {
        coeff,
        gram: Matrix2::new(1.0, i, i, 1.0),
        electron,
        basis: [params.packet(), params.kicked_packet(electron)],
    };
    super::checked_norm(params)?;
    Ok(state)
}
