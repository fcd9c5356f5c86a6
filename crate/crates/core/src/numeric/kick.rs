//! End-to-end check of the impulsive interaction: a position-space phase
//! `exp(−iδx)` must rigidly displace the momentum density by −δ.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{non_negative, Error, Result};
use crate::model::GaussianPacket;

use super::grid::{erfc_upper, Distribution1D, MomentumGrid};
use super::joint::TAIL_LIMIT;

/// Largest allowed phase advance `δ·Δx` between neighbouring position samples.
pub const MAX_PHASE_STEP: f64 = PI / 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickReport {
    /// `max_k | |Φ̃(p_k)|² − |Φ(p_k + δ)|² |`
    pub max_density_deviation: f64,
    /// Mean of the kicked density minus the packet center.
    pub mean_shift: f64,
    /// Spread of the kicked density minus that of the input packet.
    pub width_change: f64,
    /// Relative L² norm change across the transform.
    pub parseval_error: f64,
}

/// Apply `exp(−iδx)` to the position-space packet and transform back to the
/// momentum grid with a DFT.
///
/// The position grid is the reciprocal of `grid`: `Δx = 2π / (n Δp)`,
/// centered on the origin. With `ψ(x) = (2π)^{-1/2} ∫ Φ(p) e^{ipx} dp`, the
/// centered packet is `π^{-1/4} W^{1/2} exp(−x²W²/2)` and a packet centered
/// at `c` picks up `e^{icx}`.
pub fn momentum_kick_oracle(
    packet: &GaussianPacket,
    delta: f64,
    grid: &MomentumGrid,
) -> Result<KickReport> {
    non_negative("delta", delta)?;
    let n = grid.len();
    let dp = grid.spacing();
    let dx = 2.0 * PI / (n as f64 * dp);
    let phase_step = delta * dx;
    if phase_step > MAX_PHASE_STEP {
        return Err(Error::Aliasing {
            phase_step,
            limit: MAX_PHASE_STEP,
        });
    }
    let target = packet.shifted(-delta);
    grid.require_span(&[*packet, target], TAIL_LIMIT)?;
    let x_half = (n - 1) as f64 / 2.0 * dx;
    let position_tail = erfc_upper(x_half * packet.width());
    if position_tail > TAIL_LIMIT {
        return Err(Error::InsufficientGrid {
            tail_mass: position_tail,
            limit: TAIL_LIMIT,
        });
    }

    let w = packet.width();
    let c = packet.center();
    let x0 = -x_half;
    let p0 = grid.p_min();
    let amp0 = PI.powf(-0.25) * w.sqrt();

    let mut buffer: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = x0 + j as f64 * dx;
            let psi = Complex64::from_polar(amp0 * (-0.5 * x * x * w * w).exp(), c * x);
            let kicked = psi * Complex64::from_polar(1.0, -delta * x);
            kicked * Complex64::from_polar(1.0, -p0 * j as f64 * dx)
        })
        .collect();
    let position_norm: f64 = buffer.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx;

    FftPlanner::new().plan_fft_forward(n).process(&mut buffer);

    let scale = dx / (2.0 * PI).sqrt();
    let momentum: Vec<Complex64> = buffer
        .into_iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(scale, -(p0 + k as f64 * dp) * x0))
        .collect();
    let momentum_norm: f64 = momentum.iter().map(|v| v.norm_sqr()).sum::<f64>() * dp;

    let points = grid.points();
    let density: Vec<f64> = momentum.iter().map(|v| v.norm_sqr()).collect();
    let max_density_deviation = points
        .iter()
        .zip(&density)
        .map(|(&p, d)| (d - target.value(p).powi(2)).abs())
        .fold(0.0, f64::max);

    let kicked = Distribution1D::new(*grid, density)?;
    Ok(KickReport {
        max_density_deviation,
        mean_shift: kicked.mean() - c,
        width_change: kicked.std_dev() - packet.density_std(),
        parseval_error: (momentum_norm - position_norm).abs() / position_norm,
    })
}
