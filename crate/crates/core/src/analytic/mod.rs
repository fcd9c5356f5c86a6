//! Closed-form post-selected distributions, means and the full exit-port
//! algebra.
//!
//! The post-selected (D₁, C₂) two-electron state is
//! `|Φ₁⟩|Φ₂⟩ + e^{iα} cosφ |Φ₁⁻⟩|Φ₂⁺⟩`, whose two branches overlap by
//! `⟨Φ₁Φ₂|Φ₁⁻Φ₂⁺⟩ = I²`. All quantities below follow from that structure.

mod ports;
mod reduced;

pub use ports::{
    all_port_amplitudes, ehrenfest_check, ehrenfest_check_for, port_mean_momenta,
    port_probabilities, BranchAmplitudes, EhrenfestPair, PortAmplitudes,
};
pub use reduced::{reduced_state, ReducedState};

use crate::error::{non_negative, positive, Error, Result};
use crate::model::{Electron, InterferometerParams, DARK_PORT_EPS};

/// `I = ∫Φ(p)Φ(p − δ)dp = exp(−δ²/4W²)`.
pub fn overlap_i(delta: f64, width: f64) -> Result<f64> {
    positive("width", width)?;
    non_negative("delta", delta)?;
    let x = delta / width;
    Ok((-0.25 * x * x).exp())
}

/// Integral of the unnormalized post-selected marginal:
/// `1 + cos²φ + 2 cosφ cosα I²`.
pub fn postselected_norm(params: &InterferometerParams) -> f64 {
    let c = params.phi().cos();
    let i = params.overlap();
    1.0 + c * c + 2.0 * c * params.alpha().cos() * i * i
}

/// `postselected_norm`, or a zero-probability error on a dark port. Fully
/// reflecting or fully transmitting splitters never reach (D₁, C₂) at all.
pub(crate) fn checked_norm(params: &InterferometerParams) -> Result<f64> {
    let norm = postselected_norm(params);
    if params.r() * params.t() == 0.0 {
        return Err(Error::ZeroProbability {
            norm: 0.0,
            threshold: DARK_PORT_EPS,
        });
    }
    if norm > DARK_PORT_EPS {
        Ok(norm)
    } else {
        Err(Error::ZeroProbability {
            norm,
            threshold: DARK_PORT_EPS,
        })
    }
}

/// Split of the electron-1 marginal into the diagonal part `T_a` and the
/// interference part `T_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermSplit {
    pub diagonal: f64,
    pub interference: f64,
}

impl TermSplit {
    pub fn total(&self) -> f64 {
        self.diagonal + self.interference
    }
}

fn terms_for(params: &InterferometerParams, electron: Electron, p: f64) -> TermSplit {
    let c = params.phi().cos();
    let plain = params.packet().value(p);
    let kicked = params.kicked_packet(electron).value(p);
    TermSplit {
        diagonal: plain * plain + c * c * kicked * kicked,
        interference: 2.0 * params.overlap() * c * params.alpha().cos() * plain * kicked,
    }
}

/// `T_a(p) = Φ²(p) + cos²φ Φ²(p+δ)` and `T_b(p) = 2I cosφ cosα Φ(p)Φ(p+δ)`.
pub fn term_decomposition(params: &InterferometerParams, p: f64) -> TermSplit {
    terms_for(params, Electron::One, p)
}

/// Post-selected momentum density of one electron at `p`.
///
/// The unnormalized form is exactly `T_a + T_b` (with `+δ` in the kicked
/// argument for electron 1, `−δ` for electron 2). Normalizing fails with
/// [`Error::ZeroProbability`] on a dark port.
pub fn marginal_density(
    params: &InterferometerParams,
    electron: Electron,
    p: f64,
    normalized: bool,
) -> Result<f64> {
    crate::error::finite("p", p)?;
    let raw = terms_for(params, electron, p).total();
    if normalized {
        Ok(raw / checked_norm(params)?)
    } else {
        Ok(raw)
    }
}

/// Post-selected mean momentum,
/// `⟨p₁⟩ = −δ (cos²φ + cosφ cosα I²) / (1 + cos²φ + 2 cosφ cosα I²)` and
/// `⟨p₂⟩ = −⟨p₁⟩`.
pub fn mean_postselected(params: &InterferometerParams, electron: Electron) -> Result<f64> {
    let norm = checked_norm(params)?;
    let c = params.phi().cos();
    let i2 = params.overlap().powi(2);
    let mean1 = -params.delta() * (c * c + c * params.alpha().cos() * i2) / norm;
    Ok(match electron {
        Electron::One => mean1,
        Electron::Two => -mean1,
    })
}

/// Electron-1 mean with the overlap factor `exp(−δ²/4W²)` exactly as the
/// closed form is usually quoted, assuming `e^{iα} = 1` (α is ignored).
///
/// This disagrees quantitatively with [`mean_postselected`], which is what
/// integrating the marginal actually gives; it is kept for comparison.
pub fn mean_eq14_printed(params: &InterferometerParams) -> Result<f64> {
    let c = params.phi().cos();
    let i = params.overlap();
    let denom = 1.0 + c * c + 2.0 * c * i;
    if denom <= DARK_PORT_EPS {
        return Err(Error::ZeroProbability {
            norm: denom,
            threshold: DARK_PORT_EPS,
        });
    }
    Ok(-params.delta() * (c * c + c * i) / denom)
}

/// Both closed forms at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanComparison {
    pub consistent: f64,
    pub printed: f64,
}

impl MeanComparison {
    pub fn difference(&self) -> f64 {
        self.printed - self.consistent
    }
}

pub fn compare_means(params: &InterferometerParams) -> Result<MeanComparison> {
    Ok(MeanComparison {
        consistent: mean_postselected(params, Electron::One)?,
        printed: mean_eq14_printed(params)?,
    })
}
