//! Dimensionless domain types shared by the analytic and numeric engines.
//!
//! Everything here works in natural units (ħ = 1). Momenta are carried in the
//! same units as the packet width `W`, so callers that want plot coordinates
//! simply divide by `width`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{finite, non_negative, positive, Error, Result};

/// Branch coefficient of a two-electron state (carries `e^{iφ}`, `e^{iα}` and
/// the `i` of a beam-splitter reflection).
pub type ComplexAmplitude = Complex64;

/// Dark-port threshold on normalizations and traces.
pub const DARK_PORT_EPS: f64 = 1e-12;

/// Real Gaussian transverse-momentum wavefunction with unit L² norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    width: f64,
    center: f64,
}

impl GaussianPacket {
    pub fn new(width: f64) -> Result<Self> {
        Self::centered(width, 0.0)
    }

    pub fn centered(width: f64, center: f64) -> Result<Self> {
        positive("width", width)?;
        finite("center", center)?;
        Ok(Self { width, center })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// `π^{-1/4} W^{-1/2} exp(-(p - c)² / 2W²)`.
    pub fn eval(&self, p: f64) -> Result<f64> {
        finite("p", p)?;
        Ok(self.value(p))
    }

    /// Unchecked evaluation for inner loops; `p` must be finite.
    #[inline]
    pub(crate) fn value(&self, p: f64) -> f64 {
        let u = (p - self.center) / self.width;
        PI.powf(-0.25) / self.width.sqrt() * (-0.5 * u * u).exp()
    }

    /// Rigid displacement of the packet in momentum space.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            width: self.width,
            center: self.center + shift,
        }
    }

    /// `|Φ|²` is a normal density with standard deviation `W/√2`.
    pub fn density_std(&self) -> f64 {
        self.width / std::f64::consts::SQRT_2
    }
}

pub fn packet_eval(packet: &GaussianPacket, p: f64) -> Result<f64> {
    packet.eval(p)
}

pub fn shift_packet(packet: &GaussianPacket, shift: f64) -> GaussianPacket {
    packet.shifted(shift)
}

/// Which electron a reduced quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Electron {
    One,
    Two,
}

impl Electron {
    /// Direction of the interaction kick: e₁ is pushed to −δ, e₂ to +δ.
    pub fn kick_sign(self) -> f64 {
        match self {
            Electron::One => -1.0,
            Electron::Two => 1.0,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Electron::One => 1,
            Electron::Two => 2,
        }
    }

    pub fn from_index(index: u8) -> Option<Self> {
        match index {
            1 => Some(Electron::One),
            2 => Some(Electron::Two),
            _ => None,
        }
    }
}

/// Exit assignment for the two electrons; first letter is e₁'s port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PortPair {
    CC,
    CD,
    DC,
    DD,
}

impl PortPair {
    pub const ALL: [PortPair; 4] = [PortPair::CC, PortPair::CD, PortPair::DC, PortPair::DD];

    /// e₁ at D₁ and e₂ at C₂.
    pub const POST_SELECTED: PortPair = PortPair::DC;

    pub fn label(self) -> &'static str {
        match self {
            PortPair::CC => "CC",
            PortPair::CD => "CD",
            PortPair::DC => "DC",
            PortPair::DD => "DD",
        }
    }

    pub(crate) fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PortPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One value per exit-port pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortMap<T>([T; 4]);

impl<T: Copy> PortMap<T> {
    pub fn from_fn(mut f: impl FnMut(PortPair) -> T) -> Self {
        Self(PortPair::ALL.map(&mut f))
    }

    pub fn get(&self, port: PortPair) -> T {
        self.0[port.slot()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (PortPair, T)> + '_ {
        PortPair::ALL.iter().map(move |&p| (p, self.get(p)))
    }
}

/// Dimensionless interferometer knobs. `t` is always derived from `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerParams {
    r: f64,
    phi: f64,
    alpha: f64,
    delta: f64,
    width: f64,
}

impl InterferometerParams {
    pub fn new(r: f64, phi: f64, alpha: f64, delta: f64, width: f64) -> Result<Self> {
        finite("r", r)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "reflection amplitude must lie in [0, 1]",
            });
        }
        finite("phi", phi)?;
        finite("alpha", alpha)?;
        non_negative("delta", delta)?;
        positive("width", width)?;
        Ok(Self {
            r,
            phi,
            alpha,
            delta,
            width,
        })
    }

    /// 50:50 beam splitters, `r = t = 1/√2`.
    pub fn balanced(phi: f64, alpha: f64, delta: f64, width: f64) -> Result<Self> {
        Self::new(std::f64::consts::FRAC_1_SQRT_2, phi, alpha, delta, width)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        (1.0 - self.r * self.r).sqrt()
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn delta_over_width(&self) -> f64 {
        self.delta / self.width
    }

    /// Single-electron overlap `I = ⟨Φ|Φ^∓⟩ = exp(-δ²/4W²)`.
    pub fn overlap(&self) -> f64 {
        let x = self.delta / self.width;
        (-0.25 * x * x).exp()
    }

    /// Unkicked packet `Φ`.
    pub fn packet(&self) -> GaussianPacket {
        GaussianPacket {
            width: self.width,
            center: 0.0,
        }
    }

    /// Kicked packet `Φ₁⁻(p) = Φ(p + δ)` or `Φ₂⁺(p) = Φ(p − δ)`.
    pub fn kicked_packet(&self, electron: Electron) -> GaussianPacket {
        self.packet().shifted(electron.kick_sign() * self.delta)
    }

    pub fn with_phi(self, phi: f64) -> Result<Self> {
        Self::new(self.r, phi, self.alpha, self.delta, self.width)
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.r, self.phi, self.alpha, delta, self.width)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.r, self.phi, alpha, self.delta, self.width)
    }
}
