use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::model::GaussianPacket;

/// Uniform momentum grid with an odd point count, so composite Simpson
/// applies directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    p_min: f64,
    p_max: f64,
    n: usize,
}

/// Half-width of the default grids, in units of the packet width.
pub const DEFAULT_HALF_WIDTH: f64 = 8.0;
pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_JOINT_POINTS: usize = 513;

impl MomentumGrid {
    pub fn new(p_min: f64, p_max: f64, n: usize) -> Result<Self> {
        finite("p_min", p_min)?;
        finite("p_max", p_max)?;
        if p_min >= p_max {
            return Err(Error::InvalidParameter {
                name: "p_max",
                value: p_max,
                reason: "grid upper bound must exceed the lower bound",
            });
        }
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "grid needs an odd number of points, at least 3",
            });
        }
        Ok(Self { p_min, p_max, n })
    }

    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    /// ±8W with 2001 points.
    pub fn default_for(width: f64) -> Result<Self> {
        Self::symmetric(DEFAULT_HALF_WIDTH * width, DEFAULT_POINTS)
    }

    /// ±8W with 513 points per axis, for the two-electron product grid.
    pub fn joint_default_for(width: f64) -> Result<Self> {
        Self::symmetric(DEFAULT_HALF_WIDTH * width, DEFAULT_JOINT_POINTS)
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            self.p_max
        } else {
            self.p_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Composite Simpson weights `h/3 · (1, 4, 2, 4, …, 2, 4, 1)`.
    pub fn simpson_weights(&self) -> Vec<f64> {
        let h3 = self.spacing() / 3.0;
        (0..self.n)
            .map(|i| {
                if i == 0 || i == self.n - 1 {
                    h3
                } else if i % 2 == 1 {
                    4.0 * h3
                } else {
                    2.0 * h3
                }
            })
            .collect()
    }

    /// Simpson estimate of `∫ f dp` from samples on this grid.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values.len())?;
        let h3 = self.spacing() / 3.0;
        let last = self.n - 1;
        let mut odd = 0.0;
        let mut even = 0.0;
        for (i, v) in values.iter().enumerate().take(last).skip(1) {
            if i % 2 == 1 {
                odd += v;
            } else {
                even += v;
            }
        }
        Ok(h3 * (values[0] + values[last] + 4.0 * odd + 2.0 * even))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "expected {} samples, got {len}",
                self.n
            )))
        }
    }

    /// Probability mass of `|packet|²` lying outside the grid, from the
    /// analytic Gaussian tail (upper bound `erfc(x) ≤ e^{-x²}/(x√π)`).
    pub fn truncated_mass(&self, packet: &GaussianPacket) -> f64 {
        let scale = packet.width();
        let above = (self.p_max - packet.center()) / scale;
        let below = (packet.center() - self.p_min) / scale;
        0.5 * erfc_upper(above) + 0.5 * erfc_upper(below)
    }

    /// Fails with [`Error::InsufficientGrid`] when any packet leaks more than
    /// `limit` of its mass past the grid edges.
    pub fn require_span(&self, packets: &[GaussianPacket], limit: f64) -> Result<()> {
        let tail_mass = packets
            .iter()
            .map(|p| self.truncated_mass(p))
            .fold(0.0, f64::max);
        if tail_mass > limit {
            Err(Error::InsufficientGrid { tail_mass, limit })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn erfc_upper(x: f64) -> f64 {
    if x <= 0.5 {
        return 1.0;
    }
    ((-x * x).exp() / (x * std::f64::consts::PI.sqrt())).min(1.0)
}

/// Complex samples of a wavefunction on a momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    grid: MomentumGrid,
    values: Vec<Complex64>,
}

impl SampledWavefunction {
    pub fn new(grid: MomentumGrid, values: Vec<Complex64>) -> Result<Self> {
        grid.check_len(values.len())?;
        for v in &values {
            finite("wavefunction sample", v.re)?;
            finite("wavefunction sample", v.im)?;
        }
        Ok(Self { grid, values })
    }

    pub fn from_packet(grid: MomentumGrid, packet: &GaussianPacket) -> Self {
        let values = grid
            .points()
            .into_iter()
            .map(|p| Complex64::new(packet.value(p), 0.0))
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn density(&self) -> Distribution1D {
        Distribution1D {
            grid: self.grid,
            values: self.values.iter().map(|v| v.norm_sqr()).collect(),
            normalized: false,
        }
    }
}

/// Sampled non-negative density on a momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution1D {
    grid: MomentumGrid,
    values: Vec<f64>,
    normalized: bool,
}

impl Distribution1D {
    pub fn new(grid: MomentumGrid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len())?;
        for &v in &values {
            finite("density sample", v)?;
            if v < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "density sample",
                    value: v,
                    reason: "densities are non-negative",
                });
            }
        }
        Ok(Self {
            grid,
            values,
            normalized: false,
        })
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn integral(&self) -> f64 {
        self.grid
            .integrate(&self.values)
            .expect("length checked on construction")
    }

    /// `∫ p ρ dp / ∫ ρ dp`.
    pub fn mean(&self) -> f64 {
        let weighted: Vec<f64> = self
            .grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(p, v)| p * v)
            .collect();
        self.grid.integrate(&weighted).expect("same grid") / self.integral()
    }

    /// Standard deviation about [`Self::mean`].
    pub fn std_dev(&self) -> f64 {
        let mean = self.mean();
        let weighted: Vec<f64> = self
            .grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(p, v)| (p - mean) * (p - mean) * v)
            .collect();
        (self.grid.integrate(&weighted).expect("same grid") / self.integral()).sqrt()
    }

    /// Rescale to unit integral; a vanishing integral is a dark port.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.integral();
        if norm <= crate::model::DARK_PORT_EPS {
            return Err(Error::ZeroProbability {
                norm,
                threshold: crate::model::DARK_PORT_EPS,
            });
        }
        for v in &mut self.values {
            *v /= norm;
        }
        self.normalized = true;
        Ok(self)
    }
}
