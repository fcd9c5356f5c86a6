//! SI-unit design calculator for a free-electron two-particle interferometer.
//!
//! Given the arm separation, interferometer length, electron speed and beam
//! widths, [`derive_setup`] produces the transverse kick δ, the interaction
//! phase α, the packet momentum width W, fringe spacing, spreading and the
//! energy scales that justify the impulsive-kick model. This is the only
//! place physical constants appear; the engines in [`crate::analytic`] and
//! [`crate::numeric`] run in natural units.

use std::f64::consts::PI;

use crate::error::{positive, Error, Result};
use crate::model::InterferometerParams;
use crate::numeric::free_spread_width;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge, C.
    pub q: f64,
    /// Vacuum permittivity, F/m.
    pub eps0: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Planck constant, J·s.
    pub h: f64,
    /// Electron mass, kg.
    pub m_e: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        q: 1.602176634e-19,
        eps0: 8.8541878128e-12,
        hbar: 1.054571817e-34,
        h: 6.62607015e-34,
        m_e: 9.1093837015e-31,
    };

    /// `q² / 4πε₀`, J·m.
    pub fn coulomb(&self) -> f64 {
        self.q * self.q / (4.0 * PI * self.eps0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentInputs {
    /// Separation between the two beams, m.
    pub separation: f64,
    /// Interferometer length, m.
    pub length: f64,
    /// Longitudinal electron speed, m/s.
    pub speed: f64,
    /// Transverse beam waist Δx₀, m.
    pub dx0_transverse: f64,
    /// Initial longitudinal packet width, m.
    pub dx0_longitudinal: f64,
}

impl ExperimentInputs {
    /// d = 2 mm, L = 4 cm, v = 2×10⁶ m/s, Δx₀ = 10 μm, 200 nm longitudinal.
    pub const REFERENCE: ExperimentInputs = ExperimentInputs {
        separation: 2e-3,
        length: 4e-2,
        speed: 2e6,
        dx0_transverse: 10e-6,
        dx0_longitudinal: 200e-9,
    };

    pub fn validate(&self) -> Result<()> {
        positive("separation", self.separation)?;
        positive("length", self.length)?;
        positive("speed", self.speed)?;
        positive("dx0_transverse", self.dx0_transverse)?;
        positive("dx0_longitudinal", self.dx0_longitudinal)?;
        Ok(())
    }

    pub fn with_separation(self, separation: f64) -> Self {
        Self { separation, ..self }
    }

    pub fn transit_time(&self) -> f64 {
        self.length / self.speed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityCheck {
    pub name: &'static str,
    pub ratio: f64,
    pub threshold: f64,
    /// `true` when the ratio must be at least the threshold, `false` when it
    /// must be at most the threshold.
    pub at_least: bool,
    pub passed: bool,
}

impl ValidityCheck {
    fn min(name: &'static str, ratio: f64, threshold: f64) -> Self {
        Self {
            name,
            ratio,
            threshold,
            at_least: true,
            passed: ratio >= threshold,
        }
    }

    fn max(name: &'static str, ratio: f64, threshold: f64) -> Self {
        Self {
            name,
            ratio,
            threshold,
            at_least: false,
            passed: ratio <= threshold,
        }
    }
}

pub const SEPARATION_RATIO_MIN: f64 = 100.0;
pub const ENERGY_RATIO_MIN: f64 = 5.0;
pub const FRINGE_RATIO_MIN: f64 = 10.0;
pub const LINEARIZATION_MAX: f64 = 1e-3;
pub const TRANSVERSE_SPREAD_MAX: f64 = 1e-3;

/// Every derived quantity, in SI units unless noted.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedSetup {
    pub inputs: ExperimentInputs,
    /// s
    pub t_transit: f64,
    /// N
    pub force: f64,
    /// kg·m/s
    pub delta: f64,
    /// kg·m/s, `W = ħ / 2Δx₀`
    pub width_w: f64,
    pub delta_over_w: f64,
    /// rad, signed (negative)
    pub alpha: f64,
    /// m, `h / δ`
    pub fringe_spacing: f64,
    /// m, longitudinal packet width at the exit
    pub spread_longitudinal: f64,
    /// relative growth of the transverse width over the transit
    pub spread_transverse_relative: f64,
    /// J, `(2W)² / 2m`
    pub kinetic_scale: f64,
    /// J, `q² Δx₀ / 4πε₀d²`
    pub potential_scale: f64,
    pub validity: Vec<ValidityCheck>,
}

impl DerivedSetup {
    pub fn alpha_over_pi(&self) -> f64 {
        self.alpha / PI
    }

    /// Largest spatial extent of either packet during the transit, m.
    pub fn max_packet_extent(&self) -> f64 {
        let transverse = self.inputs.dx0_transverse * (1.0 + self.spread_transverse_relative);
        transverse.max(self.spread_longitudinal)
    }

    pub fn all_valid(&self) -> bool {
        self.validity.iter().all(|c| c.passed)
    }

    /// Dimensionless engine parameters in units of W (width = 1) carrying the
    /// physical α.
    pub fn to_params(&self, r: f64, phi: f64) -> Result<InterferometerParams> {
        InterferometerParams::new(r, phi, self.alpha, self.delta_over_w, 1.0)
    }

    /// Same, with `e^{iα} = 1` as used for figure reproduction (the separation
    /// is assumed tuned so α is a multiple of 2π).
    pub fn to_params_unit_phase(&self, r: f64, phi: f64) -> Result<InterferometerParams> {
        InterferometerParams::new(r, phi, 0.0, self.delta_over_w, 1.0)
    }
}

pub fn derive_setup(inputs: &ExperimentInputs) -> Result<DerivedSetup> {
    derive_with(inputs, &PhysicalConstants::CODATA_2018)
}

fn derive_with(inputs: &ExperimentInputs, k: &PhysicalConstants) -> Result<DerivedSetup> {
    inputs.validate()?;
    let d = inputs.separation;
    let t = inputs.transit_time();
    let force = k.coulomb() / (d * d);
    let delta = force * t;
    let width_w = k.hbar / (2.0 * inputs.dx0_transverse);
    let alpha = -k.coulomb() * t / (k.hbar * d);
    let spread_longitudinal = free_spread_width(inputs.dx0_longitudinal, t, k.m_e)?;
    let spread_transverse = free_spread_width(inputs.dx0_transverse, t, k.m_e)?;
    let mut setup = DerivedSetup {
        inputs: *inputs,
        t_transit: t,
        force,
        delta,
        width_w,
        delta_over_w: delta / width_w,
        alpha,
        fringe_spacing: k.h / delta,
        spread_longitudinal,
        spread_transverse_relative: spread_transverse / inputs.dx0_transverse - 1.0,
        kinetic_scale: (2.0 * width_w).powi(2) / (2.0 * k.m_e),
        potential_scale: k.coulomb() * inputs.dx0_transverse / (d * d),
        validity: Vec::new(),
    };
    setup.validity = checks_for(&setup);
    Ok(setup)
}

fn checks_for(s: &DerivedSetup) -> Vec<ValidityCheck> {
    let extent = s.max_packet_extent();
    vec![
        ValidityCheck::min(
            "separation_over_packet_extent",
            s.inputs.separation / extent,
            SEPARATION_RATIO_MIN,
        ),
        ValidityCheck::min(
            "potential_over_kinetic",
            s.potential_scale / s.kinetic_scale,
            ENERGY_RATIO_MIN,
        ),
        ValidityCheck::min(
            "fringe_spacing_over_beam_diameter",
            s.fringe_spacing / s.inputs.dx0_transverse,
            FRINGE_RATIO_MIN,
        ),
        ValidityCheck::max(
            "linearization_error",
            (extent / s.inputs.separation).powi(2),
            LINEARIZATION_MAX,
        ),
        ValidityCheck::max(
            "transverse_spread_relative",
            s.spread_transverse_relative,
            TRANSVERSE_SPREAD_MAX,
        ),
    ]
}

/// The five named model-validity checks for a design.
pub fn validity_report(inputs: &ExperimentInputs) -> Result<Vec<ValidityCheck>> {
    Ok(derive_setup(inputs)?.validity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuneMode {
    /// Closest multiple of 2π to the current |α| (at least 2π).
    Nearest,
    /// |α| = 2πn.
    Target(i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunedSeparation {
    pub multiple: i64,
    pub separation: f64,
    pub alpha: f64,
    pub setup: DerivedSetup,
}

/// Separation that makes |α| an integer multiple of 2π.
///
/// The transit time does not depend on d, so `|α| = q²L / (4πε₀ħ v d)`
/// inverts exactly.
pub fn tune_separation_for_alpha(
    inputs: &ExperimentInputs,
    mode: TuneMode,
) -> Result<TunedSeparation> {
    inputs.validate()?;
    let k = PhysicalConstants::CODATA_2018;
    let alpha_times_d = k.coulomb() * inputs.transit_time() / k.hbar;
    let multiple = match mode {
        TuneMode::Target(n) if n <= 0 => {
            return Err(Error::InvalidParameter {
                name: "alpha multiple",
                value: n as f64,
                reason: "target multiple of 2π must be a positive integer",
            })
        }
        TuneMode::Target(n) => n,
        TuneMode::Nearest => {
            let current = alpha_times_d / inputs.separation;
            ((current / (2.0 * PI)).round() as i64).max(1)
        }
    };
    let separation = alpha_times_d / (2.0 * PI * multiple as f64);
    let setup = derive_setup(&inputs.with_separation(separation))?;
    Ok(TunedSeparation {
        multiple,
        separation,
        alpha: setup.alpha,
        setup,
    })
}
