use num_complex::Complex64;

use crate::model::{
    ComplexAmplitude, Electron, InterferometerParams, PortMap, PortPair, DARK_PORT_EPS,
};

/// Coefficients of one exit-port branch: `plain` multiplies `|Φ₁⟩|Φ₂⟩`,
/// `kicked` multiplies `|Φ₁⁻⟩|Φ₂⁺⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchAmplitudes {
    pub plain: ComplexAmplitude,
    pub kicked: ComplexAmplitude,
}

impl BranchAmplitudes {
    /// Gram norm of the branch, with `⟨Φ₁Φ₂|Φ₁⁻Φ₂⁺⟩ = overlap²`.
    pub fn probability(&self, overlap_sq: f64) -> f64 {
        self.plain.norm_sqr()
            + self.kicked.norm_sqr()
            + 2.0 * (self.plain.conj() * self.kicked).re * overlap_sq
    }

    /// Unnormalized first moment of electron 1 in this branch. The kicked
    /// branch has mean −δ, the cross term `⟨Φ₁|p|Φ₁⁻⟩⟨Φ₂|Φ₂⁺⟩ = −δI²/2`.
    fn moment_e1(&self, delta: f64, overlap_sq: f64) -> f64 {
        -delta * (self.kicked.norm_sqr() + (self.plain.conj() * self.kicked).re * overlap_sq)
    }
}

/// Final two-electron state, resolved by exit-port pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortAmplitudes(PortMap<BranchAmplitudes>);

impl PortAmplitudes {
    pub fn get(&self, port: PortPair) -> BranchAmplitudes {
        self.0.get(port)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PortPair, BranchAmplitudes)> + '_ {
        self.0.iter()
    }
}

/// Beam splitter acting on (A, B) → (C, D), also used for BS₁ from the
/// input ports: reflection `ir`, transmission `t`.
fn beam_splitter(r: f64, t: f64) -> [[Complex64; 2]; 2] {
    let tr = Complex64::new(t, 0.0);
    let ir = Complex64::new(0.0, r);
    [[tr, ir], [ir, tr]]
}

/// Exit-port amplitudes of the full interferometer.
///
/// Each electron is split at BS₁ (e₁ from the first input, e₂ from the
/// second), arm A adds `e^{iφ}`, co-propagating pairs pick up `e^{iα}` and
/// land in the kicked branch, and BS₂ maps the arms to (C, D). A global
/// `e^{−iφ}` is removed so the coefficients read
/// `DC: plain = −2r²t², kicked = −2r²t² e^{iα} cosφ`, and so on.
pub fn all_port_amplitudes(params: &InterferometerParams) -> PortAmplitudes {
    let bs = beam_splitter(params.r(), params.t());
    let input = [[bs[0][0], bs[1][0]], [bs[0][1], bs[1][1]]];
    let arm_phase = [
        Complex64::from_polar(1.0, params.phi()),
        Complex64::new(1.0, 0.0),
    ];
    let interaction = Complex64::from_polar(1.0, params.alpha());
    let global = Complex64::from_polar(1.0, -params.phi());

    let map = PortMap::from_fn(|port| {
        let (exit1, exit2) = match port {
            PortPair::CC => (0, 0),
            PortPair::CD => (0, 1),
            PortPair::DC => (1, 0),
            PortPair::DD => (1, 1),
        };
        let mut plain = Complex64::new(0.0, 0.0);
        let mut kicked = Complex64::new(0.0, 0.0);
        for arm1 in 0..2 {
            for arm2 in 0..2 {
                let amp = input[0][arm1]
                    * input[1][arm2]
                    * arm_phase[arm1]
                    * arm_phase[arm2]
                    * bs[exit1][arm1]
                    * bs[exit2][arm2];
                if arm1 == arm2 {
                    kicked += amp * interaction;
                } else {
                    plain += amp;
                }
            }
        }
        BranchAmplitudes {
            plain: plain * global,
            kicked: kicked * global,
        }
    });
    PortAmplitudes(map)
}

/// `P_jk = |a|² + |b|² + 2 Re(a* b) I²` for every exit pair.
pub fn port_probabilities(params: &InterferometerParams) -> PortMap<f64> {
    let amps = all_port_amplitudes(params);
    let overlap_sq = params.overlap().powi(2);
    PortMap::from_fn(|port| amps.get(port).probability(overlap_sq))
}

/// Conditional mean momentum per exit pair; `None` on dark ports.
pub fn port_mean_momenta(
    params: &InterferometerParams,
    electron: Electron,
) -> PortMap<Option<f64>> {
    let amps = all_port_amplitudes(params);
    let overlap_sq = params.overlap().powi(2);
    let sign = match electron {
        Electron::One => 1.0,
        Electron::Two => -1.0,
    };
    PortMap::from_fn(|port| {
        let branch = amps.get(port);
        let prob = branch.probability(overlap_sq);
        (prob > DARK_PORT_EPS).then(|| sign * branch.moment_e1(params.delta(), overlap_sq) / prob)
    })
}

/// Unconditioned mean kick: the classical `∓2t²r²δ` next to the
/// probability-weighted sum of the per-port means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhrenfestPair {
    pub closed_form: f64,
    pub weighted_sum: f64,
}

impl EhrenfestPair {
    pub fn deviation(&self) -> f64 {
        (self.closed_form - self.weighted_sum).abs()
    }
}

pub fn ehrenfest_check(params: &InterferometerParams) -> EhrenfestPair {
    ehrenfest_check_for(params, Electron::One)
}

pub fn ehrenfest_check_for(params: &InterferometerParams, electron: Electron) -> EhrenfestPair {
    let (r, t) = (params.r(), params.t());
    let probs = port_probabilities(params);
    let means = port_mean_momenta(params, electron);
    let weighted_sum = PortPair::ALL
        .iter()
        .filter_map(|&port| means.get(port).map(|m| probs.get(port) * m))
        .sum();
    EhrenfestPair {
        closed_form: electron.kick_sign() * 2.0 * t * t * r * r * params.delta(),
        weighted_sum,
    }
}
