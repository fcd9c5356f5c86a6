use crate::error::{non_negative, positive, Result};
use crate::experiment::PhysicalConstants;

/// Width of a freely spreading Gaussian after time `t` (SI units):
/// `Δx(t) = Δx₀ √(1 + ħ²t² / (4m²Δx₀⁴))`.
pub fn free_spread_width(initial_width: f64, t: f64, mass: f64) -> Result<f64> {
    positive("initial_width", initial_width)?;
    non_negative("t", t)?;
    positive("mass", mass)?;
    let hbar = PhysicalConstants::CODATA_2018.hbar;
    let growth = hbar * t / (2.0 * mass * initial_width * initial_width);
    Ok(initial_width * (1.0 + growth * growth).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    const M_E: f64 = PhysicalConstants::CODATA_2018.m_e;

    #[test]
    fn no_time_no_spread() {
        assert_eq!(free_spread_width(2e-7, 0.0, M_E).unwrap(), 2e-7);
    }

    #[test]
    fn longitudinal_and_transverse_estimates() {
        let long = free_spread_width(200e-9, 2e-8, M_E).unwrap();
        assert!((long - 5.8e-6).abs() < 0.05e-6, "{long}");
        let trans = free_spread_width(10e-6, 2e-8, M_E).unwrap();
        let rel = trans / 10e-6 - 1.0;
        assert!(rel > 6e-5 && rel < 8e-5, "{rel}");
    }

    #[test]
    fn monotone_with_ballistic_limit() {
        let w0 = 1e-7;
        let mut last = 0.0;
        for k in 0..50 {
            let w = free_spread_width(w0, k as f64 * 1e-9, M_E).unwrap();
            assert!(w > last);
            last = w;
        }
        let t = 1e-3;
        let hbar = PhysicalConstants::CODATA_2018.hbar;
        let ballistic = hbar * t / (2.0 * M_E * w0);
        let w = free_spread_width(w0, t, M_E).unwrap();
        assert!((w / ballistic - 1.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_inputs() {
        assert!(free_spread_width(0.0, 1.0, M_E).is_err());
        assert!(free_spread_width(1e-6, -1.0, M_E).is_err());
        assert!(free_spread_width(1e-6, 1.0, 0.0).is_err());
    }
}
