//! Browser bindings for the interference model.
//!
//! Every export returns a flat `Float64Array`; the page slices it. The plain
//! Rust functions underneath carry the logic and are what the tests call.

use qif_mzi::analytic::{
    ehrenfest_check, marginal_density, mean_eq14_printed, mean_postselected, port_mean_momenta,
    port_probabilities, reduced_state,
};
use qif_mzi::{Electron, InterferometerParams, PortPair};
use wasm_bindgen::prelude::*;

fn params(r: f64, phi: f64, alpha: f64, delta_over_w: f64) -> Result<InterferometerParams, String> {
    InterferometerParams::new(r, phi, alpha, delta_over_w, 1.0).map_err(|e| e.to_string())
}

/// `[p/W; n] ++ [P1; n] ++ [P2; n]` for the post-selected marginals on
/// `[-half_width, half_width]`.
pub fn marginals(
    r: f64,
    phi: f64,
    alpha: f64,
    delta_over_w: f64,
    half_width: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if points < 2 || half_width.is_nan() || half_width <= 0.0 {
        return Err("need at least two points and a positive half-width".into());
    }
    let p = params(r, phi, alpha, delta_over_w)?;
    let axis: Vec<f64> = (0..points)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64)
        .collect();
    let mut out = axis.clone();
    for electron in [Electron::One, Electron::Two] {
        for &x in &axis {
            out.push(marginal_density(&p, electron, x, true).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

/// Row-major `delta_steps × phi_steps` grid of the post-selected mean of
/// electron 1 over δ/W ∈ [0, max_delta], φ ∈ [0, 2π]; NaN marks dark points.
pub fn mean_grid(
    r: f64,
    alpha: f64,
    max_delta: f64,
    delta_steps: usize,
    phi_steps: usize,
) -> Result<Vec<f64>, String> {
    if delta_steps < 2 || phi_steps < 2 {
        return Err("need at least two steps per axis".into());
    }
    let mut out = Vec::with_capacity(delta_steps * phi_steps);
    for i in 0..delta_steps {
        let delta = max_delta * i as f64 / (delta_steps - 1) as f64;
        for j in 0..phi_steps {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / (phi_steps - 1) as f64;
            let p = params(r, phi, alpha, delta)?;
            out.push(mean_postselected(&p, Electron::One).unwrap_or(f64::NAN));
        }
    }
    Ok(out)
}

/// `[P_CC, P_CD, P_DC, P_DD, <p1>_CC .. <p1>_DD, -2t²r²δ, Σ P<p1>,
/// consistent mean, printed mean, purity]`; NaN where undefined.
pub fn ports(r: f64, phi: f64, alpha: f64, delta_over_w: f64) -> Result<Vec<f64>, String> {
    let p = params(r, phi, alpha, delta_over_w)?;
    let probs = port_probabilities(&p);
    let means = port_mean_momenta(&p, Electron::One);
    let ehrenfest = ehrenfest_check(&p);
    let mut out: Vec<f64> = PortPair::ALL.iter().map(|&port| probs.get(port)).collect();
    out.extend(
        PortPair::ALL
            .iter()
            .map(|&port| means.get(port).unwrap_or(f64::NAN)),
    );
    out.push(ehrenfest.closed_form);
    out.push(ehrenfest.weighted_sum);
    out.push(mean_postselected(&p, Electron::One).unwrap_or(f64::NAN));
    out.push(mean_eq14_printed(&p).unwrap_or(f64::NAN));
    out.push(reduced_state(&p, Electron::One).map_or(f64::NAN, |s| s.purity()));
    Ok(out)
}

#[wasm_bindgen(js_name = marginalCurves)]
pub fn marginal_curves(
    r: f64,
    phi: f64,
    alpha: f64,
    delta_over_w: f64,
    half_width: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    marginals(r, phi, alpha, delta_over_w, half_width, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = meanSurface)]
pub fn mean_surface(
    r: f64,
    alpha: f64,
    max_delta: f64,
    delta_steps: usize,
    phi_steps: usize,
) -> Result<Vec<f64>, JsError> {
    mean_grid(r, alpha, max_delta, delta_steps, phi_steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = portSummary)]
pub fn port_summary(r: f64, phi: f64, alpha: f64, delta_over_w: f64) -> Result<Vec<f64>, JsError> {
    ports(r, phi, alpha, delta_over_w).map_err(|e| JsError::new(&e))
}
