//! WebAssembly entry points for the static demo page in `www/`.
//!
//! Each export returns a flat `Float64Array` with a fixed stride so the page
//! can draw without any JSON round trip. The plain functions are usable from
//! Rust as well; the `#[wasm_bindgen]` wrappers only turn errors into JS
//! exceptions.

use wasm_bindgen::prelude::*;

use zitterlab::fieldmap;
use zitterlab::minkowski::ThreeVector;
use zitterlab::scenario::{Grid, GridAxis, Scenario};
use zitterlab::simulate::simulate;
use zitterlab::verify::{self, Suite};
use zitterlab::wavefunction::FreeElectron;

/// Values per trajectory sample: tau, t, x1..x3, y1..y3, constraint, energy drift.
pub const TRAJECTORY_STRIDE: usize = 10;

/// Values per slice point: x, y, spin current (x, y), charge density qψ̄γ⁰ψ.
pub const SLICE_STRIDE: usize = 5;

/// Runs a scenario given as JSON text, natural units.
pub fn trajectory_samples(scenario_json: &str, seed: u64) -> Result<Vec<f64>, String> {
    let setup = Scenario::from_json(scenario_json).and_then(|s| s.resolve(seed)).map_err(|e| e.to_string())?;
    let run = simulate(&setup).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(run.records.len() * TRAJECTORY_STRIDE);
    for r in &run.records {
        out.extend_from_slice(&[r.tau, r.x[0], r.x[1], r.x[2], r.x[3], r.y[1], r.y[2], r.y[3]]);
        out.extend_from_slice(&[r.monitors.constraint, r.monitors.energy_drift]);
    }
    Ok(out)
}

/// Spin current and charge density of a free electron on the z = 0 plane at time `t`.
///
/// `n` points per side over `[-half_width, half_width]`.
pub fn spin_current_slice(
    theta: f64,
    phi: f64,
    vx: f64,
    vy: f64,
    t: f64,
    half_width: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let dir = ThreeVector::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
    let e = FreeElectron::moving(1.0, &ThreeVector::new(vx, vy, 0.0), &dir).map_err(|e| e.to_string())?;
    let side = GridAxis { min: -half_width, max: half_width, n };
    let grid =
        Grid { t: GridAxis { min: t, max: t, n: 1 }, x: side, y: side, z: GridAxis { min: 0.0, max: 0.0, n: 1 } };
    let charge = -1.0;
    let rows = fieldmap::field_map(&e, charge, &grid, 250_000).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(rows.len() * SLICE_STRIDE);
    for r in &rows {
        let spin = r.gordon - r.convection;
        out.extend_from_slice(&[r.x[1], r.x[2], spin[1], spin[2], charge * r.velocity[0]]);
    }
    Ok(out)
}

/// Text report of the algebra and Gordon suites.
pub fn verify_report(samples: usize, seed: u64) -> Result<String, String> {
    let report = verify::run(&[Suite::Algebra, Suite::Gordon], samples, seed).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}

#[wasm_bindgen]
pub fn trajectory(scenario_json: &str, seed: u32) -> Result<Vec<f64>, JsError> {
    trajectory_samples(scenario_json, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = spinCurrentSlice)]
pub fn spin_current_slice_js(
    theta: f64,
    phi: f64,
    vx: f64,
    vy: f64,
    t: f64,
    half_width: f64,
    n: u32,
) -> Result<Vec<f64>, JsError> {
    spin_current_slice(theta, phi, vx, vy, t, half_width, n as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(samples: u32, seed: u32) -> Result<String, JsError> {
    verify_report(samples as usize, seed.into()).map_err(|e| JsError::new(&e))
}
