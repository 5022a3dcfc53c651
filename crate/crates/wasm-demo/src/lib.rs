//! WebAssembly bindings for the static page in `www/`. Every export takes and
//! returns JSON text so the page needs no generated type glue beyond strings.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qdyn::evolution::{evolve, generator_from_spec, TimeGrid};
use qdyn::json::{matrix_from_json, spec_from_json, vector_from_json, vector_to_json};
use qdyn::kernelsolver::{classify, Ring};
use qdyn::qmatrix::QMatF;
use qdyn::spectral::canonical_spectral;

/// Largest dimension the page offers; larger systems take too long in a tab.
pub const MAX_DEMO_N: usize = 3;

/// Largest number of time steps the page will compute.
pub const MAX_STEPS: usize = 2000;

fn parse(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))
}

pub fn kernel_report(ring: &str, n: usize) -> Result<String, String> {
    if !(1..=MAX_DEMO_N).contains(&n) {
        return Err(format!("n must be between 1 and {MAX_DEMO_N} in the browser"));
    }
    let ring = Ring::parse(ring).map_err(|e| e.to_string())?;
    let report = classify(ring, n).map_err(|e| e.to_string())?;
    Ok(report.to_json(0).to_string())
}

pub fn trajectory(spec: &str, hamiltonian: &str, psi0: &str, t_max: f64, dt: f64) -> Result<String, String> {
    let spec = spec_from_json::<f64>(&parse(spec)?).map_err(|e| e.to_string())?;
    let h: QMatF = matrix_from_json(&parse(hamiltonian)?).map_err(|e| e.to_string())?;
    let psi0 = vector_from_json(&parse(psi0)?).map_err(|e| e.to_string())?;
    let grid = TimeGrid::up_to(t_max, dt).map_err(|e| e.to_string())?;
    if grid.steps > MAX_STEPS {
        return Err(format!("at most {MAX_STEPS} steps, requested {}", grid.steps));
    }
    let a = generator_from_spec(&spec, &h).map_err(|e| e.to_string())?;
    let traj = evolve(&a, &psi0, grid, Some(&h)).map_err(|e| e.to_string())?;
    Ok(traj.to_json().to_string())
}

pub fn spectrum(hamiltonian: &str) -> Result<String, String> {
    let h: QMatF = matrix_from_json(&parse(hamiltonian)?).map_err(|e| e.to_string())?;
    let dec = canonical_spectral(&h).map_err(|e| e.to_string())?;
    let values: Vec<f64> = dec.eigenvalues().iter().map(|z| z.re).collect();
    let vectors: Vec<Value> = dec.eigenvectors().iter().map(vector_to_json).collect();
    let residual = (&dec.reconstruct() - &h).frobenius_norm_sq().sqrt();
    Ok(json!({"eigenvalues": values, "eigenvectors": vectors, "residual": residual}).to_string())
}

#[wasm_bindgen(js_name = kernelReport)]
pub fn kernel_report_js(ring: &str, n: usize) -> Result<String, JsError> {
    kernel_report(ring, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = trajectory)]
pub fn trajectory_js(spec: &str, hamiltonian: &str, psi0: &str, t_max: f64, dt: f64) -> Result<String, JsError> {
    trajectory(spec, hamiltonian, psi0, t_max, dt).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = spectrum)]
pub fn spectrum_js(hamiltonian: &str) -> Result<String, JsError> {
    spectrum(hamiltonian).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn version() -> String {
    qdyn::VERSION.to_string()
}
