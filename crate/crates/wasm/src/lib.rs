//! Browser demo bindings: three interactive views over the core library,
//! each returning a JSON dataset for the canvas plots in `www/index.html`.
//!
//! Build with `wasm-pack build --target web crates/wasm` (or
//! `cargo build --target wasm32-unknown-unknown` plus `wasm-bindgen`); the
//! same functions compile natively so the datasets are unit-tested on the
//! host.

pub mod curves;

use qkz_core::C64;
use wasm_bindgen::prelude::*;

fn to_json<T: serde::Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    match value {
        Ok(v) => serde_json::to_string(&v).map_err(|e| JsValue::from_str(&e.to_string())),
        Err(e) => Err(JsValue::from_str(&e)),
    }
}

/// Coupling explorer: g(t), the linearity defect of f, and the phase
/// unimodularity defect over a time window.
#[wasm_bindgen]
pub fn coupling_curve_json(
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    plus_branch: bool,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<String, JsValue> {
    to_json(curves::coupling_curve(
        C64::new(alpha_re, alpha_im),
        C64::new(beta_re, beta_im),
        plus_branch,
        t_min,
        t_max,
        points,
    ))
}

/// Yang-Baxter checker: per-sample residuals for the integrable linear f
/// next to the quadratic negative control.
#[wasm_bindgen]
pub fn ybe_curve_json(
    alpha: f64,
    beta: f64,
    kind: &str,
    samples: usize,
    seed: u64,
) -> Result<String, JsValue> {
    to_json(curves::ybe_curve(alpha, beta, kind, samples, seed))
}

/// Jackson-sum convergence: qKZ residual against the truncation radius.
#[wasm_bindgen]
pub fn jackson_convergence_json(
    eta_re: f64,
    eta_im: f64,
    truncations_csv: &str,
) -> Result<String, JsValue> {
    let truncations: Result<Vec<i64>, _> = truncations_csv
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect();
    let truncations = truncations.map_err(|_| JsValue::from_str("bad truncation list"))?;
    to_json(curves::jackson_convergence_curve(eta_re, eta_im, &truncations))
}
