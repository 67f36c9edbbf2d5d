//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export returns a flat `Float64Array` with a fixed row layout, so the page
//! needs no serialisation layer. The plain functions below the bindings carry the
//! logic and are what the native tests call.

use wasm_bindgen::prelude::*;
use wfcrack::loading::LoadCase;
use wfcrack::sif::sif_quadrature_split;
use wfcrack::weights::WeightFunctions;
use wfcrack::BimaterialParams;

/// Order of the values returned by [`constants`].
pub const CONSTANT_NAMES: [&str; 11] = [
    "epsilon", "alpha", "d_star", "gamma", "b", "d", "e", "f", "d0", "e0", "nu_equiv",
];

/// Values per row of [`three_point_curves`].
pub const CURVE_STRIDE: usize = 5;

/// Values per row of [`weight_traces`].
pub const TRACE_STRIDE: usize = 9;

fn js(e: wfcrack::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Material constants for μ₊ = 1, μ₋ = (1 + η)/(1 − η), in [`CONSTANT_NAMES`] order.
#[wasm_bindgen(js_name = materialConstants)]
pub fn material_constants(eta: f64, nu_plus: f64, nu_minus: f64) -> Result<Vec<f64>, JsError> {
    constants(eta, nu_plus, nu_minus).map_err(js)
}

#[wasm_bindgen(js_name = constantNames)]
pub fn constant_names() -> Vec<String> {
    CONSTANT_NAMES.iter().map(|s| s.to_string()).collect()
}

/// Rows [b/a, K^S_I, K^S_II, K^A_I, K^A_II] for three-point loading with F = a = 1.
#[wasm_bindgen(js_name = threePointCurves)]
pub fn three_point_curves_js(
    eta: f64,
    nu_plus: f64,
    nu_minus: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    three_point_curves(eta, nu_plus, nu_minus, points).map_err(js)
}

/// Rows [x₁, Re/Im ⟦U⟧₁₁, Re/Im ⟦U⟧₁₂, Re/Im ⟨U⟩₁₁, Re/Im ⟨U⟩₁₂] over x₁ ∈ [−x_max, x_max].
#[wasm_bindgen(js_name = weightTraces)]
pub fn weight_traces_js(
    eta: f64,
    nu_plus: f64,
    nu_minus: f64,
    x_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    weight_traces(eta, nu_plus, nu_minus, x_max, points).map_err(js)
}

pub fn constants(eta: f64, nu_plus: f64, nu_minus: f64) -> wfcrack::Result<Vec<f64>> {
    let p = BimaterialParams::from_eta(eta, nu_plus, nu_minus)?;
    Ok(vec![
        p.epsilon, p.alpha, p.d_star, p.gamma, p.b, p.d, p.e, p.f, p.d0, p.e0, p.nu_equiv,
    ])
}

pub fn three_point_curves(
    eta: f64,
    nu_plus: f64,
    nu_minus: f64,
    points: usize,
) -> wfcrack::Result<Vec<f64>> {
    let p = BimaterialParams::from_eta(eta, nu_plus, nu_minus)?;
    let points = points.max(2);
    let mut out = Vec::with_capacity(points * CURVE_STRIDE);
    for i in 0..points {
        let b = 0.95 * i as f64 / (points - 1) as f64;
        let lc = LoadCase::three_point_case(1.0, 1.0, b)?;
        let s = sif_quadrature_split(&p, &lc, 1e-8, None)?;
        out.extend([
            b,
            s.symmetric.k.re,
            s.symmetric.k.im,
            s.skew.k.re,
            s.skew.k.im,
        ]);
    }
    Ok(out)
}

/// The origin is skipped: every trace is singular there.
pub fn weight_traces(
    eta: f64,
    nu_plus: f64,
    nu_minus: f64,
    x_max: f64,
    points: usize,
) -> wfcrack::Result<Vec<f64>> {
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(wfcrack::Error::Domain(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    let wf = WeightFunctions::new(&BimaterialParams::from_eta(eta, nu_plus, nu_minus)?);
    let points = points.max(2);
    let mut out = Vec::with_capacity(2 * points * TRACE_STRIDE);
    for i in 0..2 * points {
        // Cell centres on each side, symmetric about the tip.
        let k = i as f64 - points as f64 + 0.5;
        let x = x_max * k / points as f64;
        let s = wf.trace(x)?;
        let (j, m) = (s.jump_u, s.mean_u);
        out.extend([
            x,
            j.get(0, 0).re,
            j.get(0, 0).im,
            j.get(0, 1).re,
            j.get(0, 1).im,
            m.get(0, 0).re,
            m.get(0, 0).im,
            m.get(0, 1).re,
            m.get(0, 1).im,
        ]);
    }
    Ok(out)
}
