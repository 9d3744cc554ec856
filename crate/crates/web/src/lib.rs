//! Browser bindings: analyze an input file, list first-syzygy bidegrees,
//! classify a `(2,1)` form. Every function returns a JSON string; failures
//! come back as `{"error": {...}}`.

use serde_json::json;
use tpsurf::{classify_p22, BiDeg, BiPoly};
use tpsurf_cli::{cmd_analyze, cmd_betti, AnalyzeOptions, CliError, Limits, SurfaceInput};
use wasm_bindgen::prelude::*;

fn error_json(e: &CliError) -> String {
    json!({ "error": { "code": e.code(), "message": e.to_string(), "exit_code": e.exit_code() } }).to_string()
}

/// Full report for an input file (same format as the command line).
#[wasm_bindgen]
pub fn analyze(text: &str, seed: u32) -> String {
    match SurfaceInput::parse(text) {
        Ok(input) => {
            let opts = AnalyzeOptions {
                seed: seed as u64,
                betti_box: input.betti_box,
                ..Default::default()
            };
            cmd_analyze(&input, &opts).to_json(false)
        }
        Err(e) => error_json(&e),
    }
}

/// Minimal first syzygies up to bidegree `(m, n)`.
#[wasm_bindgen]
pub fn betti(text: &str, m: u32, n: u32) -> String {
    SurfaceInput::parse(text)
        .and_then(|input| cmd_betti(&input, BiDeg::new(m, n), &Limits::default()))
        .map_or_else(|e| error_json(&e), |r| serde_json::to_string(&r).unwrap())
}

/// `Irreducible`, `OnQ` or `OnSegre` for a form of bidegree `(2,1)`.
#[wasm_bindgen]
pub fn classify(p: &str) -> String {
    p.parse::<BiPoly>()
        .and_then(|p| classify_p22(&p))
        .map_err(CliError::from)
        .map_or_else(|e| error_json(&e), |c| json!({ "class": c }).to_string())
}
