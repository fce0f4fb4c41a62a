//! WebAssembly bindings for the demo page in `www/`. Every export takes text
//! and returns a JSON string, or throws the error message.

use wasm_bindgen::prelude::*;

pub mod demo;

fn to_js(r: Result<serde_json::Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn plot(function: &str, x_max: &str) -> Result<String, JsValue> {
    to_js(demo::plot(function, x_max))
}

#[wasm_bindgen]
pub fn combine(op: &str, f: &str, g: &str, x_max: &str) -> Result<String, JsValue> {
    to_js(demo::combine(op, f, g, x_max))
}

#[wasm_bindgen]
pub fn thresholds(automaton: &str) -> Result<String, JsValue> {
    to_js(demo::thresholds(automaton))
}

#[wasm_bindgen]
pub fn query(automaton: &str, state: &str, energy: &str) -> Result<String, JsValue> {
    to_js(demo::query(automaton, state, energy))
}
