//! Browser bindings: the graph of a zig-zag, its limit set, and a Salem
//! family report. The plain functions are usable natively; the exported
//! wrappers turn errors into JS exceptions.

use wasm_bindgen::prelude::*;
use zzpa::classify::{build_zigzag, FractionLabel, LabelledMap};
use zzpa::galois::limit_set_exact;
use zzpa::render::{render_limit_set_svg, render_zigzag_svg, FigureSpec};
use zzpa::salem::salem_report;

fn labelled(m: u32, a: u32, b: u32) -> Result<LabelledMap, String> {
    let q = FractionLabel::new(a as u64, b as u64).map_err(|e| e.to_string())?;
    build_zigzag(m, q).map_err(|e| e.to_string())
}

pub fn zigzag_figure(m: u32, a: u32, b: u32) -> Result<String, String> {
    let lm = labelled(m, a, b)?;
    Ok(render_zigzag_svg(&lm.map, &lm.postcritical, &FigureSpec::default()))
}

pub fn limit_set_figure(m: u32, a: u32, b: u32) -> Result<String, String> {
    let lm = labelled(m, a, b)?;
    let out = limit_set_exact(&lm.map).map_err(|e| e.to_string())?;
    render_limit_set_svg(&out, &FigureSpec::default()).map_err(|e| e.to_string())
}

pub fn salem_report_json(g: u32) -> Result<String, String> {
    let r = salem_report(g).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn zigzag_svg(m: u32, a: u32, b: u32) -> Result<String, JsError> {
    zigzag_figure(m, a, b).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn limit_set_svg(m: u32, a: u32, b: u32) -> Result<String, JsError> {
    limit_set_figure(m, a, b).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn salem_json(g: u32) -> Result<String, JsError> {
    salem_report_json(g).map_err(|e| JsError::new(&e))
}
