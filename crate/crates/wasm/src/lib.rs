//! Browser bindings. Every function takes word text such as `n=3 s(1,3) s(1,2)` and
//! returns a JSON string, so the page needs no glue beyond `JSON.parse`.

use cactus_doodles::equivalence::{equivalent, minimize, SearchOptions};
use cactus_doodles::export::to_svg;
use cactus_doodles::io::DiagramJson;
use cactus_doodles::realize::faces;
use cactus_doodles::{close, perm_image, CactusWord};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Cap on orbit sizes so the page stays responsive.
const MAX_NODES: usize = 20_000;

fn parse(text: &str) -> Result<CactusWord, String> {
    text.trim().parse().map_err(|e| format!("{e}"))
}

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn opts() -> SearchOptions {
    SearchOptions { max_nodes: MAX_NODES, ..Default::default() }
}

pub fn describe_word(text: &str) -> Result<Value, String> {
    let w = parse(text)?;
    let d = close(&w);
    let f = faces(&d);
    Ok(json!({
        "perm": perm_image(&w).to_string(),
        "circles": d.circles().len(),
        "sets": d.set_sizes(),
        "realizable": f.components.iter().all(|c| c.genus == 0),
        "diagram": DiagramJson::from_diagram(&d),
        "svg": to_svg(&d),
    }))
}

pub fn minimize_word(text: &str) -> Result<Value, String> {
    let d = close(&parse(text)?);
    let m = minimize(&d, &opts()).map_err(|e| e.to_string())?;
    let steps: Vec<String> = m.moves.steps.iter().map(|s| s.result.to_string()).collect();
    Ok(json!({
        "before": d.crossing_count(),
        "crossing_number": m.diagram.crossing_count(),
        "moves": m.moves.len(),
        "steps": steps,
        "svg": to_svg(&m.diagram),
    }))
}

pub fn compare_words(a: &str, b: &str) -> Result<Value, String> {
    let (da, db) = (close(&parse(a)?), close(&parse(b)?));
    let same = equivalent(&da, &db, &opts()).map_err(|e| e.to_string())?;
    Ok(json!({ "equivalent": same }))
}

/// Permutation, closure drawing and realizability of a word.
#[wasm_bindgen]
pub fn describe(text: &str) -> String {
    respond(describe_word(text))
}

/// Crossing number of the closure and the drawing of a minimal diagram.
#[wasm_bindgen]
pub fn reduce(text: &str) -> String {
    respond(minimize_word(text))
}

/// Whether the closures of two words are equivalent.
#[wasm_bindgen]
pub fn compare(a: &str, b: &str) -> String {
    respond(compare_words(a, b))
}
