//! Browser bindings: generate an instance, analyze it, decide one pair.
//! Every entry point takes and returns JSON text; failures come back as `{"error": "..."}`.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use leonard_core::instances::{Family, GeneratorConfig};
use leonard_core::io::{load_instance, InstanceFile};
use leonard_core::report::{self, DecideReport, DeltaReport, PairSelection, VerifyReport};
use leonard_core::FieldSpec;

const NAME: &str = "demo";

#[derive(Serialize)]
struct Analysis {
    verify: VerifyReport,
    delta: Option<DeltaReport>,
    decide: Option<DecideReport>,
}

fn error_json(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn settle(r: Result<String, String>) -> String {
    r.unwrap_or_else(error_json)
}

pub fn generate_text(family: &str, d: usize, field: &str, seed: u64) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e| format!("{e}"))?;
    let spec: FieldSpec = field.parse().map_err(|e| format!("{e}"))?;
    let ctx = GeneratorConfig::new(family, d, spec, seed).generate().map_err(|e| e.to_string())?;
    let seed = (family != Family::Krawtchouk).then_some(seed);
    Ok(InstanceFile::from_context(&ctx, Some(format!("{}_d{d}", family.name())), Some(family.name().into()), seed)
        .to_json())
}

pub fn analyze_text(instance: &str) -> Result<String, String> {
    let inst = load_instance(instance).map_err(|e| e.to_string())?;
    let (verify, _) = report::verify(&inst, NAME);
    let built = inst.context().is_ok();
    let delta = if built { Some(report::delta(&inst, NAME).map_err(|e| e.to_string())?.0) } else { None };
    let decide =
        if built { Some(report::decide(&inst, NAME, PairSelection::All).map_err(|e| e.to_string())?.0) } else { None };
    serde_json::to_string(&Analysis { verify, delta, decide }).map_err(|e| e.to_string())
}

pub fn decide_text(instance: &str, i: usize, j: usize) -> Result<String, String> {
    let inst = load_instance(instance).map_err(|e| e.to_string())?;
    let (rep, _) = report::decide(&inst, NAME, PairSelection::One(i, j)).map_err(|e| e.to_string())?;
    serde_json::to_string(&rep).map_err(|e| e.to_string())
}

/// Instance JSON for a generator family (`krawtchouk`, `affine-krawtchouk`, `random-gfp`, `complete-delta`).
#[wasm_bindgen]
pub fn generate(family: &str, d: usize, field: &str, seed: u32) -> String {
    settle(generate_text(family, d, field, u64::from(seed)))
}

/// Leonard-pair verdict, the graph on eigenvalue indices, and the verdict for every ordered pair.
#[wasm_bindgen]
pub fn analyze(instance: &str) -> String {
    settle(analyze_text(instance))
}

/// Verdict and certificate for the ordered pair `(i, j)`.
#[wasm_bindgen]
pub fn decide_pair(instance: &str, i: usize, j: usize) -> String {
    settle(decide_text(instance, i, j))
}
