//! Browser bindings for the configuration calculus. Three interactive
//! operations back the static demo page in `www/`:
//!
//! * `resolve_singularity(q, q1)` — Hirzebruch-Jung resolution of C_{q,q1}
//!   with discrepancies and Cartier index, plus both resolution graphs;
//! * `fiber_square(type)` — a Kodaira fiber, its blow-up preparation and
//!   its pullback through the double cover, side by side;
//! * `scenario_report(name)` / `scenario_names()` — the verification
//!   scenario registry with full reports and artifact graphs.
//!
//! Every function returns a JSON string; graphs use the same schema as the
//! library's `emit` module.

use k3calc::cyclic_sing::{cartier_index, discrepancies, index_two_resolution, BrieskornType};
use k3calc::double_cover::pullback_fiber;
use k3calc::emit::to_json;
use k3calc::fibration::{fiber_data, prepare_fiber};
use k3calc::scenarios::{list_scenarios, run_scenario};
use k3calc::{ConfigBuilder, CurveId, InvariantLedger, KodairaType};
use serde_json::json;
use std::collections::BTreeSet;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn config_value(cfg: &k3calc::Config) -> serde_json::Value {
    serde_json::from_str(&to_json(cfg)).expect("emitted json parses")
}

/// Resolve the cyclic quotient singularity C_{q,q1}.
#[wasm_bindgen]
pub fn resolve_singularity(q: i64, q1: i64) -> Result<String, JsValue> {
    let b = BrieskornType::new(q, q1).map_err(err)?;
    let weights = b.weights();
    let mut builder = ConfigBuilder::new(InvariantLedger::neutral());
    for (i, w) in weights.iter().enumerate() {
        builder.add(format!("B{}", i + 1).as_str(), -w, 0);
    }
    for i in 1..weights.len() {
        builder.meet(format!("B{i}").as_str(), format!("B{}", i + 1).as_str());
    }
    let chain = builder.build().map_err(err)?;
    let d = discrepancies(&chain).map_err(err)?;
    let index = cartier_index(&chain).map_err(err)?;

    // for the index-2 family C_{4n,2n-1}, also show the alternating
    // blown-up chain
    let blown_up = if q % 4 == 0 && q1 == q / 2 - 1 {
        index_two_resolution((q / 4) as u32)
            .ok()
            .map(|r| config_value(&r.blown_up))
    } else {
        None
    };

    let out = json!({
        "type": b.to_string(),
        "weights": weights,
        "chain": config_value(&chain),
        "blown_up": blown_up,
        "discrepancies": d.by_curve.iter()
            .map(|(c, a)| json!({"curve": c.to_string(), "value": a.to_string()}))
            .collect::<Vec<_>>(),
        "cartier_index": index.to_string(),
        "du_val": d.all_zero(),
    });
    Ok(out.to_string())
}

/// One Kodaira fiber through the whole pipeline: reference graph, blow-up
/// preparation, pullback through the double cover.
#[wasm_bindgen]
pub fn fiber_square(kodaira: &str) -> Result<String, JsValue> {
    let t: KodairaType = kodaira.parse().map_err(err)?;
    let (shape, reference) = fiber_data(t);
    let mut out = json!({
        "type": t.to_string(),
        "euler": shape.euler,
        "components": shape.components,
        "branch_count": shape.branch_count,
        "reference": config_value(&reference),
    });
    if matches!(
        t,
        KodairaType::II | KodairaType::III | KodairaType::IV | KodairaType::I(_)
    ) {
        let p = prepare_fiber(t).map_err(err)?;
        let members: BTreeSet<CurveId> = p.fiber_curves.iter().cloned().collect();
        let sub = p.config.sub_config(&members);
        let pb = pullback_fiber(&sub, p.case).map_err(err)?;
        out["blow_ups"] = json!(p.blow_ups);
        out["case"] = json!(p.case.to_string());
        out["prepared"] = config_value(&sub);
        out["upstairs"] = config_value(&pb.upstairs);
        out["upstairs_type"] = json!(pb.kodaira.to_string());
    }
    Ok(out.to_string())
}

/// Names and anchors of every registered scenario.
#[wasm_bindgen]
pub fn scenario_names() -> String {
    let list: Vec<_> = list_scenarios()
        .into_iter()
        .map(|(name, anchor)| json!({"name": name, "anchor": anchor}))
        .collect();
    json!(list).to_string()
}

/// Full report of one scenario, artifacts included.
#[wasm_bindgen]
pub fn scenario_report(name: &str) -> Result<String, JsValue> {
    let r = run_scenario(name).map_err(err)?;
    let out = json!({
        "scenario": r.scenario,
        "anchor": r.anchor,
        "pass": r.pass,
        "expectations": r.expectations.iter().map(|e| json!({
            "name": e.name, "expected": e.expected, "actual": e.actual, "pass": e.pass,
        })).collect::<Vec<_>>(),
        "notes": r.notes,
        "artifacts": r.artifacts.iter().map(|(n, cfg)| json!({
            "name": n, "config": config_value(cfg),
        })).collect::<Vec<_>>(),
    });
    Ok(out.to_string())
}
