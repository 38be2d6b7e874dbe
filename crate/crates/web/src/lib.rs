//! Browser bindings for the phasecert demo page.
//!
//! The plain functions return JSON strings and are what the native tests
//! exercise; the `#[wasm_bindgen]` wrappers only convert errors to `JsError`.

use phasecert::almost_inj::almost_inj_bounds;
use phasecert::certify::{certify, Property};
use phasecert::ensemble::{Field, MeasurementEnsemble};
use phasecert::explorer::{run_grid, GridProperty, GridSpec};
use phasecert::injectivity::injectivity_bounds;
use phasecert::numerics::ToleranceConfig;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest `trials × cells` the page may request in one call.
pub const MAX_WORK: usize = 20_000;

/// Success counts over `N = n_min..=n_max` for one `M`, as
/// `{"cells":[{"N":..,"successes":..,"trials":..}, ..], "necessity_only":..}`.
pub fn transition_curve_json(
    field: &str,
    property: &str,
    m: usize,
    n_min: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<String, String> {
    let cells = n_max.saturating_sub(n_min) + 1;
    if trials.saturating_mul(cells) > MAX_WORK {
        return Err(format!("at most {MAX_WORK} trials per request"));
    }
    let spec = GridSpec {
        field: field.parse().map_err(|e| format!("{e}"))?,
        property: property.parse::<GridProperty>().map_err(|e| format!("{e}"))?,
        m_range: m..=m,
        n_range: n_min..=n_max,
        trials,
        seed,
    };
    let results = run_grid(&spec).map_err(|e| e.to_string())?;
    let cells: Vec<_> = results
        .iter()
        .map(|c| json!({ "N": c.n, "successes": c.successes, "inconclusive": c.inconclusive, "trials": c.trials }))
        .collect();
    Ok(json!({
        "field": field,
        "property": spec.property.name(),
        "M": m,
        "necessity_only": spec.property.necessity_only(),
        "cells": cells,
    })
    .to_string())
}

/// Injectivity and almost-injectivity thresholds for `field` and `m`.
pub fn bounds_json(field: &str, m: usize) -> Result<String, String> {
    let field: Field = field.parse().map_err(|e| format!("{e}"))?;
    let inj = injectivity_bounds(field, m).map_err(|e| e.to_string())?;
    let almost = almost_inj_bounds(field, m).map_err(|e| e.to_string())?;
    Ok(json!({ "injectivity": inj, "almost_injectivity": almost }).to_string())
}

/// Certifies a JSON matrix document; returns the verdict record plus a
/// `text` rendering.
pub fn certify_json(matrix: &str, property: &str) -> Result<String, String> {
    let phi = MeasurementEnsemble::from_json(matrix).map_err(|e| e.to_string())?;
    let property: Property = property.parse().map_err(|e| format!("{e}"))?;
    let cert = certify(&phi, property, &ToleranceConfig::default(), 0).map_err(|e| e.to_string())?;
    let mut record = cert.record.clone();
    record["text"] = json!(cert.render_text());
    Ok(record.to_string())
}

#[wasm_bindgen]
pub fn transition_curve(
    field: &str,
    property: &str,
    m: usize,
    n_min: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<String, JsError> {
    transition_curve_json(field, property, m, n_min, n_max, trials, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bounds(field: &str, m: usize) -> Result<String, JsError> {
    bounds_json(field, m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = certifyMatrix)]
pub fn certify_matrix(matrix: &str, property: &str) -> Result<String, JsError> {
    certify_json(matrix, property).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn curve_shows_real_transition() {
        let out = transition_curve_json("real", "RealInjective", 3, 4, 5, 20, 9).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["cells"][0]["successes"], 0);
        assert_eq!(v["cells"][1]["successes"], 20);
        assert_eq!(v["necessity_only"], false);
    }

    #[test]
    fn curve_rejects_bad_requests() {
        assert!(transition_curve_json("real", "ComplexInjectiveM3", 3, 7, 8, 10, 0).is_err());
        assert!(transition_curve_json("real", "RealInjective", 3, 1, 100, 1000, 0).is_err());
        assert!(transition_curve_json("quaternion", "RealInjective", 3, 4, 5, 10, 0).is_err());
    }

    #[test]
    fn bounds_record() {
        let v: Value = serde_json::from_str(&bounds_json("complex", 3).unwrap()).unwrap();
        assert_eq!(v["injectivity"]["necessary_n"], 8);
        assert!(bounds_json("complex", 1).is_err());
    }

    #[test]
    fn certify_record() {
        let doc = r#"{"field":"real","M":2,"N":3,"columns":[[[1,0],[0,0]],[[0,0],[1,0]],[[1,0],[1,0]]]}"#;
        let v: Value = serde_json::from_str(&certify_json(doc, "real-injectivity").unwrap()).unwrap();
        assert_eq!(v["verdict"], "Injective");
        assert!(v["text"].as_str().unwrap().starts_with("Injective"));
        assert!(certify_json("[]", "hmw").is_err());
    }
}
