//! Browser bindings. Each export returns a JSON string; errors become
//! JavaScript exceptions carrying the message.

use serde_json::json;
use wasm_bindgen::prelude::*;

use ocltl::backend::{realize, RealizeOptions, Verdict};
use ocltl::fixpoint::eliminate_fixpoints;
use ocltl::parse::{parse_fo, parse_spec, parse_struct_expr};
use ocltl::runtime::{check_prefix, check_trace, format_tuple, read_inputs, simulate, Transducer};
use ocltl::structure::{Caps, Element};
use ocltl::translate::{reduce_to_kernel, translate, Encoding, GuardDepth, GuardMode};

/// Keeps the page responsive on large arities.
const MAX_TYPES: usize = 5000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn types_json(structure: &str, arity: usize) -> Result<String, String> {
    let s = parse_struct_expr(structure).map_err(err)?.build().with_caps(Caps {
        max_arity: None,
        max_types: MAX_TYPES,
    });
    let types: Vec<String> = s.enumerate_types(arity).map_err(err)?.iter().map(|t| s.render_type(t)).collect();
    Ok(json!({ "structure": s.to_string(), "arity": arity, "count": types.len(), "types": types }).to_string())
}

/// Synthesizes a strategy and, when one exists, runs it on `inputs`
/// repeated forever.
pub fn synth_json(spec: &str, mode: &str, inputs: &str, steps: usize) -> Result<String, String> {
    let surface = parse_spec(spec).map_err(err)?;
    let k = reduce_to_kernel(&surface, GuardDepth::AtomLag).map_err(err)?;
    let enc = match Encoding::from_name(mode) {
        Some(e @ (Encoding::Naive | Encoding::Binary | Encoding::Minterm)) => e,
        _ => return Err(format!("unknown mode `{mode}`")),
    };
    let p = translate(&k, enc, GuardMode::Past).map_err(err)?;
    let opts = RealizeOptions {
        cap: 4,
        ..RealizeOptions::default()
    };
    let verdict = realize(&p.formula(), &p.inputs, &p.outputs, &opts).map_err(err)?;
    let props = json!({ "inputs": p.inputs.len(), "outputs": p.outputs.len() });
    let m = match verdict {
        Verdict::Realizable(m) => m,
        Verdict::Unrealizable(c) => {
            return Ok(json!({ "verdict": "unrealizable", "states": c.len(), "props": props }).to_string());
        }
        Verdict::Unknown(why) => return Ok(json!({ "verdict": "unknown", "reason": why, "props": props }).to_string()),
    };
    let states = m.len();
    let ins = read_inputs(&k.structure, inputs, k.streams).map_err(err)?;
    if ins.is_empty() {
        return Err("no input tuples given".into());
    }
    let mut t = Transducer::new(m, &p.meta, &k).map_err(err)?;
    let sim = simulate(&mut t, &[], &ins, steps.max(1), 500).map_err(err)?;
    let rows: Vec<_> = sim
        .records
        .iter()
        .map(|r| {
            json!({
                "t": r.t,
                "inputs": format_tuple(&r.inputs),
                "state": r.state,
                "sigma": t.render_partial(r.sigma),
                "tau": t.render_full(r.tau),
                "outputs": format_tuple(&r.outputs),
            })
        })
        .collect();
    let trace = match &sim.lasso {
        Some(tr) => {
            if check_trace(&surface, tr, GuardDepth::AtomLag).map_err(err)? {
                "lasso satisfies the spec"
            } else {
                "lasso violates the spec"
            }
        }
        None => match check_prefix(&surface, &sim.steps, GuardDepth::AtomLag).map_err(err)? {
            Some(false) => "prefix violates the spec",
            _ => "no violation on the prefix (run does not close into a lasso)",
        },
    };
    Ok(json!({ "verdict": "realizable", "states": states, "props": props, "run": rows, "trace": trace }).to_string())
}

/// `constants` holds `name=value` or bare `name` entries separated by commas.
pub fn elimfix_json(formula: &str, structure: &str, constants: &str) -> Result<String, String> {
    let base = parse_struct_expr(structure).map_err(err)?.build();
    let mut decls: Vec<(String, Option<Element>)> = Vec::new();
    for c in constants.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        match c.split_once('=') {
            Some((n, v)) => decls.push((n.trim().into(), Some(base.parse_element(v.trim()).map_err(err)?))),
            None => decls.push((c.into(), None)),
        }
    }
    let names: Vec<String> = decls.iter().map(|(n, _)| n.clone()).collect();
    let s = if decls.is_empty() {
        base
    } else {
        base.with_constants(decls).map_err(err)?
    };
    let f = parse_fo(formula, &names).map_err(err)?;
    let out = eliminate_fixpoints(&s, &f).map_err(err)?;
    let traces: Vec<_> = out
        .traces
        .iter()
        .map(|tr| {
            json!({
                "op": tr.op.keyword(),
                "rel": tr.rel,
                "sizes": tr.sets.iter().map(|s| s.len()).collect::<Vec<_>>(),
                "fixed_at": tr.fixed_at,
            })
        })
        .collect();
    Ok(json!({ "formula": out.formula.to_string(), "traces": traces, "warnings": out.warnings }).to_string())
}

#[wasm_bindgen]
pub fn types(structure: &str, arity: usize) -> Result<String, JsValue> {
    types_json(structure, arity).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn synth(spec: &str, mode: &str, inputs: &str, steps: usize) -> Result<String, JsValue> {
    synth_json(spec, mode, inputs, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn elimfix(formula: &str, structure: &str, constants: &str) -> Result<String, JsValue> {
    elimfix_json(formula, structure, constants).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn listing() {
        let v = parse(types_json("dlo", 2).unwrap());
        assert_eq!(v["count"], 3);
        assert_eq!(v["types"][0], "1=2");
        assert!(types_json("aba", 4).is_err());
    }

    #[test]
    fn echo_run() {
        let v = parse(synth_json("structure eq; spec G { y = x }", "binary", "3\n9\n", 4).unwrap());
        assert_eq!(v["verdict"], "realizable");
        let outs: Vec<&str> = v["run"].as_array().unwrap().iter().map(|r| r["outputs"].as_str().unwrap()).collect();
        assert_eq!(outs[..4], ["3", "9", "3", "9"]);
        assert_eq!(v["trace"], "lasso satisfies the spec");
        let v = parse(synth_json("structure eq; lookback 1; spec G (YTRUE -> { x = y[-1] })", "naive", "1", 1).unwrap());
        assert_eq!(v["verdict"], "unrealizable");
        assert!(synth_json("structure eq; spec G { y = x }", "sat", "1", 1).is_err());
    }

    #[test]
    fn interval() {
        let v = parse(
            elimfix_json(
                "lfp R(x). (x = a | x = b | exists u. exists v. (R(u) & R(v) & u < x & x < v)) @ (x)",
                "dlo",
                "a=0, b=1",
            )
            .unwrap(),
        );
        assert_eq!(v["traces"][0]["fixed_at"], 2);
        assert_eq!(v["traces"][0]["sizes"], json!([0, 2, 3]));
    }
}
