use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde_json::{json, Value};
use spectral_gamma::{Error, Result};

use crate::envelope::{combined_checksum, sha256_hex, Envelope, TOOL, VERSION};

fn load(path: &PathBuf) -> Result<(Envelope, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let env: Envelope = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Parse(format!("{}: not a {TOOL} output: {e}", path.display())))?;
    if env.tool != TOOL {
        return Err(Error::Domain(format!("{}: produced by {:?}, not {TOOL}", path.display(), env.tool)));
    }
    if env.version != VERSION {
        return Err(Error::Domain(format!(
            "{}: version {} does not match this tool's version {VERSION}",
            path.display(),
            env.version
        )));
    }
    if env.command == "report" {
        return Err(Error::Domain(format!("{}: reports cannot be aggregated again", path.display())));
    }
    if env.result.is_none() {
        return Err(Error::Domain(format!("{}: output carries no result", path.display())));
    }
    Ok((env, bytes))
}

fn interval(v: &Value) -> Option<(f64, f64)> {
    Some((v.get("lower")?.as_f64()?, v.get("upper")?.as_f64()?))
}

/// Radius and sigma1 outputs for the same element, side by side.
fn cross_references(entries: &[Envelope]) -> Vec<Value> {
    let mut by_element: BTreeMap<String, (Vec<&Value>, Vec<&Value>)> = BTreeMap::new();
    for e in entries {
        let result = e.result.as_ref().expect("checked on load");
        let Some(id) = result.get("element_checksum").and_then(Value::as_str) else {
            continue;
        };
        let slot = by_element.entry(id.to_string()).or_default();
        match e.command.as_str() {
            "radius" => slot.0.push(result),
            "sigma1" => slot.1.push(result),
            _ => {}
        }
    }
    let mut out = Vec::new();
    for (id, (radii, verdicts)) in by_element {
        for r in &radii {
            for s in &verdicts {
                let a = r.get("l1_radius").and_then(interval);
                let b = s.pointer("/sigma1/r_l1").and_then(interval);
                let overlap = match (a, b) {
                    (Some((l1, u1)), Some((l2, u2))) => Value::Bool(l1.max(l2) <= u1.min(u2)),
                    _ => Value::Null,
                };
                out.push(json!({
                    "element_checksum": id,
                    "l1_radius": r.get("l1_radius"),
                    "reduced_radius": r.get("reduced_radius"),
                    "sigma1_r_l1": s.pointer("/sigma1/r_l1"),
                    "sigma1_opnorm": s.pointer("/sigma1/opnorm"),
                    "verdict": s.pointer("/sigma1/verdict"),
                    "radius_intervals_overlap": overlap,
                }));
            }
        }
    }
    out
}

fn verdicts(entries: &[Envelope]) -> Vec<Value> {
    entries
        .iter()
        .filter_map(|e| {
            let r = e.result.as_ref()?;
            let v = match e.command.as_str() {
                "sigma1" => r.pointer("/sigma1/verdict")?,
                "kesten" => r.get("verdict")?,
                _ => return None,
            };
            Some(json!({ "command": e.command, "input_checksum": e.input_checksum, "verdict": v }))
        })
        .collect()
}

/// Aggregates prior outputs into one document; an empty bundle gives metadata only.
pub fn report(files: &[PathBuf], seed: u64) -> Result<String> {
    let loaded: Vec<Result<(Envelope, Vec<u8>)>> = files.par_iter().map(load).collect();
    let loaded = loaded.into_iter().collect::<Result<Vec<_>>>()?;
    let seeds: Vec<u64> = loaded.iter().map(|(e, _)| e.seed).collect();
    if seeds.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Domain(format!("bundle mixes seeds {seeds:?}")));
    }
    let seed = seeds.first().copied().unwrap_or(seed);

    let mut keyed: Vec<(String, Envelope, Vec<u8>)> = loaded
        .into_iter()
        .map(|(e, bytes)| {
            let key = format!("{}\u{0}{}\u{0}{}", e.command, e.input_checksum, sha256_hex(&bytes));
            (key, e, bytes)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    let digests: Vec<Vec<u8>> = keyed.iter().map(|(_, _, b)| b.clone()).collect();
    let entries: Vec<Envelope> = keyed.into_iter().map(|(_, e, _)| e).collect();

    let params = json!({ "bundle_size": entries.len() });
    let result = if entries.is_empty() {
        None
    } else {
        Some(json!({
            "entries": entries.iter().map(|e| json!({
                "command": e.command,
                "input_checksum": e.input_checksum,
                "parameters": e.parameters,
                "result": e.result,
            })).collect::<Vec<_>>(),
            "verdicts": verdicts(&entries),
            "cross_references": cross_references(&entries),
        }))
    };
    Ok(Envelope::new("report", seed, params, combined_checksum(&digests), result).render())
}
