use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use spectral_gamma::algebra::{AlgElement, ElementFile};
use spectral_gamma::groups::{GroupElement, GroupSpec};
use spectral_gamma::holocalc::{
    build_contour_scaled, holo_calc_with, BBox, HoloFn, QuadratureOptions, RegionSet, SquareMatrix, Target,
    DEFAULT_NODES,
};
use spectral_gamma::ktheory::{analyze_components, component_counts};
use spectral_gamma::ranks::{rank_report, rows_to_csv, SpaceDescriptor};
use spectral_gamma::spectra::{
    free_semigroup_l1_probe, kesten_check_with, l1_spectral_radius_with, opnorm_estimate, reduced_norm_trace_with,
    sigma1_verdict_with, subexp_sandwich_radius_with, EstimatorOptions, SpectralEstimate, Verdict, DEFAULT_N_MAX,
    DEFAULT_TOL,
};
use spectral_gamma::weights::{control_check, subexponentiality_probe, NormSelector, Weight, WeightKind};
use spectral_gamma::{Error, Result};

use crate::config::{parse_k_range, Command, Format, RunConfig};
use crate::envelope::{combined_checksum, sha256_hex, Envelope, Interval};

/// Default `n` range of the weight probe.
const WEIGHT_N_MAX: u64 = 64;
/// Powers checked by the free-semigroup probe in `sigma1`.
const SEMIGROUP_PROBE_POWER: u32 = 6;
const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Done,
    Inconclusive,
    /// A cap stopped the computation short of its tolerance.
    CapReached(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub status: Status,
}

/// Raw input bytes, in the order they were read.
#[derive(Default)]
struct Inputs(Vec<Vec<u8>>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::Parse(format!("{}: file is not valid UTF-8", path.display())))?;
        self.0.push(bytes);
        Ok(text)
    }

    fn checksum(&self) -> String {
        combined_checksum(&self.0)
    }
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

struct LoadedElement {
    element: AlgElement,
    checksum: String,
}

fn load_element(inputs: &mut Inputs, path: &Path, group: Option<&str>) -> Result<LoadedElement> {
    let text = inputs.read(path)?;
    let file = ElementFile::parse(&text).map_err(|e| in_file(path, e))?;
    if let Some(g) = group {
        let spec: GroupSpec = g.parse()?;
        if spec != file.group {
            return Err(Error::Domain(format!(
                "{}: element is over {}, but --group is {spec}",
                path.display(),
                file.group
            )));
        }
    }
    let element = file.to_element().map_err(|e| in_file(path, e))?;
    let checksum = element_checksum(&element);
    Ok(LoadedElement { element, checksum })
}

/// Digest of the canonical element file, independent of input formatting.
pub fn element_checksum(a: &AlgElement) -> String {
    sha256_hex(ElementFile::from_element(a).to_json().as_bytes())
}

fn load_matrix(inputs: &mut Inputs, path: &Path) -> Result<SquareMatrix> {
    let text = inputs.read(path)?;
    SquareMatrix::from_json(&text).map_err(|e| in_file(path, e))
}

/// A region file, or one of the names `omega0`, `omega1`, `full-plane`.
fn load_region(inputs: &mut Inputs, arg: &str) -> Result<RegionSet> {
    let path = Path::new(arg);
    if path.exists() {
        let text = inputs.read(path)?;
        return RegionSet::from_json(&text).map_err(|e| in_file(path, e));
    }
    let region = match arg {
        "omega0" => RegionSet::omega0(),
        "omega1" => RegionSet::omega1(),
        "full-plane" => RegionSet::full_plane(),
        _ => return Err(Error::Domain(format!("region {arg:?} is neither a file nor a known region name"))),
    };
    inputs.0.push(region.to_json().into_bytes());
    Ok(region)
}

/// `growth-sqrt`, `polynomial:s`, `constant:c`, or a JSON object.
fn parse_weight_kind(text: &str) -> Result<WeightKind> {
    let t = text.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(format!("--weight: {e}")));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("--weight: bad number {s:?}")));
    match t.split_once(':') {
        None if t == "growth-sqrt" => Ok(WeightKind::GrowthSqrt),
        Some(("polynomial", s)) => Ok(WeightKind::Polynomial { s: num(s)? }),
        Some(("constant", c)) => Ok(WeightKind::Constant { c: num(c)? }),
        _ => Err(Error::Parse(format!("--weight: unknown weight {t:?}"))),
    }
}

fn estimator_options(cfg: &RunConfig) -> EstimatorOptions {
    EstimatorOptions {
        n_max: cfg.n_max.unwrap_or(DEFAULT_N_MAX),
        tol: cfg.tol.unwrap_or(DEFAULT_TOL),
        support_cap: cfg.caps.support,
        ..EstimatorOptions::default()
    }
}

fn estimator_parameters(opts: &EstimatorOptions) -> Value {
    json!({
        "n_max": opts.n_max,
        "tol": opts.tol,
        "support_cap": opts.support_cap,
        "truncation": opts.truncation,
        "grid": opts.grid,
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

/// Capability gaps become `null`; everything else propagates.
fn optional<T: Serialize>(r: Result<T>) -> Result<Value> {
    match r {
        Ok(x) => Ok(to_value(&x)),
        Err(Error::Capability(_)) => Ok(Value::Null),
        Err(e) => Err(e),
    }
}

/// An iteration that stopped short of `n_max` for lack of room, rather than
/// at an exactly zero power.
fn depth_status(est: &SpectralEstimate, what: &str) -> Status {
    match est.trace.last() {
        Some(&(n, v)) if n < est.n_max && v != 0.0 => Status::CapReached(format!(
            "{what} stopped at n = {n} of {}: support cap or pair budget reached",
            est.n_max
        )),
        _ => Status::Done,
    }
}

fn json_outcome(cfg: &RunConfig, parameters: Value, inputs: &Inputs, result: Value, status: Status) -> Outcome {
    let env = Envelope::new(cfg.command.name(), cfg.seed, parameters, inputs.checksum(), Some(result));
    Outcome { output: env.render(), status }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut inputs = Inputs::default();
    match &cfg.command {
        Command::Radius { element, group } => {
            let a = load_element(&mut inputs, element, group.as_deref())?;
            let opts = estimator_options(cfg);
            let l1 = l1_spectral_radius_with(&a.element, &opts, &[])?;
            let status = depth_status(&l1, "l1 radius");
            let reduced = optional(reduced_norm_trace_with(&a.element, &opts))?;
            let sandwich = if a.element.spec().has_subexponential_growth() {
                optional(subexp_sandwich_radius_with(&a.element, &opts))?
            } else {
                Value::Null
            };
            let result = json!({
                "element_checksum": a.checksum,
                "group": a.element.spec().to_string(),
                "support_size": a.element.len(),
                "l1_radius": l1,
                "reduced_radius": reduced,
                "sandwich": sandwich,
            });
            Ok(json_outcome(cfg, estimator_parameters(&opts), &inputs, result, status))
        }
        Command::Norm { element, group } => {
            let a = load_element(&mut inputs, element, group.as_deref())?;
            let opts = estimator_options(cfg);
            let n = a.element.len();
            let result = json!({
                "element_checksum": a.checksum,
                "group": a.element.spec().to_string(),
                "l1": Interval::rounded(a.element.l1(), n),
                "l2": Interval::rounded(a.element.l2(), n + 1),
                "reduced_norm": optional(opnorm_estimate(&a.element, &opts))?,
            });
            Ok(json_outcome(cfg, estimator_parameters(&opts), &inputs, result, Status::Done))
        }
        Command::Sigma1 { element, group } => {
            let a = load_element(&mut inputs, element, group.as_deref())?;
            let opts = estimator_options(cfg);
            let verdict = sigma1_verdict_with(&a.element, &a.checksum, &opts)?;
            let probe = match free_semigroup_l1_probe(&a.element, SEMIGROUP_PROBE_POWER, cfg.caps.support) {
                Ok(b) => Value::Bool(b),
                Err(e) if e.is_resource() => Value::Null,
                Err(e) => return Err(e),
            };
            let status = match depth_status(&verdict.r_l1, "l1 radius") {
                Status::Done if verdict.verdict == Verdict::Inconclusive => Status::Inconclusive,
                s => s,
            };
            let result = json!({
                "element_checksum": a.checksum,
                "group": a.element.spec().to_string(),
                "l1_norm": Interval::rounded(a.element.l1(), a.element.len()),
                "free_semigroup_probe": { "max_power": SEMIGROUP_PROBE_POWER, "holds": probe },
                "sigma1": verdict,
            });
            Ok(json_outcome(cfg, estimator_parameters(&opts), &inputs, result, status))
        }
        Command::Kesten { group, element } => {
            let spec: GroupSpec = group.parse()?;
            let set: Vec<GroupElement> = match element {
                Some(p) => {
                    let a = load_element(&mut inputs, p, Some(group))?;
                    a.element.support().cloned().collect()
                }
                None => {
                    inputs.0.push(spec.to_string().into_bytes());
                    spec.generators()
                }
            };
            let opts = estimator_options(cfg);
            let report = kesten_check_with(&set, &spec, &opts)?;
            let verdict = kesten_verdict(&report.radius, report.card, opts.tol);
            let status = if verdict == "inconclusive" { Status::Inconclusive } else { Status::Done };
            let result = json!({
                "group": spec.to_string(),
                "set": set.iter().map(|g| spec.format_element(g)).collect::<Vec<_>>(),
                "kesten": report,
                "verdict": verdict,
            });
            Ok(json_outcome(cfg, estimator_parameters(&opts), &inputs, result, status))
        }
        Command::Calc { matrix, func, region, fixed } => {
            calc(cfg, &mut inputs, matrix, func, region.as_deref(), *fixed)
        }
        Command::Kcount { region, matrix, resolution } => {
            let omega = load_region(&mut inputs, region)?;
            let m = load_matrix(&mut inputs, matrix)?;
            let eigs = m.eigenvalues()?;
            let oc = analyze_components(&omega, BBox::around(&eigs), *resolution)?;
            let counts = component_counts(&m, &oc)?;
            let result = json!({
                "k": oc.k,
                "counts": counts.counts,
                "base_index": oc.base_index,
                "components": oc.components,
                "grid_spacing": oc.resolution,
                "eigenvalues": eigs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            });
            Ok(json_outcome(cfg, json!({ "resolution": resolution }), &inputs, result, Status::Done))
        }
        Command::Ranks { space, k } => {
            let s: SpaceDescriptor = space.parse()?;
            let ks = parse_k_range(k)?;
            inputs.0.push(s.to_string().into_bytes());
            let report = rank_report(&s, ks.iter().copied());
            if cfg.format == Format::Csv {
                return Ok(Outcome { output: rows_to_csv(&report.rows)?, status: Status::Done });
            }
            let params = json!({ "space": s.to_string(), "k": ks });
            Ok(json_outcome(cfg, params, &inputs, to_value(&report), Status::Done))
        }
        Command::Weights { group, weight, element, control } => {
            weights(cfg, &mut inputs, group, weight, element.as_deref(), *control)
        }
        Command::Report { .. } => unreachable!("report is dispatched separately"),
    }
}

/// `non-amenable-witness` when the certified norm stays below `#S`,
/// `amenable-consistent` when a tight interval reaches it.
fn kesten_verdict(radius: &SpectralEstimate, card: usize, tol: f64) -> &'static str {
    let c = card as f64;
    if radius.upper < c * (1.0 - 1e-12) {
        "non-amenable-witness"
    } else if radius.lower >= c * (1.0 - tol) {
        "amenable-consistent"
    } else {
        "inconclusive"
    }
}

fn calc(
    cfg: &RunConfig,
    inputs: &mut Inputs,
    matrix: &Path,
    func: &str,
    region: Option<&str>,
    fixed: bool,
) -> Result<Outcome> {
    let f = if Path::new(func).is_file() {
        let text = inputs.read(Path::new(func))?;
        HoloFn::parse(&text).map_err(|e| in_file(Path::new(func), e))?
    } else {
        inputs.0.push(func.as_bytes().to_vec());
        HoloFn::parse(func)?
    };
    let m = load_matrix(inputs, matrix)?;
    let domain = f.domain()?;
    let omega = match region {
        Some(r) => RegionSet::Intersection(vec![load_region(inputs, r)?, domain]),
        None => domain,
    };
    let start = cfg.nodes.unwrap_or(DEFAULT_NODES);
    if start > cfg.caps.nodes {
        return Err(Error::Domain(format!("--nodes {start} exceeds the node cap {}", cfg.caps.nodes)));
    }
    let opts =
        QuadratureOptions { adaptive: !fixed, max_nodes: cfg.caps.nodes, tol: cfg.tol.unwrap_or(QUADRATURE_TOL) };
    let eigs = m.eigenvalues()?;
    let contour = build_contour_scaled(&eigs, &omega, &Target::All, m.spectral_norm())?.with_nodes(start);
    let out = holo_calc_with(&f, &m, &contour, &opts)?;
    let status = if out.converged {
        Status::Done
    } else {
        Status::CapReached(format!(
            "node cap {} reached with relative change {:.3e} above {:.3e}",
            cfg.caps.nodes, out.change, opts.tol
        ))
    };
    let params = json!({
        "fn": f,
        "nodes": start,
        "node_cap": cfg.caps.nodes,
        "adaptive": opts.adaptive,
        "tol": opts.tol,
    });
    let result = json!({
        "value": out.value.to_rows(),
        "nodes": out.nodes,
        "relative_change": if out.change.is_finite() { json!(out.change) } else { Value::Null },
        "converged": out.converged,
        "condition": out.condition,
        "eigenvalues": eigs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "contour": contour,
    });
    Ok(json_outcome(cfg, params, inputs, result, status))
}

/// A random element: up to six terms, each on a product of at most four
/// generators, with coefficients uniform in the unit square.
fn random_element(rng: &mut ChaCha8Rng, spec: &GroupSpec, gens: &[GroupElement]) -> Result<AlgElement> {
    let terms = rng.random_range(1..=6);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut g = spec.identity();
        for _ in 0..rng.random_range(0..=4) {
            g = spec.multiply(&g, &gens[rng.random_range(0..gens.len())])?;
        }
        let c = num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        out.push((g, c));
    }
    AlgElement::from_terms(spec.clone(), out)
}

fn weights(
    cfg: &RunConfig,
    inputs: &mut Inputs,
    group: &str,
    weight: &str,
    element: Option<&Path>,
    control: usize,
) -> Result<Outcome> {
    let spec: GroupSpec = group.parse()?;
    let w = Weight::new(parse_weight_kind(weight)?, spec.clone())?;
    let set: Vec<GroupElement> = match element {
        Some(p) => load_element(inputs, p, Some(group))?.element.support().cloned().collect(),
        None => {
            inputs.0.push(spec.to_string().into_bytes());
            spec.generators()
        }
    };
    let n_max = cfg.n_max.unwrap_or(WEIGHT_N_MAX);
    let probe = subexponentiality_probe(&w, &set, n_max, cfg.caps.ball)?;
    if cfg.format == Format::Csv {
        let mut wr = csv::Writer::from_writer(Vec::new());
        for r in &probe.rows {
            wr.serialize(r).map_err(|e| Error::Structural(format!("csv: {e}")))?;
        }
        let bytes = wr.into_inner().map_err(|e| Error::Structural(format!("csv: {e}")))?;
        return Ok(Outcome { output: String::from_utf8(bytes).expect("csv is UTF-8"), status: Status::Done });
    }
    let control_summary = if control > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let gens = spec.generators();
        let samples = (0..control).map(|_| random_element(&mut rng, &spec, &gens)).collect::<Result<Vec<_>>>()?;
        let report = control_check(&samples, NormSelector::L2, NormSelector::L1, 1.0, &w)?;
        let tightest = report.rows.iter().filter(|r| r.rhs > 0.0).map(|r| r.lhs / r.rhs).fold(0.0, f64::max);
        json!({
            "samples": control,
            "norm_a": report.norm_a,
            "norm_b": report.norm_b,
            "constant": report.constant,
            "violations": report.violations,
            "max_ratio": tightest,
            "passed": report.passed(),
        })
    } else {
        Value::Null
    };
    let params = json!({
        "weight": w.kind,
        "n_max": n_max,
        "ball_cap": cfg.caps.ball,
        "control_samples": control,
    });
    let result = json!({ "group": spec.to_string(), "probe": probe, "control": control_summary });
    Ok(json_outcome(cfg, params, inputs, result, Status::Done))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_kinds() {
        assert_eq!(parse_weight_kind("growth-sqrt").unwrap(), WeightKind::GrowthSqrt);
        assert_eq!(parse_weight_kind("polynomial:2").unwrap(), WeightKind::Polynomial { s: 2.0 });
        assert_eq!(parse_weight_kind(r#"{"kind":"constant","c":3}"#).unwrap(), WeightKind::Constant { c: 3.0 });
        assert!(parse_weight_kind("cubic").is_err());
    }

    #[test]
    fn kesten_verdicts() {
        let est = |lower, upper| SpectralEstimate { value: lower, lower, upper, trace: vec![], n_max: 2 };
        assert_eq!(kesten_verdict(&est(3.4, 3.5), 4, 0.05), "non-amenable-witness");
        assert_eq!(kesten_verdict(&est(3.99, 4.0), 4, 0.05), "amenable-consistent");
        assert_eq!(kesten_verdict(&est(2.0, 4.0), 4, 0.05), "inconclusive");
    }
}
