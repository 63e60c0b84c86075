//! Weights on finite subsets of a group and the norm-control inequality
//! `||a||_B <= C w(supp a) ||a||_A`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElement, MatrixAlgElement};
use crate::error::{Error, Result};
use crate::groups::{log_ball_volume, GroupElement, GroupSpec, DEFAULT_BALL_CAP};
use crate::spectra::fourier_opnorm_lattice;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightKind {
    /// `sqrt(vol B(R(S)))`.
    GrowthSqrt,
    /// `(1 + R(S))^s`.
    Polynomial { s: f64 },
    /// The constant `c >= 1`.
    Constant { c: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub kind: WeightKind,
    pub spec: GroupSpec,
}

impl Weight {
    pub fn new(kind: WeightKind, spec: GroupSpec) -> Result<Self> {
        spec.validate()?;
        match kind {
            WeightKind::Polynomial { s } if !(s.is_finite() && s >= 0.0) => {
                Err(Error::Domain(format!("polynomial exponent must be finite and >= 0, got {s}")))
            }
            WeightKind::Constant { c } if !(c.is_finite() && c >= 1.0) => {
                Err(Error::Domain(format!("constant weight must be finite and >= 1, got {c}")))
            }
            _ => Ok(Weight { kind, spec }),
        }
    }

    /// `ln w(S)` for any `S` with circumscribing radius `r`.
    pub fn log_at_radius(&self, r: u64) -> Result<f64> {
        match self.kind {
            WeightKind::GrowthSqrt => {
                let log_vol = log_ball_volume(&self.spec, r, DEFAULT_BALL_CAP)?;
                // small volumes are integers; round away the log-domain error
                let log_vol = if log_vol < 36.0 { (log_vol.exp().round()).ln() } else { log_vol };
                Ok(0.5 * log_vol)
            }
            WeightKind::Polynomial { s } => Ok(s * (1.0 + r as f64).ln()),
            WeightKind::Constant { c } => Ok(c.ln()),
        }
    }

    pub fn at_radius(&self, r: u64) -> Result<f64> {
        self.log_at_radius(r).map(f64::exp)
    }

    /// `w(S)` for a finite nonempty `S`.
    pub fn evaluate<'a, I>(&self, set: I) -> Result<f64>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let r = self.spec.circumscribing_radius(set)?;
        self.at_radius(r)
    }

    /// Whether `w(S^n)^(1/n) -> 1` for every finite `S`.
    pub fn is_subexponential(&self) -> bool {
        match self.kind {
            WeightKind::GrowthSqrt => self.spec.has_subexponential_growth(),
            _ => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    /// `S^n` enumerated as a product set.
    ProductSet,
    /// `S^n` replaced by the ball `B(n R(S))`, which contains it.
    BallBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    StrictlyDecreasing,
    NonIncreasing,
    NotMonotone,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub n: u64,
    /// `w(S^n)^(1/n)`.
    pub value: f64,
    /// Circumscribing radius used for `S^n`.
    pub radius: u64,
    pub mode: ProbeMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub weight: Weight,
    pub rows: Vec<ProbeRow>,
    /// `ball-bound` once any row used the ball bound.
    pub mode: ProbeMode,
    pub trend: Trend,
    pub subexponential: bool,
    pub note: String,
}

/// Probes `w(S^n)^(1/n)` for `n = 1..=n_max`.
///
/// Product sets are enumerated until one would exceed `cap` elements; from
/// then on `S^n` is bounded by `B(n R(S))`, which only overestimates `w`.
pub fn subexponentiality_probe(w: &Weight, set: &[GroupElement], n_max: u64, cap: usize) -> Result<ProbeReport> {
    if set.is_empty() {
        return Err(Error::Domain("probe of an empty set".into()));
    }
    if n_max == 0 {
        return Err(Error::Domain("n_max must be positive".into()));
    }
    for g in set {
        w.spec.check(g)?;
    }
    let base: Vec<GroupElement> = set.iter().cloned().collect::<HashSet<_>>().into_iter().collect();
    let r1 = w.spec.circumscribing_radius(&base)?;
    let mut power: Option<HashSet<GroupElement>> = Some(base.iter().cloned().collect());
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        if n > 1 {
            power = power.and_then(|p| {
                let mut next = HashSet::with_capacity(p.len() * 2);
                for g in &p {
                    for h in &base {
                        next.insert(w.spec.multiply(g, h).expect("checked elements"));
                        if next.len() > cap {
                            return None;
                        }
                    }
                }
                Some(next)
            });
        }
        let (radius, mode) = match &power {
            Some(p) => (w.spec.circumscribing_radius(p)?, ProbeMode::ProductSet),
            None => (n * r1, ProbeMode::BallBound),
        };
        let value = (w.log_at_radius(radius)? / n as f64).exp();
        rows.push(ProbeRow { n, value, radius, mode });
    }
    let trend = if rows.windows(2).all(|p| p[1].value < p[0].value) {
        Trend::StrictlyDecreasing
    } else if rows.windows(2).all(|p| p[1].value <= p[0].value) {
        Trend::NonIncreasing
    } else {
        Trend::NotMonotone
    };
    let mode =
        if rows.iter().any(|r| r.mode == ProbeMode::BallBound) { ProbeMode::BallBound } else { ProbeMode::ProductSet };
    let subexponential = w.is_subexponential();
    let note = if subexponential {
        format!("weight is subexponential on {}", w.spec)
    } else {
        format!("weight is not subexponential on {}: probes stay bounded away from 1", w.spec)
    };
    Ok(ProbeReport { weight: w.clone(), rows, mode, trend, subexponential, note })
}

/// Norms available to the control check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "norm", rename_all = "kebab-case")]
pub enum NormSelector {
    L1,
    L2,
    /// `sqrt(sum |a_g|^2 (1 + |g|)^(2s))`.
    WeightedL2 {
        s: f64,
    },
    /// Reduced norm on a lattice, as the sampled maximum of `|a^|`.
    FourierOpnorm {
        grid: usize,
    },
}

impl NormSelector {
    pub fn evaluate(&self, a: &AlgElement) -> Result<f64> {
        match *self {
            NormSelector::L1 => Ok(a.l1()),
            NormSelector::L2 => Ok(a.l2()),
            NormSelector::WeightedL2 { s } => Ok(a.norms(s)?.weighted_l2),
            NormSelector::FourierOpnorm { grid } => {
                if !matches!(a.spec(), GroupSpec::Lattice { .. }) {
                    return Err(Error::Capability(format!("Fourier operator norm is not available on {}", a.spec())));
                }
                if a.is_zero() {
                    return Ok(0.0);
                }
                Ok(fourier_opnorm_lattice(a, grid)?.value)
            }
        }
    }

    /// Entrywise-summed matrix norm.
    pub fn evaluate_matrix(&self, m: &MatrixAlgElement) -> Result<f64> {
        m.summed_norm(|e| self.evaluate(e))
    }
}

/// Relative tolerance of the control inequality.
pub const CONTROL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlRow {
    pub index: usize,
    /// `||a||_B`.
    pub lhs: f64,
    /// `C w(supp a) ||a||_A`.
    pub rhs: f64,
    pub omega: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlReport {
    pub norm_a: NormSelector,
    pub norm_b: NormSelector,
    pub constant: f64,
    pub weight: Weight,
    pub rows: Vec<ControlRow>,
    /// Indices of the failing samples.
    pub violations: Vec<usize>,
}

impl ControlReport {
    fn from_rows(
        norm_a: NormSelector,
        norm_b: NormSelector,
        constant: f64,
        weight: &Weight,
        rows: Vec<ControlRow>,
    ) -> Self {
        let violations = rows.iter().filter(|r| !r.passed).map(|r| r.index).collect();
        ControlReport { norm_a, norm_b, constant, weight: weight.clone(), rows, violations }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per sample: `index,lhs,rhs,omega,margin,passed`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Parse(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn row(index: usize, lhs: f64, norm_a: f64, omega: f64, constant: f64) -> ControlRow {
    let rhs = constant * omega * norm_a;
    ControlRow { index, lhs, rhs, omega, margin: rhs - lhs, passed: lhs <= rhs * (1.0 + CONTROL_TOL) }
}

fn check_constant(constant: f64) -> Result<()> {
    if constant.is_finite() && constant > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("control constant must be positive, got {constant}")))
    }
}

/// Checks `||a||_B <= C w(supp a) ||a||_A` on every sample.
pub fn control_check(
    samples: &[AlgElement],
    norm_a: NormSelector,
    norm_b: NormSelector,
    constant: f64,
    w: &Weight,
) -> Result<ControlReport> {
    check_constant(constant)?;
    let rows = samples
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            if *a.spec() != w.spec {
                return Err(Error::Structural(format!("sample {i} is over {}, weight over {}", a.spec(), w.spec)));
            }
            let omega = if a.is_zero() { 1.0 } else { w.evaluate(a.support())? };
            Ok(row(i, norm_b.evaluate(a)?, norm_a.evaluate(a)?, omega, constant))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ControlReport::from_rows(norm_a, norm_b, constant, w, rows))
}

/// Matrix analogue with entrywise-summed norms and the union support.
pub fn matrix_control_check(
    samples: &[MatrixAlgElement],
    norm_a: NormSelector,
    norm_b: NormSelector,
    constant: f64,
    w: &Weight,
) -> Result<ControlReport> {
    check_constant(constant)?;
    let rows = samples
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            if *m.spec() != w.spec {
                return Err(Error::Structural(format!("sample {i} is over {}, weight over {}", m.spec(), w.spec)));
            }
            let supp = m.support();
            let omega = if supp.is_empty() { 1.0 } else { w.evaluate(&supp)? };
            Ok(row(i, norm_b.evaluate_matrix(m)?, norm_a.evaluate_matrix(m)?, omega, constant))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ControlReport::from_rows(norm_a, norm_b, constant, w, rows))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportPowerRow {
    pub n: u32,
    /// `w(supp (m^n))`.
    pub omega_of_power: f64,
    /// `w((supp m)^n)`.
    pub omega_of_product_set: f64,
    pub passed: bool,
}

/// Largest power accepted by [`support_power_check`].
pub const SUPPORT_POWER_MAX: u32 = 4;

/// Checks `w(supp (m^n)) <= w((supp m)^n)` for `n = 1..=n_max`.
pub fn support_power_check(m: &MatrixAlgElement, w: &Weight, n_max: u32, cap: usize) -> Result<Vec<SupportPowerRow>> {
    if n_max > SUPPORT_POWER_MAX {
        return Err(Error::Domain(format!("support powers are checked up to {SUPPORT_POWER_MAX}, got {n_max}")));
    }
    let base: Vec<GroupElement> = m.support().into_iter().collect();
    if base.is_empty() {
        return Err(Error::Domain("support power check of the zero matrix".into()));
    }
    let mut product: HashSet<GroupElement> = base.iter().cloned().collect();
    let mut power = m.clone();
    let mut out = Vec::new();
    for n in 1..=n_max {
        if n > 1 {
            power = power.multiply(m)?;
            let mut next = HashSet::new();
            for g in &product {
                for h in &base {
                    next.insert(w.spec.multiply(g, h)?);
                    if next.len() > cap {
                        return Err(Error::Resource(format!("product set exceeded cap {cap}")));
                    }
                }
            }
            product = next;
        }
        let supp = power.support();
        let omega_of_power = if supp.is_empty() { 1.0 } else { w.evaluate(&supp)? };
        let omega_of_product_set = w.evaluate(&product)?;
        let passed = omega_of_power <= omega_of_product_set * (1.0 + CONTROL_TOL);
        out.push(SupportPowerRow { n, omega_of_power, omega_of_product_set, passed });
    }
    Ok(out)
}
