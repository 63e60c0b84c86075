//! Stable ranks of `C(Sigma)` for the computable families of compact spaces,
//! with left-generating tuples over `C` and `M_m(C)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holocalc::SquareMatrix;

/// Singular values below this times the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Point,
    Torus {
        d: u32,
    },
    Sphere {
        d: u32,
    },
    Cube {
        k: u32,
    },
    /// Finite CW-complex with declared facts `H^dim != 0` and `H^(dim-1) != 0`.
    FiniteCw {
        dim: u32,
        top_cohom_nonzero: bool,
        codim1_cohom_nonzero: bool,
    },
}

impl SpaceDescriptor {
    pub fn dim(&self) -> u32 {
        match self {
            SpaceDescriptor::Point => 0,
            SpaceDescriptor::Torus { d } | SpaceDescriptor::Sphere { d } => *d,
            SpaceDescriptor::Cube { k } => *k,
            SpaceDescriptor::FiniteCw { dim, .. } => *dim,
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDescriptor::Point => write!(f, "point"),
            SpaceDescriptor::Torus { d } => write!(f, "torus:{d}"),
            SpaceDescriptor::Sphere { d } => write!(f, "sphere:{d}"),
            SpaceDescriptor::Cube { k } => write!(f, "cube:{k}"),
            SpaceDescriptor::FiniteCw { dim, top_cohom_nonzero, codim1_cohom_nonzero } => {
                write!(f, "cw:{dim}:{}:{}", *top_cohom_nonzero as u8, *codim1_cohom_nonzero as u8)
            }
        }
    }
}

/// `point`, `torus:d`, `sphere:d`, `cube:k`, or `cw:dim:top:codim1` with
/// the last two fields `0` or `1`.
impl FromStr for SpaceDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad number {t:?} in space {s:?}")));
        let flag = |t: &str| match t {
            "0" | "false" => Ok(false),
            "1" | "true" => Ok(true),
            _ => Err(Error::Parse(format!("bad flag {t:?} in space {s:?}"))),
        };
        match parts.as_slice() {
            ["point"] => Ok(SpaceDescriptor::Point),
            ["torus", d] => Ok(SpaceDescriptor::Torus { d: num(d)? }),
            ["sphere", d] => Ok(SpaceDescriptor::Sphere { d: num(d)? }),
            ["cube", k] => Ok(SpaceDescriptor::Cube { k: num(k)? }),
            ["cw", dim, top, codim1] => Ok(SpaceDescriptor::FiniteCw {
                dim: num(dim)?,
                top_cohom_nonzero: flag(top)?,
                codim1_cohom_nonzero: flag(codim1)?,
            }),
            _ => Err(Error::Parse(format!("unknown space {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExactFormula,
    UpperBoundOnly,
}

/// A rank that is either known exactly or only bounded above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub value: u64,
    pub provenance: Provenance,
}

impl RankEntry {
    fn exact(value: u64) -> Self {
        RankEntry { value, provenance: Provenance::ExactFormula }
    }

    fn bound(value: u64) -> Self {
        RankEntry { value, provenance: Provenance::UpperBoundOnly }
    }

    pub fn is_exact(&self) -> bool {
        self.provenance == Provenance::ExactFormula
    }

    fn shifted(self, by: i64) -> Self {
        RankEntry { value: (self.value as i64 + by).max(0) as u64, ..self }
    }
}

/// `ceil((dim + k) / 2) + 1`.
pub fn csr_upper_bound(dim: u32, k: u32) -> u64 {
    (dim as u64 + k as u64).div_ceil(2) + 1
}

/// `floor(dim / 2) + 1`.
pub fn tsr_commutative(dim: u32) -> u64 {
    dim as u64 / 2 + 1
}

/// `tsr + k + 1`, or `tsr + floor(k / 2) + 1` when the Rieffel estimate is assumed.
pub fn csr_tsr_bound(tsr: u64, k: u32, rieffel: bool) -> u64 {
    if rieffel {
        tsr + k as u64 / 2 + 1
    } else {
        tsr + k as u64 + 1
    }
}

/// `csr_k(C(Sigma))`, exact where a closed form is known.
pub fn csr_k_formula(space: &SpaceDescriptor, k: u32) -> RankEntry {
    let bound = csr_upper_bound(space.dim(), k);
    match *space {
        SpaceDescriptor::Point | SpaceDescriptor::Cube { .. } => RankEntry::exact(csr_upper_bound(0, k)),
        SpaceDescriptor::Torus { .. } => RankEntry::exact(bound),
        SpaceDescriptor::Sphere { d } if k == 0 && d == 2 => RankEntry::exact(1),
        SpaceDescriptor::Sphere { .. } => RankEntry::exact(bound),
        SpaceDescriptor::FiniteCw { dim, top_cohom_nonzero, codim1_cohom_nonzero } => {
            let sharp = if k >= 1 || dim % 2 == 1 { top_cohom_nonzero } else { dim >= 2 && codim1_cohom_nonzero };
            if sharp {
                RankEntry::exact(bound)
            } else {
                RankEntry::bound(bound)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HsrBounds {
    pub lower: u64,
    pub upper: u64,
    /// Whether the csr values feeding the bounds are exact.
    pub provenance: Provenance,
}

/// `hsr_k <= csr_{k+1} - 1`, and `hsr_k >= csr_k - 1` whenever that exceeds
/// `csr - 1`, from `csr_k - 1 <= max(hsr_k, csr - 1)`.
pub fn hsr_bounds(space: &SpaceDescriptor, k: u32) -> HsrBounds {
    let next = csr_k_formula(space, k + 1);
    let here = csr_k_formula(space, k);
    let csr0 = csr_k_formula(space, 0);
    let upper = next.value - 1;
    // csr_k is bounded below only when exact; csr_0 is always bounded above
    let lower = if here.is_exact() && here.value > csr0.value { here.value - 1 } else { 0 };
    let provenance =
        if next.is_exact() && here.is_exact() { Provenance::ExactFormula } else { Provenance::UpperBoundOnly };
    HsrBounds { lower, upper, provenance }
}

/// Matrix sizes from which `K_1` and `K_0` are read off `GL_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityThresholds {
    /// `K_1 = pi_0(GL_n)` for `n >= csr_1 - 1`.
    pub k1: RankEntry,
    /// `K_1 = pi_0(GL_n)` and `K_0 = pi_1(GL_n)` for `n >= csr_2 - 1`.
    pub k0: RankEntry,
    pub tsr: u64,
    /// `tsr + 1`.
    pub k1_from_tsr: u64,
    /// `tsr + 2`.
    pub k0_from_tsr: u64,
    /// `tsr`, assuming the Rieffel estimate.
    pub k1_rieffel: u64,
    /// `tsr + 1`, assuming the Rieffel estimate.
    pub k0_rieffel: u64,
}

pub fn k_stability_thresholds(space: &SpaceDescriptor) -> StabilityThresholds {
    let tsr = tsr_commutative(space.dim());
    StabilityThresholds {
        k1: csr_k_formula(space, 1).shifted(-1),
        k0: csr_k_formula(space, 2).shifted(-1),
        tsr,
        k1_from_tsr: tsr + 1,
        k0_from_tsr: tsr + 2,
        k1_rieffel: tsr,
        k0_rieffel: tsr + 1,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub space: String,
    pub k: u32,
    pub csr: u64,
    pub provenance: Provenance,
    pub upper_bound: u64,
    pub hsr_lower: u64,
    pub hsr_upper: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub space: SpaceDescriptor,
    pub tsr: u64,
    pub rows: Vec<RankRow>,
    pub thresholds: StabilityThresholds,
}

pub fn rank_report(space: &SpaceDescriptor, ks: impl IntoIterator<Item = u32>) -> RankReport {
    let rows = ks
        .into_iter()
        .map(|k| {
            let csr = csr_k_formula(space, k);
            let hsr = hsr_bounds(space, k);
            RankRow {
                space: space.to_string(),
                k,
                csr: csr.value,
                provenance: csr.provenance,
                upper_bound: csr_upper_bound(space.dim(), k),
                hsr_lower: hsr.lower,
                hsr_upper: hsr.upper,
            }
        })
        .collect();
    RankReport { space: *space, tsr: tsr_commutative(space.dim()), rows, thresholds: k_stability_thresholds(space) }
}

/// Rows as CSV with a header line.
pub fn rows_to_csv(rows: &[RankRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Structural(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Structural(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `(a_1, ..., a_n)` in `Lg_n(M_m(C))`: the stacked `nm x m` matrix has rank `m`.
pub fn lg_membership(tuple: &[SquareMatrix], m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::Structural("matrix size must be positive".into()));
    }
    if let Some(bad) = tuple.iter().find(|a| a.size() != m) {
        return Err(Error::Structural(format!("{0}x{0} entry in a tuple over M_{m}", bad.size())));
    }
    if tuple.is_empty() {
        return Ok(false);
    }
    let stack = DMatrix::from_fn(tuple.len() * m, m, |r, c| tuple[r / m].entry(r % m, c));
    let s = stack.svd(false, false).singular_values;
    let top = s.max();
    Ok(top > 0.0 && s.min() > RANK_THRESHOLD * top)
}

/// `(a_1, ..., a_n)` in `Lg_n(C) = C^n \ {0}`.
pub fn lg_membership_scalar(tuple: &[Complex64]) -> bool {
    tuple.iter().any(|z| *z != Complex64::new(0.0, 0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BassReduction {
    #[serde(with = "crate::holocalc::pairs")]
    pub x: Vec<Complex64>,
    #[serde(with = "crate::holocalc::pairs")]
    pub reduced: Vec<Complex64>,
}

/// `x` with `(a_1 + x_1 a_{n+1}, ..., a_n + x_n a_{n+1})` in `Lg_n(C)`.
pub fn bass_reduce(tuple: &[Complex64]) -> Result<BassReduction> {
    let Some((last, head)) = tuple.split_last() else {
        return Err(Error::Domain("empty tuple".into()));
    };
    if head.is_empty() {
        return Err(Error::Domain("Bass reduction needs at least two entries".into()));
    }
    if !lg_membership_scalar(tuple) {
        return Err(Error::Domain("tuple is not left-generating".into()));
    }
    let mut x = vec![Complex64::new(0.0, 0.0); head.len()];
    if !lg_membership_scalar(head) {
        x[0] = Complex64::new(1.0, 0.0);
    }
    let reduced = head.iter().zip(&x).map(|(a, xi)| a + xi * last).collect();
    Ok(BassReduction { x, reduced })
}
