//! Regions of the plane as expression trees over simple primitives.
//!
//! JSON forms:
//! `{"disk": {"center": [re, im], "radius": r}}`,
//! `{"half_plane": {"axis": "re", "threshold": t, "side": "greater"}}`,
//! `{"rect": {"re": [a, b], "im": [c, d]}}`, `"full_plane"`,
//! `{"point": [re, im]}`, `{"point_complement": [re, im]}`,
//! `{"line_re": c}`, `{"line_complement_re": c}`, `{"slit_complement": x}` for
//! `C \\ (-inf, x]`, and
//! `{"op": "union" | "intersection", "of": [...]}`, `{"op": "complement", "of": {...}}`.
//! Disks, half-planes and rectangles are open.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{pair, SquareMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Re,
    Im,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Greater,
    Less,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    Disk {
        #[serde(with = "pair")]
        center: Complex64,
        radius: f64,
    },
    HalfPlane {
        axis: Axis,
        threshold: f64,
        side: Side,
    },
    Rect {
        re: [f64; 2],
        im: [f64; 2],
    },
    FullPlane,
    Point(#[serde(with = "pair")] Complex64),
    PointComplement(#[serde(with = "pair")] Complex64),
    LineRe(f64),
    LineComplementRe(f64),
    /// `C \ (-inf, x]` on the real axis.
    SlitComplement(f64),
}

fn coord(z: Complex64, axis: Axis) -> f64 {
    match axis {
        Axis::Re => z.re,
        Axis::Im => z.im,
    }
}

impl Primitive {
    fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let ok = match self {
            Primitive::Disk { center, radius } => finite(&[center.re, center.im, *radius]) && *radius > 0.0,
            Primitive::HalfPlane { threshold, .. } => threshold.is_finite(),
            Primitive::Rect { re, im } => finite(re) && finite(im) && re[0] < re[1] && im[0] < im[1],
            Primitive::FullPlane => true,
            Primitive::Point(p) | Primitive::PointComplement(p) => finite(&[p.re, p.im]),
            Primitive::LineRe(c) | Primitive::LineComplementRe(c) | Primitive::SlitComplement(c) => c.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!("malformed region primitive {self:?}")))
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Primitive::Disk { center, radius } => (z - center).norm() < *radius,
            Primitive::HalfPlane { axis, threshold, side } => match side {
                Side::Greater => coord(z, *axis) > *threshold,
                Side::Less => coord(z, *axis) < *threshold,
            },
            Primitive::Rect { re, im } => re[0] < z.re && z.re < re[1] && im[0] < z.im && z.im < im[1],
            Primitive::FullPlane => true,
            Primitive::Point(p) => z == *p,
            Primitive::PointComplement(p) => z != *p,
            Primitive::LineRe(c) => z.re == *c,
            Primitive::LineComplementRe(c) => z.re != *c,
            Primitive::SlitComplement(x) => z.im != 0.0 || z.re > *x,
        }
    }

    /// Distance from `z` to the boundary of the primitive.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match self {
            Primitive::Disk { center, radius } => ((z - center).norm() - radius).abs(),
            Primitive::HalfPlane { axis, threshold, .. } => (coord(z, *axis) - threshold).abs(),
            Primitive::Rect { re, im } => {
                let dx = (re[0] - z.re).max(z.re - re[1]);
                let dy = (im[0] - z.im).max(z.im - im[1]);
                if dx <= 0.0 && dy <= 0.0 {
                    (-dx).min(-dy)
                } else {
                    dx.max(0.0).hypot(dy.max(0.0))
                }
            }
            Primitive::FullPlane => f64::INFINITY,
            Primitive::Point(p) | Primitive::PointComplement(p) => (z - p).norm(),
            Primitive::LineRe(c) | Primitive::LineComplementRe(c) => (z.re - c).abs(),
            Primitive::SlitComplement(x) => {
                if z.re >= *x {
                    (z - x).norm()
                } else {
                    z.im.abs()
                }
            }
        }
    }

    /// Parameters `t` in `(0, 1)` where `a + t (b - a)` meets the boundary.
    fn crossings(&self, a: Complex64, b: Complex64, out: &mut Vec<f64>) {
        let d = b - a;
        let mut line = |x0: f64, dx: f64, c: f64| {
            if dx != 0.0 {
                out.push((c - x0) / dx);
            }
        };
        match self {
            Primitive::Disk { center, radius } => {
                // |a - center + t d|^2 = radius^2
                let p = a - center;
                let (qa, qb, qc) = (d.norm_sqr(), 2.0 * (p.re * d.re + p.im * d.im), p.norm_sqr() - radius * radius);
                let disc = qb * qb - 4.0 * qa * qc;
                if qa > 0.0 && disc >= 0.0 {
                    let s = disc.sqrt();
                    out.push((-qb - s) / (2.0 * qa));
                    out.push((-qb + s) / (2.0 * qa));
                }
            }
            Primitive::HalfPlane { axis, threshold, .. } => line(coord(a, *axis), coord(d, *axis), *threshold),
            Primitive::Rect { re, im } => {
                line(a.re, d.re, re[0]);
                line(a.re, d.re, re[1]);
                line(a.im, d.im, im[0]);
                line(a.im, d.im, im[1]);
            }
            Primitive::FullPlane => {}
            Primitive::Point(p) | Primitive::PointComplement(p) => {
                let qa = d.norm_sqr();
                if qa > 0.0 {
                    let t = ((p - a) * d.conj()).re / qa;
                    if (a + d * t - p).norm() <= 4.0 * f64::EPSILON * (1.0 + p.norm()) {
                        out.push(t);
                    }
                }
            }
            Primitive::LineRe(c) | Primitive::LineComplementRe(c) => line(a.re, d.re, *c),
            Primitive::SlitComplement(x) => {
                line(a.im, d.im, 0.0);
                line(a.re, d.re, *x);
            }
        }
    }

    /// Box covering every bounded feature of the primitive.
    fn features(&self, bbox: &mut Option<BBox>) {
        let mut add = |z: Complex64| match bbox {
            Some(b) => b.include(z),
            None => *bbox = Some(BBox { re: [z.re, z.re], im: [z.im, z.im] }),
        };
        match self {
            Primitive::Disk { center, radius } => {
                add(center - Complex64::new(*radius, *radius));
                add(center + Complex64::new(*radius, *radius));
            }
            Primitive::HalfPlane { axis: Axis::Re, threshold, .. } => add(Complex64::new(*threshold, 0.0)),
            Primitive::HalfPlane { axis: Axis::Im, threshold, .. } => add(Complex64::new(0.0, *threshold)),
            Primitive::Rect { re, im } => {
                add(Complex64::new(re[0], im[0]));
                add(Complex64::new(re[1], im[1]));
            }
            Primitive::FullPlane => {}
            Primitive::Point(p) | Primitive::PointComplement(p) => add(*p),
            Primitive::LineRe(c) | Primitive::LineComplementRe(c) | Primitive::SlitComplement(c) => {
                add(Complex64::new(*c, 0.0))
            }
        }
    }

    /// Smallest length scale the primitive carries, if any.
    fn feature_size(&self) -> Option<f64> {
        match self {
            Primitive::Disk { radius, .. } => Some(*radius),
            Primitive::Rect { re, im } => Some((re[1] - re[0]).min(im[1] - im[0])),
            _ => None,
        }
    }

    /// Position of an axis-parallel boundary line, if the primitive has one.
    fn line(&self) -> Option<(Axis, f64)> {
        match self {
            Primitive::HalfPlane { axis, threshold, .. } => Some((*axis, *threshold)),
            Primitive::LineRe(c) | Primitive::LineComplementRe(c) => Some((Axis::Re, *c)),
            _ => None,
        }
    }
}

/// Axis-parallel box `[re0, re1] x [im0, im1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

impl BBox {
    pub fn around(points: &[Complex64]) -> Option<BBox> {
        let mut it = points.iter();
        let first = it.next()?;
        let mut b = BBox { re: [first.re, first.re], im: [first.im, first.im] };
        it.for_each(|z| b.include(*z));
        Some(b)
    }

    pub fn include(&mut self, z: Complex64) {
        self.re = [self.re[0].min(z.re), self.re[1].max(z.re)];
        self.im = [self.im[0].min(z.im), self.im[1].max(z.im)];
    }

    pub fn union(&self, other: &BBox) -> BBox {
        let mut b = *self;
        b.include(Complex64::new(other.re[0], other.im[0]));
        b.include(Complex64::new(other.re[1], other.im[1]));
        b
    }

    /// Grows each side by `frac` of the larger extent (at least `frac`).
    pub fn enlarged(&self, frac: f64) -> BBox {
        let ext = (self.re[1] - self.re[0]).max(self.im[1] - self.im[0]).max(1.0);
        let pad = frac * ext;
        BBox { re: [self.re[0] - pad, self.re[1] + pad], im: [self.im[0] - pad, self.im[1] + pad] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Repr", into = "Repr")]
pub enum RegionSet {
    Primitive(Primitive),
    Union(Vec<RegionSet>),
    Intersection(Vec<RegionSet>),
    Complement(Box<RegionSet>),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum OpName {
    Union,
    Intersection,
    Complement,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Operands {
    Many(Vec<RegionSet>),
    One(Box<RegionSet>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Op { op: OpName, of: Operands },
    Primitive(Primitive),
}

impl TryFrom<Repr> for RegionSet {
    type Error = Error;

    fn try_from(r: Repr) -> Result<Self> {
        Ok(match r {
            Repr::Primitive(p) => {
                p.validate()?;
                RegionSet::Primitive(p)
            }
            Repr::Op { op: OpName::Complement, of: Operands::One(x) } => RegionSet::Complement(x),
            Repr::Op { op: OpName::Union, of: Operands::Many(xs) } => RegionSet::Union(xs),
            Repr::Op { op: OpName::Intersection, of: Operands::Many(xs) } => RegionSet::Intersection(xs),
            Repr::Op { .. } => {
                return Err(Error::Parse("complement takes one region, union and intersection a list".into()))
            }
        })
    }
}

impl From<RegionSet> for Repr {
    fn from(r: RegionSet) -> Repr {
        match r {
            RegionSet::Primitive(p) => Repr::Primitive(p),
            RegionSet::Union(xs) => Repr::Op { op: OpName::Union, of: Operands::Many(xs) },
            RegionSet::Intersection(xs) => Repr::Op { op: OpName::Intersection, of: Operands::Many(xs) },
            RegionSet::Complement(x) => Repr::Op { op: OpName::Complement, of: Operands::One(x) },
        }
    }
}

impl RegionSet {
    pub fn full_plane() -> Self {
        RegionSet::Primitive(Primitive::FullPlane)
    }

    /// `C \ {Re = c}`.
    pub fn line_complement_re(c: f64) -> Self {
        RegionSet::Primitive(Primitive::LineComplementRe(c))
    }

    /// `C \ {p}`.
    pub fn point_complement(p: Complex64) -> Self {
        RegionSet::Primitive(Primitive::PointComplement(p))
    }

    pub fn disk(center: Complex64, radius: f64) -> Self {
        RegionSet::Primitive(Primitive::Disk { center, radius })
    }

    pub fn half_plane(axis: Axis, threshold: f64, side: Side) -> Self {
        RegionSet::Primitive(Primitive::HalfPlane { axis, threshold, side })
    }

    /// `C \ {Re = 1/2}`.
    pub fn omega0() -> Self {
        Self::line_complement_re(0.5)
    }

    /// `C \ {-1}`.
    pub fn omega1() -> Self {
        Self::point_complement(Complex64::new(-1.0, 0.0))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("region file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("region serializes")
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            RegionSet::Primitive(p) => p.contains(z),
            RegionSet::Union(xs) => xs.iter().any(|x| x.contains(z)),
            RegionSet::Intersection(xs) => xs.iter().all(|x| x.contains(z)),
            RegionSet::Complement(x) => !x.contains(z),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(Complex64::new(0.0, 0.0))
    }

    pub fn primitives(&self) -> Vec<&Primitive> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a Primitive>) {
        match self {
            RegionSet::Primitive(p) => out.push(p),
            RegionSet::Union(xs) | RegionSet::Intersection(xs) => xs.iter().for_each(|x| x.collect(out)),
            RegionSet::Complement(x) => x.collect(out),
        }
    }

    /// Least distance from `z` to a primitive boundary. The boundary of the
    /// region lies inside the union of these, so any disk around `z` of
    /// smaller radius has constant membership.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.primitives().iter().map(|p| p.boundary_distance(z)).fold(f64::INFINITY, f64::min)
    }

    /// `z` in the region at distance `> margin` from every primitive boundary.
    pub fn contains_with_margin(&self, z: Complex64, margin: f64) -> bool {
        self.contains(z) && self.boundary_distance(z) > margin
    }

    /// Whether the closed segment `[a, b]` lies in the region.
    ///
    /// Membership is constant between consecutive boundary crossings, so
    /// the endpoints, the crossings and one point between each pair decide it.
    pub fn contains_segment(&self, a: Complex64, b: Complex64) -> bool {
        let mut ts = vec![0.0, 1.0];
        for p in self.primitives() {
            p.crossings(a, b, &mut ts);
        }
        ts.retain(|t| (0.0..=1.0).contains(t));
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let at = |t: f64| a + (b - a) * t;
        ts.iter().all(|t| self.contains(at(*t))) && ts.windows(2).all(|w| self.contains(at(0.5 * (w[0] + w[1]))))
    }

    /// Box around the bounded features of all primitives.
    pub fn feature_box(&self) -> Option<BBox> {
        let mut b = None;
        self.primitives().iter().for_each(|p| p.features(&mut b));
        b
    }

    /// Smallest feature the primitives declare: disk radii, rectangle sides
    /// and gaps between distinct parallel boundary lines.
    pub fn feature_size(&self) -> Option<f64> {
        let prims = self.primitives();
        let mut size = prims.iter().filter_map(|p| p.feature_size()).fold(f64::INFINITY, f64::min);
        for axis in [Axis::Re, Axis::Im] {
            let mut xs: Vec<f64> = prims.iter().filter_map(|p| p.line()).filter(|l| l.0 == axis).map(|l| l.1).collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            for w in xs.windows(2) {
                size = size.min(w[1] - w[0]);
            }
        }
        size.is_finite().then_some(size)
    }
}

/// Default membership margin at `z`.
pub fn default_margin(z: Complex64) -> f64 {
    1e-6 * (1.0 + z.norm())
}

/// Every eigenvalue of `m` lies in the region at distance `> margin` from the
/// primitive boundaries.
pub fn in_region(m: &SquareMatrix, omega: &RegionSet, margin: f64) -> Result<bool> {
    Ok(m.eigenvalues()?.iter().all(|z| omega.contains_with_margin(*z, margin)))
}
