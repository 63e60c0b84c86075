//! Eigenvalue-counting K-theory of the complex numbers relative to a region.
//!
//! A matrix with spectrum in `Omega` is classified, up to eventual homotopy,
//! by how many eigenvalues fall in each component of `Omega` other than the
//! one containing `0`.

use std::collections::VecDeque;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holocalc::{default_margin, BBox, RegionSet, SquareMatrix};

/// Default number of grid cells along the longer side of the box.
pub const DEFAULT_RESOLUTION: usize = 256;
/// Most grid nodes a component analysis may use.
pub const MAX_GRID_NODES: usize = 1 << 22;
/// Grid spacing is refined until this many cells fit across the smallest feature.
const CELLS_PER_FEATURE: f64 = 4.0;
const OUTSIDE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    /// Grid node farthest from every primitive boundary.
    #[serde(with = "crate::holocalc::pair")]
    pub representative: Complex64,
    pub nodes: usize,
    /// Reaches the edge of the sampled box.
    pub touches_bbox: bool,
}

#[derive(Clone, Debug)]
struct Grid {
    i0: i64,
    j0: i64,
    nx: usize,
    ny: usize,
    h: f64,
    labels: Vec<u32>,
}

impl Grid {
    fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new((self.i0 + i as i64) as f64 * self.h, (self.j0 + j as i64) as f64 * self.h)
    }

    fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[j * self.nx + i]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaComponents {
    pub region: RegionSet,
    pub bbox: BBox,
    /// Grid spacing used for the labeling.
    pub resolution: f64,
    pub components: Vec<Component>,
    pub base_index: usize,
    pub k: usize,
    #[serde(skip)]
    grid: Grid,
}

/// Connected components of `omega` by flood fill on a grid through `0`.
///
/// Neighbouring nodes are joined only when the segment between them lies in
/// `omega`, so thin gaps and removed lines never merge components. The box
/// covers `bbox`, `0` and every bounded feature of the primitives, enlarged
/// by half; beyond it the region is a union of axis-parallel strips. The
/// spacing starts at the longer side over `resolution` and halves until the
/// smallest declared feature spans four cells.
pub fn analyze_components(omega: &RegionSet, bbox: Option<BBox>, resolution: usize) -> Result<OmegaComponents> {
    let zero = Complex64::new(0.0, 0.0);
    if !omega.contains_zero() {
        return Err(Error::Domain("0 is not in the region".into()));
    }
    if resolution < 2 {
        return Err(Error::Domain(format!("resolution must be at least 2, got {resolution}")));
    }
    let mut cover = BBox::around(&[zero]).expect("one point");
    if let Some(b) = omega.feature_box() {
        cover = cover.union(&b);
    }
    if let Some(b) = bbox {
        cover = cover.union(&b);
    }
    let cover = cover.enlarged(0.5);
    let extent = (cover.re[1] - cover.re[0]).max(cover.im[1] - cover.im[0]);
    let mut h = extent / resolution as f64;
    if let Some(f) = omega.feature_size() {
        while h * CELLS_PER_FEATURE > f {
            h /= 2.0;
        }
    }
    let i0 = (cover.re[0] / h).floor() as i64;
    let j0 = (cover.im[0] / h).floor() as i64;
    let nx = ((cover.re[1] / h).ceil() as i64 - i0 + 1) as usize;
    let ny = ((cover.im[1] / h).ceil() as i64 - j0 + 1) as usize;
    if nx.checked_mul(ny).is_none_or(|p| p > MAX_GRID_NODES) {
        return Err(Error::Resolution(format!(
            "spacing {h:.3e} needs a {nx}x{ny} grid, more than {MAX_GRID_NODES} nodes"
        )));
    }

    let mut grid = Grid { i0, j0, nx, ny, h, labels: vec![OUTSIDE; nx * ny] };
    let inside: Vec<bool> = (0..nx * ny).map(|p| omega.contains(grid.point(p % nx, p / nx))).collect();
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..nx * ny {
        if !inside[start] || grid.labels[start] != OUTSIDE {
            continue;
        }
        let label = sizes.len() as u32;
        grid.labels[start] = label;
        queue.push_back(start);
        let mut count = 0usize;
        while let Some(p) = queue.pop_front() {
            count += 1;
            let (i, j) = (p % nx, p / nx);
            let here = grid.point(i, j);
            let mut visit = |q: usize, qi: usize, qj: usize| {
                if inside[q] && grid.labels[q] == OUTSIDE && omega.contains_segment(here, grid.point(qi, qj)) {
                    grid.labels[q] = label;
                    queue.push_back(q);
                }
            };
            if i > 0 {
                visit(p - 1, i - 1, j);
            }
            if i + 1 < nx {
                visit(p + 1, i + 1, j);
            }
            if j > 0 {
                visit(p - nx, i, j - 1);
            }
            if j + 1 < ny {
                visit(p + nx, i, j + 1);
            }
        }
        sizes.push(count);
    }

    let origin = ((-j0) as usize) * nx + (-i0) as usize;
    let base = grid.labels[origin];
    if base == OUTSIDE {
        return Err(Error::Resolution("the grid node at 0 is not in the region".into()));
    }
    // base component first, the rest in scan order
    let mut order: Vec<u32> = vec![base];
    order.extend((0..sizes.len() as u32).filter(|l| *l != base));
    let mut relabel = vec![0u32; sizes.len()];
    for (new, old) in order.iter().enumerate() {
        relabel[*old as usize] = new as u32;
    }
    for l in grid.labels.iter_mut().filter(|l| **l != OUTSIDE) {
        *l = relabel[*l as usize];
    }

    let mut components: Vec<Component> = order
        .iter()
        .map(|old| Component { representative: zero, nodes: sizes[*old as usize], touches_bbox: false })
        .collect();
    let mut depth = vec![f64::NEG_INFINITY; components.len()];
    for j in 0..ny {
        for i in 0..nx {
            let l = grid.label(i, j);
            if l == OUTSIDE {
                continue;
            }
            let c = &mut components[l as usize];
            if i == 0 || j == 0 || i + 1 == nx || j + 1 == ny {
                c.touches_bbox = true;
            }
            let z = grid.point(i, j);
            let d = omega.boundary_distance(z);
            if d > depth[l as usize] {
                depth[l as usize] = d;
                c.representative = z;
            }
        }
    }
    let k = components.len() - 1;
    Ok(OmegaComponents { region: omega.clone(), bbox: cover, resolution: h, components, base_index: 0, k, grid })
}

impl OmegaComponents {
    /// Index of the component containing `z`.
    ///
    /// Points outside the box are first moved straight onto it; the segment
    /// crosses no feature, since all of them lie inside.
    pub fn classify(&self, z: Complex64) -> Result<usize> {
        if !self.region.contains_with_margin(z, default_margin(z)) {
            return Err(Error::Membership(format!("{z} is not inside the region with margin")));
        }
        let g = &self.grid;
        let lo = g.point(0, 0);
        let hi = g.point(g.nx - 1, g.ny - 1);
        let p = Complex64::new(z.re.clamp(lo.re, hi.re), z.im.clamp(lo.im, hi.im));
        if p != z && !self.region.contains_segment(z, p) {
            return Err(Error::Resolution(format!("cannot reach the sampled box from {z}")));
        }
        let fi = ((p.re - lo.re) / g.h).floor() as i64;
        let fj = ((p.im - lo.im) / g.h).floor() as i64;
        let mut best: Option<(f64, u32)> = None;
        for ring in 0..=2i64 {
            for di in -ring..=ring + 1 {
                for dj in -ring..=ring + 1 {
                    let (i, j) = (fi + di, fj + dj);
                    if i < 0 || j < 0 || i >= g.nx as i64 || j >= g.ny as i64 {
                        continue;
                    }
                    let l = g.label(i as usize, j as usize);
                    let q = g.point(i as usize, j as usize);
                    let d = (q - p).norm();
                    if l != OUTSIDE && best.is_none_or(|(bd, _)| d < bd) && self.region.contains_segment(p, q) {
                        best = Some((d, l));
                    }
                }
            }
            if let Some((_, l)) = best {
                return Ok(l as usize);
            }
        }
        Err(Error::Resolution(format!("no grid node of the region is visible from {z}")))
    }
}

/// `(#_1, ..., #_k)`: eigenvalues in each non-base component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    pub counts: Vec<u64>,
}

impl CountVector {
    pub fn zero(k: usize) -> Self {
        CountVector { counts: vec![0; k] }
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }
}

pub fn component_counts(m: &SquareMatrix, oc: &OmegaComponents) -> Result<CountVector> {
    let mut counts = vec![0u64; oc.components.len()];
    for z in m.eigenvalues()? {
        counts[oc.classify(z)?] += 1;
    }
    counts.remove(oc.base_index);
    Ok(CountVector { counts })
}

/// Counts for many matrices, in parallel.
pub fn component_counts_batch(ms: &[SquareMatrix], oc: &OmegaComponents) -> Vec<Result<CountVector>> {
    ms.par_iter().map(|m| component_counts(m, oc)).collect()
}

pub fn v_add(c1: &CountVector, c2: &CountVector) -> Result<CountVector> {
    if c1.k() != c2.k() {
        return Err(Error::Structural(format!("count vectors of lengths {} and {}", c1.k(), c2.k())));
    }
    Ok(CountVector { counts: c1.counts.iter().zip(&c2.counts).map(|(a, b)| a + b).collect() })
}

/// Rank of `K_Omega(C) = Z^k`.
pub fn k_group_rank(oc: &OmegaComponents) -> usize {
    oc.k
}

/// The class `[p] - [q]` in `Z^k`.
pub fn k_class(p: &SquareMatrix, q: &SquareMatrix, oc: &OmegaComponents) -> Result<Vec<i64>> {
    let (a, b) = (component_counts(p, oc)?, component_counts(q, oc)?);
    Ok(a.counts.iter().zip(&b.counts).map(|(x, y)| *x as i64 - *y as i64).collect())
}

/// `diag(lambda_1 repeated #_1 times, ..., lambda_k repeated #_k times, 0, ...)`
/// of the size of `m`.
pub fn normal_form(m: &SquareMatrix, oc: &OmegaComponents, basepoints: &[Complex64]) -> Result<SquareMatrix> {
    if basepoints.len() != oc.k {
        return Err(Error::Structural(format!("{} basepoints for {} components", basepoints.len(), oc.k)));
    }
    let non_base: Vec<usize> = (0..oc.components.len()).filter(|i| *i != oc.base_index).collect();
    for (b, want) in basepoints.iter().zip(&non_base) {
        if oc.classify(*b)? != *want {
            return Err(Error::Domain(format!("basepoint {b} is not in component {want}")));
        }
    }
    let counts = component_counts(m, oc)?;
    let mut diag = Vec::with_capacity(m.size());
    for (b, c) in basepoints.iter().zip(&counts.counts) {
        diag.extend(std::iter::repeat_n(*b, *c as usize));
    }
    diag.resize(m.size(), Complex64::new(0.0, 0.0));
    SquareMatrix::diagonal(&diag)
}

/// Representatives of the non-base components, usable as basepoints.
pub fn default_basepoints(oc: &OmegaComponents) -> Vec<Complex64> {
    (0..oc.components.len()).filter(|i| *i != oc.base_index).map(|i| oc.components[i].representative).collect()
}

/// Same class up to eventual homotopy; sizes may differ, since padding with
/// zero blocks leaves the counts unchanged.
pub fn same_class(m1: &SquareMatrix, m2: &SquareMatrix, oc: &OmegaComponents) -> Result<bool> {
    Ok(component_counts(m1, oc)? == component_counts(m2, oc)?)
}
