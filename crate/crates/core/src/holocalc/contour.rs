use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::pair;
use super::region::RegionSet;
use crate::error::{Error, Result};

/// Eigenvalues closer than this times the scale share a circle.
pub const CLUSTER_GAP: f64 = 1e-2;
/// Eigenvalues this close to a region boundary are rejected.
pub const DEGENERACY_DISTANCE: f64 = 1e-12;
pub const DEFAULT_NODES: usize = 256;

/// Positively oriented circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    #[serde(with = "pair")]
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
    /// Indices of the enclosed eigenvalues.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub circles: Vec<Circle>,
    /// Winding number of the contour around each eigenvalue, in input order.
    pub winding: Vec<u32>,
}

/// Which eigenvalues the contour must enclose.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    All,
    Indices(Vec<usize>),
    Within(RegionSet),
}

impl Target {
    fn selects(&self, i: usize, z: Complex64) -> bool {
        match self {
            Target::All => true,
            Target::Indices(ix) => ix.contains(&i),
            Target::Within(r) => r.contains(z),
        }
    }
}

impl Contour {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.circles.iter_mut().for_each(|c| c.nodes = nodes);
        self
    }
}

/// Circles around the targeted eigenvalues, inside `omega`, with the
/// clustering scale taken from the eigenvalues themselves.
pub fn build_contour(eigs: &[Complex64], omega: &RegionSet, target: &Target) -> Result<Contour> {
    let scale = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    build_contour_scaled(eigs, omega, target, scale)
}

/// Single-linkage clusters at gap `CLUSTER_GAP * scale`; a circle around a
/// cluster of spread `rho` has radius `rho + (min(d_b - rho, d_o)) / 2`, with
/// `d_b` the distance from its center to the primitive boundaries and `d_o`
/// the gap to the nearest other cluster disk.
pub fn build_contour_scaled(eigs: &[Complex64], omega: &RegionSet, target: &Target, scale: f64) -> Result<Contour> {
    let n = eigs.len();
    if let Target::Indices(ix) = target {
        if let Some(bad) = ix.iter().find(|i| **i >= n) {
            return Err(Error::Structural(format!("target index {bad} out of {n} eigenvalues")));
        }
    }
    let targeted: Vec<bool> = eigs.iter().enumerate().map(|(i, z)| target.selects(i, *z)).collect();
    for (z, t) in eigs.iter().zip(&targeted) {
        if !t {
            continue;
        }
        if omega.boundary_distance(*z) <= DEGENERACY_DISTANCE {
            return Err(Error::GeometricDegeneracy(format!("eigenvalue {z} lies on a region boundary")));
        }
        if !omega.contains(*z) {
            return Err(Error::Membership(format!("eigenvalue {z} lies outside the region")));
        }
    }

    let gap = CLUSTER_GAP * scale;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= gap {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot[r]].push(i);
    }

    let disks: Vec<(Complex64, f64)> = clusters
        .iter()
        .map(|c| {
            let center = c.iter().map(|i| eigs[*i]).sum::<Complex64>() / c.len() as f64;
            let rho = c.iter().map(|i| (eigs[*i] - center).norm()).fold(0.0, f64::max);
            (center, rho)
        })
        .collect();

    let mut circles = Vec::new();
    for (k, members) in clusters.iter().enumerate() {
        let hit = members.iter().filter(|i| targeted[**i]).count();
        if hit == 0 {
            continue;
        }
        if hit < members.len() {
            return Err(Error::GeometricDegeneracy("a targeted eigenvalue clusters with an untargeted one".into()));
        }
        let (center, rho) = disks[k];
        let d_b = if omega.contains(center) { omega.boundary_distance(center) } else { 0.0 };
        let d_o = disks
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, (c, r))| (center - c).norm() - rho - r)
            .fold(f64::INFINITY, f64::min);
        let room = (d_b - rho).min(d_o);
        if room.is_nan() || room <= 0.0 {
            return Err(Error::GeometricDegeneracy(format!(
                "no circle around the cluster at {center} fits inside the region"
            )));
        }
        let radius = rho + 0.5 * if room.is_finite() { room } else { scale.max(1.0) };
        circles.push(Circle { center, radius, nodes: DEFAULT_NODES, members: members.clone() });
    }

    // two clusters that are each other's nearest neighbours get tangent circles
    for i in 0..circles.len() {
        for j in i + 1..circles.len() {
            let d = (circles[i].center - circles[j].center).norm();
            let excess = circles[i].radius + circles[j].radius - d;
            if excess >= 0.0 {
                let shrink = excess + 1e-9 * d;
                circles[i].radius -= 0.5 * shrink;
                circles[j].radius -= 0.5 * shrink;
            }
        }
    }

    let winding =
        eigs.iter().map(|z| circles.iter().filter(|c| (z - c.center).norm() < c.radius).count() as u32).collect();
    Ok(Contour { circles, winding })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn separated_by_the_line() {
        let eigs = [c(0.0, 0.0), c(1.0, 0.0)];
        let k = build_contour(&eigs, &RegionSet::omega0(), &Target::Indices(vec![1])).unwrap();
        assert_eq!(k.circles.len(), 1);
        let circ = &k.circles[0];
        assert!(circ.center.re - circ.radius > 0.5);
        assert_eq!(k.winding, vec![0, 1]);
    }

    #[test]
    fn unit_disk() {
        let k = build_contour(&[c(0.0, 0.0)], &RegionSet::disk(c(0.0, 0.0), 1.0), &Target::All).unwrap();
        assert!(k.circles[0].radius <= 0.5);
    }

    #[test]
    fn clusters_share_a_circle() {
        let eigs = [c(1.0, 0.0), c(1.0 + 1e-3, 0.0), c(-2.0, 0.0)];
        let k = build_contour(&eigs, &RegionSet::full_plane(), &Target::All).unwrap();
        assert_eq!(k.circles.len(), 2);
        assert_eq!(k.circles[0].members, vec![0, 1]);
        assert_eq!(k.winding, vec![1, 1, 1]);
        let (a, b) = (&k.circles[0], &k.circles[1]);
        assert!(a.radius + b.radius < (a.center - b.center).norm());
    }

    #[test]
    fn degenerate_inputs() {
        let o0 = RegionSet::omega0();
        assert!(matches!(build_contour(&[c(0.5, 0.0)], &o0, &Target::All), Err(Error::GeometricDegeneracy(_))));
        let eigs = [c(1.0, 0.0), c(1.0 + 1e-4, 0.0)];
        let r = build_contour(&eigs, &RegionSet::full_plane(), &Target::Indices(vec![0]));
        assert!(matches!(r, Err(Error::GeometricDegeneracy(_))));
        let r = build_contour(&[c(2.0, 0.0)], &RegionSet::disk(c(0.0, 0.0), 1.0), &Target::All);
        assert!(matches!(r, Err(Error::Membership(_))));
    }
}
