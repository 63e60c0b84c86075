use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense complex square matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    m: DMatrix<Complex64>,
}

impl SquareMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Structural(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        Ok(SquareMatrix { m })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Structural(format!("row of length {} in a {n}x{n} matrix", bad.len())));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|x| Complex64::new(*x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        SquareMatrix { m: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        SquareMatrix { m: DMatrix::identity(n, n) }
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)))
    }

    pub fn real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::diagonal(&diag.iter().map(|x| Complex64::new(*x, 0.0)).collect::<Vec<_>>())
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.m
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::Structural(format!("sizes {} and {} differ", self.size(), other.size())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        Self::new(&self.m + &other.m)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        Self::new(&self.m - &other.m)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        Self::new(&self.m * &other.m)
    }

    pub fn scale(&self, c: Complex64) -> Result<Self> {
        Self::new(&self.m * c)
    }

    pub fn frobenius(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.size() == 0 {
            return 0.0;
        }
        self.m.clone().svd(false, false).singular_values.max()
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.size() == 0 {
            return Vec::new();
        }
        let mut s: Vec<f64> = self.m.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (p, q) = (self.size(), other.size());
        let mut m = DMatrix::zeros(p + q, p + q);
        m.view_mut((0, 0), (p, p)).copy_from(&self.m);
        m.view_mut((p, p), (q, q)).copy_from(&other.m);
        SquareMatrix { m }
    }

    /// `diag(self, 0_j)`.
    pub fn pad_zeros(&self, j: usize) -> Self {
        self.direct_sum(&Self::zeros(j))
    }

    /// `s self s^-1`.
    pub fn conjugate_by(&self, s: &Self) -> Result<Self> {
        self.same_size(s)?;
        let inv = s.m.clone().lu().try_inverse().ok_or_else(|| Error::Conditioning("singular similarity".into()))?;
        Self::new(&s.m * &self.m * inv)
    }

    /// Eigenvalues with multiplicity, from the complex Schur form, sorted by
    /// real then imaginary part.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let n = self.size();
        if n == 0 {
            return Ok(Vec::new());
        }
        if n > MAX_EIGEN_SIZE {
            return Err(Error::Resource(format!("eigenvalues of a {n}x{n} matrix exceed size {MAX_EIGEN_SIZE}")));
        }
        let schur = Schur::try_new(self.m.clone(), f64::EPSILON, 1000 * n.max(10))
            .ok_or_else(|| Error::Conditioning("Schur iteration did not converge".into()))?;
        let (_, t) = schur.unpack();
        let mut eigs: Vec<Complex64> = t.diagonal().iter().copied().collect();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(eigs)
    }

    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.size()).map(|i| (0..self.size()).map(|j| [self.m[(i, j)].re, self.m[(i, j)].im]).collect()).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }
}

/// Largest matrix accepted by the eigenvalue routine.
pub const MAX_EIGEN_SIZE: usize = 512;

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Entry>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        Entry::Pair([re, im]) => Complex64::new(re, im),
                        Entry::Real(re) => Complex64::new(re, 0.0),
                    })
                    .collect()
            })
            .collect();
        SquareMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// `(re, im)` pairs as two-element arrays.
pub(crate) mod pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Sequences of `(re, im)` pairs.
pub(crate) mod pairs {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(zs.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// Bottleneck distance between two multisets of equal size: the least `d`
/// admitting a perfect matching with every pair at distance `<= d`.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Structural(format!("multisets of sizes {} and {}", a.len(), b.len())));
    }
    let n = a.len();
    if n == 0 {
        return Ok(0.0);
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let mut cands: Vec<f64> = dist.iter().flatten().copied().collect();
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(cands[lo])
}

fn perfect_matching(dist: &[Vec<f64>], d: f64) -> bool {
    let n = dist.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(i: usize, dist: &[Vec<f64>], d: f64, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..dist.len() {
            if dist[i][j] <= d && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, dist, d, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    (0..n).all(|i| augment(i, dist, d, &mut vec![false; n], &mut owner))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_and_nilpotent() {
        let d = SquareMatrix::real_diagonal(&[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(d.eigenvalues().unwrap(), vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let n = SquareMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(n.eigenvalues().unwrap(), vec![c(0.0, 0.0); 2]);
    }

    #[test]
    fn similarity_recovers_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d: Vec<Complex64> = (0..6).map(|k| c(k as f64 - 2.5, 0.5 * k as f64)).collect();
        let s = DMatrix::from_fn(6, 6, |i, j| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) + if i == j { c(3.0, 0.0) } else { c(0.0, 0.0) }
        });
        let m = SquareMatrix::diagonal(&d).unwrap().conjugate_by(&SquareMatrix::new(s).unwrap()).unwrap();
        let eigs = m.eigenvalues().unwrap();
        assert!(multiset_distance(&eigs, &d).unwrap() < 1e-8);
    }

    #[test]
    fn direct_sum_spectrum_is_union() {
        let a = SquareMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(-1.0, 0.0)]]).unwrap();
        let b = SquareMatrix::real_diagonal(&[4.0]).unwrap();
        let mut union = a.eigenvalues().unwrap();
        union.extend(b.eigenvalues().unwrap());
        let d = multiset_distance(&a.direct_sum(&b).eigenvalues().unwrap(), &union).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let m = SquareMatrix::from_json("[[[1,0],[0,2]],[0.5,[-1,-1]]]").unwrap();
        assert_eq!(m.entry(1, 0), c(0.5, 0.0));
        assert_eq!(SquareMatrix::from_json(&m.to_json()).unwrap(), m);
        assert!(matches!(SquareMatrix::from_json("[[1,2]]"), Err(Error::Parse(_))));
    }

    #[test]
    fn bottleneck() {
        let a = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        let b = [c(1.0, 0.1), c(0.0, 0.0), c(0.9, 0.0)];
        assert!((multiset_distance(&a, &b).unwrap() - 0.1).abs() < 1e-15);
        assert!(multiset_distance(&a, &b[..2]).is_err());
    }
}
