//! The closed library of holomorphic functions and their singular sets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{pair, pairs, SquareMatrix};
use super::region::{Primitive, RegionSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedFn {
    #[serde(with = "pair")]
    pub weight: Complex64,
    pub f: HoloFn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case")]
pub enum HoloFn {
    /// `sum c_k z^k`, coefficients from the constant term up.
    Poly {
        #[serde(with = "pairs")]
        coeffs: Vec<Complex64>,
    },
    Exp,
    /// Principal branch, cut along `(-inf, 0]`.
    Log,
    /// `0` on `Re < 1/2`, `1` on `Re > 1/2`.
    Chi,
    /// `num / den` with poles at the roots of `den`.
    Rational {
        #[serde(with = "pairs")]
        num: Vec<Complex64>,
        #[serde(with = "pairs")]
        den: Vec<Complex64>,
    },
    Sum {
        terms: Vec<WeightedFn>,
    },
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Roots of a polynomial as eigenvalues of its companion matrix.
fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    let Some(lead) = c.last().copied() else {
        return Err(Error::Domain("zero denominator".into()));
    };
    let deg = c.len() - 1;
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); deg]; deg];
    for i in 1..deg {
        rows[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[deg - 1] = -c[i] / lead;
    }
    SquareMatrix::from_rows(&rows)?.eigenvalues()
}

impl HoloFn {
    pub fn identity() -> Self {
        HoloFn::Poly { coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] }
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        HoloFn::Poly { coeffs }
    }

    /// `(1 - t) id + t chi`.
    pub fn chi_homotopy(t: f64) -> Self {
        HoloFn::Sum {
            terms: vec![
                WeightedFn { weight: Complex64::new(1.0 - t, 0.0), f: Self::identity() },
                WeightedFn { weight: Complex64::new(t, 0.0), f: HoloFn::Chi },
            ],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("function: {e}")))
    }

    /// Short names: `id`, `exp`, `log`, `chi`, `z^k`, or a JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "id" | "z" => Ok(Self::identity()),
            "exp" => Ok(HoloFn::Exp),
            "log" => Ok(HoloFn::Log),
            "chi" => Ok(HoloFn::Chi),
            _ if t.starts_with("z^") => {
                t[2..].parse::<usize>().map(Self::monomial).map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))
            }
            _ if t.starts_with('{') => Self::from_json(t),
            _ => Err(Error::Parse(format!("unknown function {t:?}"))),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            HoloFn::Poly { coeffs } => horner(coeffs, z),
            HoloFn::Exp => z.exp(),
            HoloFn::Log => z.ln(),
            HoloFn::Chi => Complex64::new(if z.re > 0.5 { 1.0 } else { 0.0 }, 0.0),
            HoloFn::Rational { num, den } => horner(num, z) / horner(den, z),
            HoloFn::Sum { terms } => terms.iter().map(|t| t.weight * t.f.eval(z)).sum(),
        }
    }

    /// Open set on which the function is holomorphic.
    pub fn domain(&self) -> Result<RegionSet> {
        Ok(match self {
            HoloFn::Poly { .. } | HoloFn::Exp => RegionSet::full_plane(),
            HoloFn::Log => RegionSet::Primitive(Primitive::SlitComplement(0.0)),
            HoloFn::Chi => RegionSet::omega0(),
            HoloFn::Rational { den, .. } => {
                RegionSet::Intersection(roots(den)?.into_iter().map(RegionSet::point_complement).collect())
            }
            HoloFn::Sum { terms } => {
                RegionSet::Intersection(terms.iter().map(|t| t.f.domain()).collect::<Result<_>>()?)
            }
        })
    }

    /// Fails unless the closed disk `|z - center| <= radius` avoids every singularity.
    pub fn check_disk(&self, center: Complex64, radius: f64) -> Result<()> {
        let dom = self.domain()?;
        if dom.contains(center) && dom.boundary_distance(center) > radius {
            return Ok(());
        }
        Err(Error::Analyticity(format!(
            "function is not holomorphic on the disk of radius {radius:.3e} around {center}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn library_values() {
        assert_eq!(HoloFn::parse("z^3").unwrap().eval(c(0.0, 1.0)), c(0.0, -1.0));
        assert_eq!(HoloFn::Chi.eval(c(0.6, 9.0)), c(1.0, 0.0));
        assert_eq!(HoloFn::chi_homotopy(0.5).eval(c(0.2, 0.0)), c(0.1, 0.0));
        let r = HoloFn::from_json(r#"{"fn":"rational","num":[[1,0]],"den":[[1,0],[1,0]]}"#).unwrap();
        assert!((r.eval(c(1.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singularities() {
        let r = HoloFn::Rational { num: vec![c(1.0, 0.0)], den: vec![c(-4.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)] };
        assert!(r.check_disk(c(0.0, 0.0), 1.9).is_ok());
        assert!(matches!(r.check_disk(c(0.0, 0.0), 2.1), Err(Error::Analyticity(_))));
        assert!(HoloFn::Log.check_disk(c(1.0, 0.0), 0.9).is_ok());
        assert!(HoloFn::Log.check_disk(c(-1.0, 0.5), 0.6).is_err());
        assert!(HoloFn::Chi.check_disk(c(0.2, 0.0), 0.35).is_err());
        assert!(HoloFn::Exp.check_disk(c(1e6, 0.0), 1e6).is_ok());
    }
}
