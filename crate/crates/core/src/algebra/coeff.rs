use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Purge threshold for floating coefficients.
pub const FLOAT_PURGE: f64 = 1e-300;

/// Scalar ring used for group-algebra coefficients.
///
/// `Complex64` is the working type for estimators; [`GaussianRational`]
/// gives exact arithmetic for algebraic identities.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// `|c|^2`, as a coefficient with zero imaginary part.
    fn abs_sqr(&self) -> Self;
    /// True if the coefficient should be dropped from a support.
    fn is_negligible(&self, threshold: f64) -> bool;
    fn modulus(&self) -> f64;
    fn to_complex(&self) -> Complex64;
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn abs_sqr(&self) -> Self {
        Complex64::new(self.norm_sqr(), 0.0)
    }
    fn is_negligible(&self, threshold: f64) -> bool {
        self.norm() <= threshold
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Exact complex rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    /// Exact conversion; every finite double is a dyadic rational.
    pub fn from_complex(c: Complex64) -> Option<Self> {
        Some(GaussianRational { re: BigRational::from_float(c.re)?, im: BigRational::from_float(c.im)? })
    }

    /// Exact `|c|` when it is rational.
    pub fn rational_modulus(&self) -> Option<BigRational> {
        let sq = &self.re * &self.re + &self.im * &self.im;
        let num = exact_sqrt(sq.numer())?;
        let den = exact_sqrt(sq.denom())?;
        Some(BigRational::new(num, den))
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Coefficient for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        GaussianRational { re: BigRational::one(), im: BigRational::zero() }
    }
    fn add(&self, other: &Self) -> Self {
        GaussianRational { re: &self.re + &other.re, im: &self.im + &other.im }
    }
    fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
    fn neg(&self) -> Self {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
    fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }
    fn abs_sqr(&self) -> Self {
        GaussianRational { re: &self.re * &self.re + &self.im * &self.im, im: BigRational::zero() }
    }
    fn is_negligible(&self, _threshold: f64) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let c = Complex64::new(0.1, -3.75);
        let g = GaussianRational::from_complex(c).unwrap();
        assert_eq!(g.to_complex(), c);
        assert!(GaussianRational::from_complex(Complex64::new(f64::NAN, 0.0)).is_none());
    }

    #[test]
    fn rational_modulus() {
        let g = GaussianRational::from_integers(3, 4);
        assert_eq!(g.rational_modulus(), Some(BigRational::from_integer(BigInt::from(5))));
        assert_eq!(GaussianRational::from_integers(1, 1).rational_modulus(), None);
    }

    #[test]
    fn float_purge() {
        assert!(Complex64::new(1e-301, 0.0).is_negligible(FLOAT_PURGE));
        assert!(!Complex64::new(1e-200, 0.0).is_negligible(FLOAT_PURGE));
    }
}
