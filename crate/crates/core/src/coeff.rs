//! Exact arithmetic in Q and Q(i).
//!
//! `Rational` is `num_rational::BigRational`, which already keeps the
//! fraction reduced with a positive denominator. `GaussianRational` pairs
//! two of them and implements the field operations of Q[i]/(i^2+1).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed constant `{0}`")]
    Malformed(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// An element re + im*i of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(rat_int(n), Rational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        GaussianRational::new(rat(n, d), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        GaussianRational::new(r, Rational::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        GaussianRational::from_int(1)
    }

    /// Total bit length of the four integers, a rough cost measure.
    pub fn bits(&self) -> u64 {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()].iter().map(|n| n.bits()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// re^2 + im^2.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(GaussianRational::from_rational(self.re.recip()));
        }
        let n = self.norm();
        Ok(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussianRational::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational::new(&self.re * r, &self.im * r)
    }

    /// Number of "atoms" printed by Display; used to decide on parentheses.
    pub(crate) fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    /// Parses the constant syntax of fixtures: `3`, `-2/5`, `i`, `-2*i`, `1/2+i/3`.
    pub fn parse(s: &str) -> Result<Self, CoeffError> {
        let p = crate::parse::parse_polynomial(s)
            .map_err(|_| CoeffError::Malformed(s.to_string()))?;
        p.as_constant().ok_or_else(|| CoeffError::Malformed(s.to_string()))
    }
}

fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rat(&im_abs))
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", im_txt)
            } else {
                write!(f, "{}", im_txt)
            }
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}", fmt_rat(&self.re), sign, im_txt)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        // real fast paths matter: most coefficients in the jet equations are integers
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::from_rational(&self.re * &o.re);
        }
        if self.im.is_zero() {
            return o.scale(&self.re);
        }
        if o.im.is_zero() {
            return self.scale(&o.re);
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: GaussianRational) -> GaussianRational {
        &self + &o
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: GaussianRational) -> GaussianRational {
        &self - &o
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: GaussianRational) -> GaussianRational {
        &self * &o
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn add_examples() {
        assert_eq!(&g((1, 1), (1, 1)) + &g((1, 1), (-1, 1)), GaussianRational::from_int(2));
        let x = g((3, 7), (-2, 5));
        assert_eq!(&x + &GaussianRational::zero(), x);
        assert_eq!(&g((1, 2), (1, 3)) + &g((1, 2), (-1, 3)), GaussianRational::one());
    }

    #[test]
    fn mul_examples() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
        assert_eq!(&g((1, 1), (1, 1)) * &g((1, 1), (-1, 1)), GaussianRational::from_int(2));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(g((1, 1), (1, 1)).inv().unwrap(), g((1, 2), (-1, 2)));
        assert_eq!(GaussianRational::i().inv().unwrap(), -GaussianRational::i());
        assert_eq!(GaussianRational::from_ratio(2, 3).inv().unwrap(), GaussianRational::from_ratio(3, 2));
        assert_eq!(GaussianRational::zero().inv(), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn display_and_parse() {
        for s in ["0", "3", "-2/5", "i", "-i", "-2*i", "1/2+1/3*i", "-1-i"] {
            let v = GaussianRational::parse(s).unwrap();
            assert_eq!(GaussianRational::parse(&v.to_string()).unwrap(), v);
        }
        assert_eq!(GaussianRational::parse("1/2+i/3").unwrap(), g((1, 2), (1, 3)));
        assert!(GaussianRational::parse("x").is_err());
    }

    #[test]
    fn canonical_denominator_positive() {
        let r = rat(3, -6);
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.numer(), &BigInt::from(-1));
    }
}
