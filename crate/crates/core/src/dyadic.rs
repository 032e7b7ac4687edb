//! Exact dyadic rationals `num / 2^exp` and polynomials over them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Real;

/// `numerator / 2^exponent`, kept canonical: the numerator is odd, or the
/// value is zero and the exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: u32,
}

impl DyadicRational {
    pub fn new(numerator: impl Into<BigInt>, exponent: u32) -> Self {
        let mut d = Self {
            numerator: numerator.into(),
            exponent,
        };
        d.canonicalize();
        d
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    pub fn zero() -> Self {
        Self {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `self / 2`.
    pub fn half(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.numerator.clone(), self.exponent + 1)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Self::new(&self.numerator * k, self.exponent)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.exponent)
    }

    /// Nearest `T` (the numerator is rounded once, the power of two is exact
    /// inside the normal range).
    pub fn to_real<T: Real>(&self) -> T {
        let num = self.numerator.to_f64().unwrap_or(if self.numerator.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
        let scale = 2f64.powi(-(self.exponent as i32));
        T::from_f64(num * scale).unwrap()
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, BigInt::one() << self.exponent)
        }
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &rhs.numerator << (e - rhs.exponent);
        DyadicRational::new(a + b, e)
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;

    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        self + &(-rhs)
    }
}

impl Neg for &DyadicRational {
    type Output = DyadicRational;

    fn neg(self) -> DyadicRational {
        DyadicRational {
            numerator: -&self.numerator,
            exponent: self.exponent,
        }
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        DyadicRational::new(&self.numerator * &rhs.numerator, self.exponent + rhs.exponent)
    }
}

/// Sparse polynomial in `y` with dyadic coefficients; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DyadicPoly {
    terms: BTreeMap<u32, DyadicRational>,
}

impl DyadicPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, DyadicRational::one())
    }

    pub fn monomial(power: u32, coeff: DyadicRational) -> Self {
        let mut p = Self::zero();
        p.add_term(power, &coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, DyadicRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (power, c) in terms {
            p.add_term(power, &c);
        }
        p
    }

    /// Adds `coeff * y^power` in place.
    pub fn add_term(&mut self, power: u32, coeff: &DyadicRational) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.get(&power) {
            Some(c) => c + coeff,
            None => coeff.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&power);
        } else {
            self.terms.insert(power, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_power(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn coefficient(&self, power: u32) -> DyadicRational {
        self.terms.get(&power).cloned().unwrap_or_else(DyadicRational::zero)
    }

    /// `(power, coefficient)` pairs in ascending power.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &DyadicRational)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (*p, c.scale_int(k)))
                .collect(),
        }
    }

    /// `(y/2) * self`.
    pub fn mul_half_y(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, c)| (p + 1, c.half())).collect(),
        }
    }

    /// Horner evaluation in floating point.
    pub fn eval<T: Real>(&self, y: T) -> T {
        let Some(deg) = self.degree() else {
            return T::zero();
        };
        let mut acc = T::zero();
        for p in (0..=deg).rev() {
            acc *= y;
            if let Some(c) = self.terms.get(&p) {
                acc += c.to_real::<T>();
            }
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, y: &BigRational) -> BigRational {
        let Some(deg) = self.degree() else {
            return BigRational::zero();
        };
        let mut acc = BigRational::zero();
        for p in (0..=deg).rev() {
            acc *= y;
            if let Some(c) = self.terms.get(&p) {
                acc += c.to_rational();
            }
        }
        acc
    }
}

impl Add for &DyadicPoly {
    type Output = DyadicPoly;

    fn add(self, rhs: &DyadicPoly) -> DyadicPoly {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(*p, c);
        }
        out
    }
}

impl Sub for &DyadicPoly {
    type Output = DyadicPoly;

    fn sub(self, rhs: &DyadicPoly) -> DyadicPoly {
        self + &(-rhs)
    }
}

impl Neg for &DyadicPoly {
    type Output = DyadicPoly;

    fn neg(self) -> DyadicPoly {
        DyadicPoly {
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
}

impl fmt::Display for DyadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match p {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} y")?,
                _ => write!(f, "{c} y^{p}")?,
            }
        }
        Ok(())
    }
}
