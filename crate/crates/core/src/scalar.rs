//! Field abstraction shared by the floating and exact backends.
//!
//! Kernels that must be bit-exact (the sheared-square verifier) are written
//! against [`Scalar`] and run over `f64`, [`BigRational`], or [`Sqrt3`]
//! (the quadratic field Q(√3), which contains the endpoints of the admissible
//! shear range).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic is exact and comparisons ignore tolerances.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// `a·d − b·c`.
    fn diff_of_products(a: &Self, d: &Self, b: &Self, c: &Self) -> Self {
        a.clone() * d.clone() - b.clone() * c.clone()
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self == 0`, exactly for exact fields and within `tol` for floats.
    fn near_zero(&self, tol: f64) -> bool {
        if Self::EXACT {
            *self == Self::zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    /// `self <= other`, exactly for exact fields and up to `tol` for floats.
    fn at_most(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            *self <= *other
        } else {
            self.to_f64() <= other.to_f64() + tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }

    /// Kahan's fused-multiply-add evaluation, accurate to a few ulps of the
    /// result even under heavy cancellation.
    fn diff_of_products(a: &Self, d: &Self, b: &Self, c: &Self) -> Self {
        let w = b * c;
        let err = (-b).mul_add(*c, w);
        a.mul_add(*d, -w) + err
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// An element `a + b√3` of Q(√3) with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sqrt3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Sqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    /// The element √3.
    pub fn root() -> Self {
        Self::new(Zero::zero(), One::one())
    }

    pub fn rational(a: BigRational) -> Self {
        Self::new(a, Zero::zero())
    }

    fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm a² − 3b².
    fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(3.into()) * &self.b * &self.b
    }

    pub fn signum(&self) -> Ordering {
        let zero = <BigRational as Zero>::zero();
        let sa = self.a.cmp(&zero);
        let sb = self.b.cmp(&zero);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (s, t) if s == t => s,
            // Opposite signs: the larger of a² and 3b² wins.
            (sa, _) => {
                let n = self.norm();
                match n.cmp(&zero) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
}

impl fmt::Debug for Sqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(3)", self.a, self.b)
    }
}

impl fmt::Display for Sqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt(3)", self.b)
        } else if self.b.is_negative() {
            write!(f, "{} - {}*sqrt(3)", self.a, Signed::abs(&self.b))
        } else {
            write!(f, "{} + {}*sqrt(3)", self.a, self.b)
        }
    }
}

impl PartialOrd for Sqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum())
    }
}

impl Add for Sqrt3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Sqrt3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul for Sqrt3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let three = BigRational::from_integer(3.into());
        Self::new(
            &self.a * &rhs.a + three * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Div for Sqrt3 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt 3)");
        let num = self * rhs.conj();
        Self::new(num.a / &n, num.b / n)
    }
}

impl Neg for Sqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Scalar for Sqrt3 {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::rational(Zero::zero())
    }
    fn one() -> Self {
        Self::rational(One::one())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(<BigRational as Scalar>::from_ratio(num, den))
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.a) + Scalar::to_f64(&self.b) * 3f64.sqrt()
    }
}
