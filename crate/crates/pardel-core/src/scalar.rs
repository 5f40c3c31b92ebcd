//! Arbitrary-precision rational scalars.
//!
//! `ExactScalar` wraps `num::BigRational` and is the coefficient type for
//! every polynomial in the crate. The representation is always reduced:
//! `gcd(|num|, den) = 1`, `den > 0`, and zero is `0/1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// A reduced arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n/d`. Panics if `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        ExactScalar(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        ExactScalar(BigRational::new(n, d))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        ExactScalar(self.0.recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = ExactScalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The rational square root, if the value is a perfect square.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.0.numer().sqrt();
        let d = self.0.denom().sqrt();
        if &n * &n == *self.0.numer() && &d * &d == *self.0.denom() {
            Some(ExactScalar(BigRational::new(n, d)))
        } else {
            None
        }
    }

    /// Order by value.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// The fixed total order used for canonical representatives: compare
    /// `(numerator, denominator)` lexicographically as integers.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.numer()
            .cmp(other.numer())
            .then_with(|| self.denom().cmp(other.denom()))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `"n"` or `"n/d"` with optional sign.
impl FromStr for ExactScalar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n).map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let d = BigInt::from_str(d).map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(ExactScalar(BigRational::new(n, d)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        ExactScalar(&self.0 / &rhs.0)
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        (&self).div(&rhs)
    }
}

macro_rules! forward_mixed_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_mixed_binop!(Add, add);
forward_mixed_binop!(Sub, sub);
forward_mixed_binop!(Mul, mul);
forward_mixed_binop!(Div, div);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        self.0 *= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let x: ExactScalar = "-3/6".parse().unwrap();
        assert_eq!(x, ExactScalar::from_ratio(-1, 2));
        assert_eq!(x.to_string(), "-1/2");
        assert_eq!("7".parse::<ExactScalar>().unwrap().to_string(), "7");
        assert!("1/0".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn sqrt_exact() {
        assert_eq!(
            ExactScalar::from_ratio(9, 4).sqrt_exact(),
            Some(ExactScalar::from_ratio(3, 2))
        );
        assert_eq!(ExactScalar::from_int(60).sqrt_exact(), None);
        assert_eq!(ExactScalar::from_int(-4).sqrt_exact(), None);
    }

    #[test]
    fn canonical_order_is_numerator_first() {
        let two = ExactScalar::from_int(2);
        let five_thirds = ExactScalar::from_ratio(5, 3);
        // 2 = (2,1) precedes 5/3 = (5,3) even though 2 > 5/3 by value.
        assert_eq!(two.cmp_canonical(&five_thirds), Ordering::Less);
        assert_eq!(two.cmp_value(&five_thirds), Ordering::Greater);
    }
}
