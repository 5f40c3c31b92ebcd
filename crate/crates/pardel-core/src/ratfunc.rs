//! Normalised quotients of multivariate polynomials.
//!
//! Equality is decided by cross-multiplication, so it never depends on the
//! gcd cancellation being complete; the normalisation keeps representatives
//! small and the denominator primitive with positive leading coefficient.

use std::fmt;

use crate::poly::{self, MultiPoly};
use crate::scalar::ExactScalar;

#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    /// `num/den`; panics if `den` is the zero polynomial.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn from_scalar(c: ExactScalar) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(MultiPoly::var(name))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<ExactScalar> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(&n / &d),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one();
            return;
        }
        let g = poly::gcd(&self.num, &self.den);
        if !g.is_zero() && g.as_constant().is_none() {
            self.num = self.num.exact_divide(&g).expect("gcd divides");
            self.den = self.den.exact_divide(&g).expect("gcd divides");
        }
        // Make the denominator primitive with positive leading coefficient.
        let mut c = self.den.content();
        if self.den.leading_coeff().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        self.den = self.den.scale(&inv);
        self.num = self.num.scale(&inv);
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero rational function");
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_and_equality() {
        let z = MultiPoly::var("z0");
        let w = MultiPoly::var("w0");
        // (z^2 - w^2)/(z - w) == z + w
        let r = RatFunc::new(z.pow(2).sub(&w.pow(2)), z.sub(&w));
        assert_eq!(r, RatFunc::from_poly(z.add(&w)));
        assert!(r.as_poly().is_some());
    }

    #[test]
    fn denominator_sign_is_normalised() {
        let z = MultiPoly::var("z0");
        let r = RatFunc::new(MultiPoly::one(), z.neg());
        assert!(!r.den().leading_coeff().is_negative());
        assert!(r.num().leading_coeff().is_negative());
    }

    #[test]
    fn field_operations() {
        let z = RatFunc::var("z0");
        let one = RatFunc::one();
        let a = z.add(&one); // z + 1
        let b = z.sub(&one); // z - 1
        let s = a.div(&b).mul(&b.div(&a));
        assert_eq!(s, RatFunc::one());
        assert_eq!(a.sub(&a), RatFunc::zero());
    }
}
