//! Rational root extraction for univariate polynomials and binary forms.
//!
//! Points of `P¹` are `(v₀ : v₁)` with affine value `v₁/v₀`; the point at
//! infinity is `(0 : 1)`. Candidate roots come from the divisors of the
//! integer leading and constant coefficients (factored by trial division
//! plus Brent–Pollard rho), and every reported root is verified by exact
//! division, with multiplicity.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::poly::MultiPoly;
use crate::scalar::ExactScalar;

/// A rational point of `P¹`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Rat {
    Finite(ExactScalar),
    Infinity,
}

impl P1Rat {
    pub fn from_int(n: i64) -> Self {
        P1Rat::Finite(ExactScalar::from_int(n))
    }
}

impl fmt::Display for P1Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Rat::Finite(x) => write!(f, "{x}"),
            P1Rat::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for P1Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RootError {
    #[error("polynomial has an irrational root")]
    IrrationalRoot,
    #[error("zero polynomial has no well-defined root set")]
    ZeroPolynomial,
}

/// All rational roots of a univariate polynomial, with multiplicity.
/// The root multiset must exhaust the degree (counting the point at
/// infinity in projective mode when leading coefficients vanish),
/// otherwise `IrrationalRoot` is returned.
pub fn rational_roots(
    coeffs: &[ExactScalar],
    projective: bool,
) -> Result<Vec<(P1Rat, usize)>, RootError> {
    let mut c: Vec<ExactScalar> = coeffs.to_vec();
    while c.last().map(|x| x.is_zero()).unwrap_or(false) {
        c.pop();
    }
    if c.is_empty() {
        return Err(RootError::ZeroPolynomial);
    }
    let nominal_degree = coeffs.len() - 1;
    let degree = c.len() - 1;
    let mut roots: BTreeMap<P1Rat, usize> = BTreeMap::new();
    if projective && nominal_degree > degree {
        roots.insert(P1Rat::Infinity, nominal_degree - degree);
    }
    // Strip roots at zero.
    let mut low = 0;
    while c.first().map(|x| x.is_zero()).unwrap_or(false) {
        c.remove(0);
        low += 1;
    }
    if low > 0 {
        roots.insert(P1Rat::from_int(0), low);
    }
    // Integer-primitive form.
    let mut den_lcm = BigInt::one();
    for x in &c {
        den_lcm = den_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = c
        .iter()
        .map(|x| x.numer() * (&den_lcm / x.denom()))
        .collect();
    if ints.len() > 1 {
        let lead_divs = divisors(&ints[ints.len() - 1]);
        let const_divs = divisors(&ints[0]);
        let mut work = c.clone();
        'cand: for a in &const_divs {
            for b in &lead_divs {
                for sign in [1i64, -1] {
                    let r = ExactScalar::from_big(a * BigInt::from(sign), b.clone());
                    let mut mult = 0usize;
                    while eval_univ(&work, &r).is_zero() {
                        work = deflate(&work, &r);
                        mult += 1;
                        if work.len() <= 1 {
                            break;
                        }
                    }
                    if mult > 0 {
                        *roots.entry(P1Rat::Finite(r)).or_insert(0) += mult;
                        if work.len() <= 1 {
                            break 'cand;
                        }
                    }
                }
            }
        }
    }
    let finite: usize = roots
        .iter()
        .filter(|(r, _)| **r != P1Rat::Infinity)
        .map(|(_, m)| m)
        .sum();
    let total: usize = roots.values().sum();
    let complete = if projective {
        total == nominal_degree
    } else {
        finite == degree
    };
    if !complete {
        return Err(RootError::IrrationalRoot);
    }
    Ok(roots.into_iter().collect())
}

/// Roots of a binary form in `(v0, v1)`, always projective.
pub fn binary_form_roots(
    form: &MultiPoly,
    v0: &str,
    v1: &str,
) -> Result<Vec<(P1Rat, usize)>, RootError> {
    if form.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let d = form
        .homogeneous_degree_in(&[v0, v1])
        .expect("input must be a binary form") as usize;
    // Coefficients of v1^i v0^(d-i), i = 0..d; affine value is v1/v0.
    let view = form.univariate_view(v1);
    let mut coeffs = Vec::with_capacity(d + 1);
    for (i, c) in view.iter().enumerate() {
        let expected = (d - i) as u32;
        let k = c
            .as_constant()
            .or_else(|| {
                // c is a pure power of v0.
                c.exact_divide(&MultiPoly::var(v0).pow(expected))
                    .and_then(|q| q.as_constant())
            })
            .expect("binary form coefficients must be scalars");
        coeffs.push(k);
    }
    for _ in view.len()..=d {
        coeffs.push(ExactScalar::zero());
    }
    rational_roots(&coeffs, true)
}

fn eval_univ(c: &[ExactScalar], x: &ExactScalar) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for k in c.iter().rev() {
        acc = &(&acc * x) + k;
    }
    acc
}

/// Synthetic division by `(X - r)`; the caller guarantees `r` is a root.
fn deflate(c: &[ExactScalar], r: &ExactScalar) -> Vec<ExactScalar> {
    let n = c.len();
    let mut out = vec![ExactScalar::zero(); n - 1];
    let mut carry = ExactScalar::zero();
    for i in (1..n).rev() {
        carry = &c[i] + &(&carry * r);
        out[i - 1] = carry.clone();
    }
    out
}

// ---- Integer factorisation (trial division + Brent-Pollard rho) ----

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let factors = factorize(&n);
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out: BTreeMap<BigInt, u32> = BTreeMap::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m && p < BigInt::from(100_000) {
        while (&m % &p).is_zero() {
            *out.entry(p.clone()).or_insert(0) += 1;
            m /= &p;
        }
        p += 1;
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m <= BigInt::one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
        } else {
            let d = pollard_rho(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    out.into_iter().collect()
}

fn modpow(base: &BigInt, exp: &BigInt, modulus: &BigInt) -> BigInt {
    base.modpow(exp, modulus)
}

fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigInt::from(small);
        if *n == s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut r = 0u32;
    while d.is_even() {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = modpow(&BigInt::from(a), &d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..r {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut d = BigInt::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn simple_quadratic() {
        // z^2 - 3z + 2 -> {1, 2}
        let roots = rational_roots(&[sc(2), sc(-3), sc(1)], false).unwrap();
        assert_eq!(
            roots,
            vec![(P1Rat::from_int(1), 1), (P1Rat::from_int(2), 1)]
        );
    }

    #[test]
    fn irrational_detected() {
        let err = rational_roots(&[sc(-2), sc(0), sc(1)], false).unwrap_err();
        assert_eq!(err, RootError::IrrationalRoot);
    }

    #[test]
    fn binary_quartic_with_infinity() {
        // z0 * z1 * (z1 - z0) * (z1 - 2 z0) -> {0, 1, 2, inf}
        let z0 = MultiPoly::var("z0");
        let z1 = MultiPoly::var("z1");
        let form = z0
            .mul(&z1)
            .mul(&z1.sub(&z0))
            .mul(&z1.sub(&z0.scale(&sc(2))));
        let roots = binary_form_roots(&form, "z0", "z1").unwrap();
        let expect: Vec<(P1Rat, usize)> = vec![
            (P1Rat::from_int(0), 1),
            (P1Rat::from_int(1), 1),
            (P1Rat::from_int(2), 1),
            (P1Rat::Infinity, 1),
        ];
        assert_eq!(roots, expect);
    }

    #[test]
    fn multiplicity_counted() {
        // (z - 1/2)^2 * (z + 3) = z^3 + 2z^2 - (11/4)z + 3/4
        let half = ExactScalar::from_ratio(1, 2);
        let roots = rational_roots(
            &[
                ExactScalar::from_ratio(3, 4),
                ExactScalar::from_ratio(-11, 4),
                sc(2),
                sc(1),
            ],
            false,
        )
        .unwrap();
        let m: BTreeMap<_, _> = roots.into_iter().collect();
        assert_eq!(m[&P1Rat::Finite(half)], 2);
        assert_eq!(m[&P1Rat::from_int(-3)], 1);
    }

    #[test]
    fn big_coefficients_factor() {
        // roots 1000003 (prime) and 1/2
        let p = sc(1_000_003);
        // (z - p)(2z - 1) = 2z^2 - (2p+1) z + p
        let roots = rational_roots(
            &[p.clone(), -(&(&sc(2) * &p) + &sc(1)), sc(2)],
            false,
        )
        .unwrap();
        let m: BTreeMap<_, _> = roots.into_iter().collect();
        assert_eq!(m[&P1Rat::Finite(p)], 1);
        assert_eq!(m[&P1Rat::Finite(ExactScalar::from_ratio(1, 2))], 1);
    }
}
