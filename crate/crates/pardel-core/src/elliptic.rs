//! Arithmetic on the elliptic curve `C: y² = x(x−1)(x−λ)`.
//!
//! The chord involution `i_q` sends `p` to the third intersection of the
//! line through `p` and `q` with the cubic, so that `p + q + i_q(p) ~ 3w_∞`.
//! The group law is `p ⊕ q = i_{w∞}(third_collinear(p, q))` with identity
//! `w_∞`; the four Weierstrass points over `x ∈ {0, 1, λ, ∞}` are the
//! 2-torsion. Everything here is exact over ℚ.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::poly::MultiPoly;
use crate::projective::MoebiusMap;
use crate::ratfunc::RatFunc;
use crate::roots::{self, P1Rat};
use crate::scalar::ExactScalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EllipticError {
    #[error("curve parameter must satisfy λ(λ−1) ≠ 0")]
    SingularCurve,
    #[error("point does not satisfy the curve equation")]
    NotOnCurve,
    #[error("divisor has nonzero total degree")]
    NonzeroDegree,
    #[error("puncture data invalid: s² ≠ t(t−1)(t−λ)")]
    InvalidPuncture,
}

/// The smooth curve `y² = x(x−1)(x−λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParams {
    pub lambda: ExactScalar,
}

impl CurveParams {
    pub fn new(lambda: ExactScalar) -> Result<Self, EllipticError> {
        if lambda.is_zero() || lambda.is_one() {
            return Err(EllipticError::SingularCurve);
        }
        Ok(CurveParams { lambda })
    }

    /// `f(x) = x(x−1)(x−λ)`.
    pub fn rhs(&self, x: &ExactScalar) -> ExactScalar {
        let one = ExactScalar::one();
        x * &(x - &one) * (x - &self.lambda)
    }

    /// `f′(x) = 3x² − 2(1+λ)x + λ`.
    pub fn rhs_derivative(&self, x: &ExactScalar) -> ExactScalar {
        let three = ExactScalar::from_int(3);
        let two = ExactScalar::from_int(2);
        let one_lam = &ExactScalar::one() + &self.lambda;
        &(&three * &(x * x)) - &(&two * &(&one_lam * x)) + &self.lambda
    }

    pub fn contains(&self, p: &EllipticPoint) -> bool {
        match p {
            EllipticPoint::Infinity => true,
            EllipticPoint::Affine(x, y) => y * y == self.rhs(x),
        }
    }

    pub fn point(&self, x: ExactScalar, y: ExactScalar) -> Result<EllipticPoint, EllipticError> {
        let p = EllipticPoint::Affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(EllipticError::NotOnCurve)
        }
    }

    /// The Weierstrass point over `k`.
    pub fn weierstrass(&self, k: TorsionIndex) -> EllipticPoint {
        match k {
            TorsionIndex::Zero => EllipticPoint::affine_int(0, 0),
            TorsionIndex::One => EllipticPoint::affine_int(1, 0),
            TorsionIndex::Lambda => {
                EllipticPoint::Affine(self.lambda.clone(), ExactScalar::zero())
            }
            TorsionIndex::Infinity => EllipticPoint::Infinity,
        }
    }
}

/// A rational point of the curve.
#[derive(Clone, PartialEq, Eq)]
pub enum EllipticPoint {
    Infinity,
    Affine(ExactScalar, ExactScalar),
}

impl EllipticPoint {
    pub fn affine_int(x: i64, y: i64) -> Self {
        EllipticPoint::Affine(ExactScalar::from_int(x), ExactScalar::from_int(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EllipticPoint::Infinity)
    }

    /// The hyperelliptic projection `π(x, y) = x`.
    pub fn pi(&self) -> P1Rat {
        match self {
            EllipticPoint::Infinity => P1Rat::Infinity,
            EllipticPoint::Affine(x, _) => P1Rat::Finite(x.clone()),
        }
    }
}

impl fmt::Display for EllipticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllipticPoint::Infinity => write!(f, "w_inf"),
            EllipticPoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Debug for EllipticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Index of a 2-torsion point / torsion line bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorsionIndex {
    Zero,
    One,
    Lambda,
    Infinity,
}

impl TorsionIndex {
    pub const ALL: [TorsionIndex; 4] = [
        TorsionIndex::Zero,
        TorsionIndex::One,
        TorsionIndex::Lambda,
        TorsionIndex::Infinity,
    ];

    /// The corresponding point of `P¹` for a symbolic or specialised λ.
    pub fn p1_value(&self, lambda: &ExactScalar) -> P1Rat {
        match self {
            TorsionIndex::Zero => P1Rat::from_int(0),
            TorsionIndex::One => P1Rat::from_int(1),
            TorsionIndex::Lambda => P1Rat::Finite(lambda.clone()),
            TorsionIndex::Infinity => P1Rat::Infinity,
        }
    }
}

/// The third intersection of the line through `p` and `q` with the cubic;
/// `i_q(p) = third_collinear(p, q)`. Everything is handled projectively,
/// so vertical lines and tangents return the correct point (possibly `w_∞`).
pub fn third_collinear(
    c: &CurveParams,
    p: &EllipticPoint,
    q: &EllipticPoint,
) -> EllipticPoint {
    use EllipticPoint::*;
    match (p, q) {
        (Infinity, Infinity) => Infinity,
        (Infinity, Affine(x, y)) | (Affine(x, y), Infinity) => {
            Affine(x.clone(), -y)
        }
        (Affine(x1, y1), Affine(x2, y2)) => {
            let slope = if x1 != x2 {
                (y2 - y1) / (x2 - x1)
            } else if y1 != y2 || y1.is_zero() {
                // Vertical chord or vertical tangent at a 2-torsion point.
                return Infinity;
            } else {
                // Tangent line.
                &c.rhs_derivative(x1) / &(&ExactScalar::from_int(2) * y1)
            };
            let sum = &(&ExactScalar::one() + &c.lambda) + &(&slope * &slope);
            let x3 = &(&sum - x1) - x2;
            let y3 = y1 + &(&slope * &(&x3 - x1));
            Affine(x3, y3)
        }
    }
}

pub fn group_neg(p: &EllipticPoint) -> EllipticPoint {
    match p {
        EllipticPoint::Infinity => EllipticPoint::Infinity,
        EllipticPoint::Affine(x, y) => EllipticPoint::Affine(x.clone(), -y),
    }
}

pub fn group_add(c: &CurveParams, p: &EllipticPoint, q: &EllipticPoint) -> EllipticPoint {
    group_neg(&third_collinear(c, p, q))
}

pub fn group_mul(c: &CurveParams, n: i64, p: &EllipticPoint) -> EllipticPoint {
    let mut acc = EllipticPoint::Infinity;
    let base = if n < 0 { group_neg(p) } else { p.clone() };
    for _ in 0..n.abs() {
        acc = group_add(c, &acc, &base);
    }
    acc
}

/// Abel's criterion on an elliptic curve: a degree-0 divisor is principal
/// iff its group-law sum is the identity.
pub fn divisor_class_trivial(
    c: &CurveParams,
    divisor: &[(EllipticPoint, i64)],
) -> Result<bool, EllipticError> {
    let degree: i64 = divisor.iter().map(|(_, m)| m).sum();
    if degree != 0 {
        return Err(EllipticError::NonzeroDegree);
    }
    let mut acc = EllipticPoint::Infinity;
    for (p, m) in divisor {
        acc = group_add(c, &acc, &group_mul(c, *m, p));
    }
    Ok(acc.is_infinity())
}

/// A degree-tagged divisor class `O(D)`, stored as the group-law reduction
/// of `D − deg(D)·w_∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub degree: i64,
    pub reduction: EllipticPoint,
}

impl DivisorClass {
    pub fn trivial() -> Self {
        DivisorClass {
            degree: 0,
            reduction: EllipticPoint::Infinity,
        }
    }

    /// The class `O(p − w_∞)`.
    pub fn from_point(p: &EllipticPoint) -> Self {
        DivisorClass {
            degree: 0,
            reduction: p.clone(),
        }
    }

    pub fn from_divisor(c: &CurveParams, divisor: &[(EllipticPoint, i64)]) -> Self {
        let degree: i64 = divisor.iter().map(|(_, m)| m).sum();
        let mut acc = EllipticPoint::Infinity;
        for (p, m) in divisor {
            acc = group_add(c, &acc, &group_mul(c, *m, p));
        }
        DivisorClass {
            degree,
            reduction: acc,
        }
    }

    /// The torsion class `L_k = O(w_k − w_∞)`.
    pub fn torsion(c: &CurveParams, k: TorsionIndex) -> Self {
        Self::from_point(&c.weierstrass(k))
    }

    pub fn inverse(&self) -> Self {
        DivisorClass {
            degree: -self.degree,
            reduction: group_neg(&self.reduction),
        }
    }

    pub fn tensor(&self, c: &CurveParams, other: &DivisorClass) -> Self {
        DivisorClass {
            degree: self.degree + other.degree,
            reduction: group_add(c, &self.reduction, &other.reduction),
        }
    }

    /// Twist by `O(n·w_∞)`.
    pub fn twist_winf(&self, n: i64) -> Self {
        DivisorClass {
            degree: self.degree + n,
            reduction: self.reduction.clone(),
        }
    }

    /// Whether this is one of the four 2-torsion classes (degree 0 with
    /// 2-torsion reduction).
    pub fn torsion_index(&self, c: &CurveParams) -> Option<TorsionIndex> {
        if self.degree != 0 {
            return None;
        }
        TorsionIndex::ALL
            .into_iter()
            .find(|&k| self.reduction == c.weierstrass(k))
    }
}

/// Translation by the 2-torsion point `w_k`: `i_{w_k} ∘ i_{w_∞}`.
pub fn torsion_translate(
    c: &CurveParams,
    p: &EllipticPoint,
    k: TorsionIndex,
) -> EllipticPoint {
    let wk = c.weierstrass(k);
    let flipped = third_collinear(c, p, &EllipticPoint::Infinity);
    third_collinear(c, &flipped, &wk)
}

/// The Möbius map `β_k` on the `x`-line induced by `⊗L_k`, with `λ` given
/// as a polynomial (a variable in symbolic mode, a constant otherwise).
pub fn beta(k: TorsionIndex, lambda: &MultiPoly) -> MoebiusMap {
    let one = MultiPoly::one();
    match k {
        TorsionIndex::Infinity => MoebiusMap::identity(),
        // β₀(z) = λ/z
        TorsionIndex::Zero => {
            MoebiusMap::from_rows(MultiPoly::zero(), one, lambda.clone(), MultiPoly::zero())
        }
        // β₁(z) = (z−λ)/(z−1)
        TorsionIndex::One => MoebiusMap::from_rows(
            MultiPoly::from_int(-1),
            one,
            lambda.neg(),
            MultiPoly::one(),
        ),
        // β_λ(z) = (λz−λ)/(z−λ)
        TorsionIndex::Lambda => MoebiusMap::from_rows(
            lambda.neg(),
            one,
            lambda.neg(),
            lambda.clone(),
        ),
    }
}

/// The coordinate maps `ε₁, ε₂ : C → P¹` for the punctures
/// `t₁ = (t, s)`, `t₂ = (t, −s)`, as rational functions in `(x, y)`.
pub fn epsilon_maps(
    c: &CurveParams,
    t: &ExactScalar,
    s: &ExactScalar,
) -> Result<(RatFunc, RatFunc), EllipticError> {
    if s * s != c.rhs(t) {
        return Err(EllipticError::InvalidPuncture);
    }
    if t.is_zero() || t.is_one() || *t == c.lambda {
        return Err(EllipticError::InvalidPuncture);
    }
    let x = MultiPoly::var("x");
    let y = MultiPoly::var("y");
    let tp = MultiPoly::constant(t.clone());
    let sp = MultiPoly::constant(s.clone());
    // ε₁ = (t·y − s·x)/(y − s), ε₂ = (t·y + s·x)/(y + s)
    let e1 = RatFunc::new(tp.mul(&y).sub(&sp.mul(&x)), y.sub(&sp));
    let e2 = RatFunc::new(tp.mul(&y).add(&sp.mul(&x)), y.add(&sp));
    Ok((e1, e2))
}

/// Symbolic residual of the identity `ε_j ∘ i_{t_j} = ε_j` modulo the curve
/// relations `y² = x(x−1)(x−λ)` and `s² = t(t−1)(t−λ)`; the identity holds
/// iff the residual is the zero polynomial. `j` is 1 or 2.
pub fn epsilon_fiber_residual(j: u8) -> MultiPoly {
    assert!(j == 1 || j == 2);
    let x = RatFunc::var("x");
    let y = RatFunc::var("y");
    let lam = RatFunc::var("lambda");
    let t = RatFunc::var("t");
    let s_var = RatFunc::var("s");
    let s = if j == 1 { s_var } else { s_var.neg() };
    // i_{t_j}((x,y)): third point of the line through (x,y) and (t, s).
    let m = s.sub(&y).div(&t.sub(&x));
    let x3 = RatFunc::one()
        .add(&lam)
        .add(&m.mul(&m))
        .sub(&x)
        .sub(&t);
    let y3 = y.add(&m.mul(&x3.sub(&x)));
    // ε_j(p) = (t·y − s·x)/(y − s) with the sign of s already folded in.
    let eps = |px: &RatFunc, py: &RatFunc| -> RatFunc {
        t.mul(py).sub(&s.mul(px)).div(&py.sub(&s))
    };
    let delta = eps(&x3, &y3).sub(&eps(&x, &y));
    let fx = curve_rhs_poly("x");
    let ft = curve_rhs_poly("t");
    delta
        .num()
        .reduce_square("y", &fx)
        .reduce_square("s", &ft)
}

/// `v(v−1)(v−λ)` as a polynomial in the named variable and `lambda`.
pub fn curve_rhs_poly(var: &str) -> MultiPoly {
    let v = MultiPoly::var(var);
    let lam = MultiPoly::var("lambda");
    v.mul(&v.sub(&MultiPoly::one())).mul(&v.sub(&lam))
}

/// Whether `i_p(q) = q`, i.e. `q` is a ramification point of the
/// two-section through `p`.
pub fn prop2sec_check(c: &CurveParams, p: &EllipticPoint, q: &EllipticPoint) -> bool {
    third_collinear(c, q, p) == *q
}

/// All rational points `r` with `2r = target`.
pub fn halvings(c: &CurveParams, target: &EllipticPoint) -> Vec<EllipticPoint> {
    let mut out = Vec::new();
    match target {
        EllipticPoint::Infinity => {
            for k in TorsionIndex::ALL {
                out.push(c.weierstrass(k));
            }
        }
        EllipticPoint::Affine(tx, _) => {
            // x(2P) = (x² − λ)² / (4 f(x)); solve the quartic
            // (x² − λ)² − 4·t_x·f(x) = 0 for x.
            let x = MultiPoly::var("x");
            let lam = MultiPoly::constant(c.lambda.clone());
            let f = x
                .mul(&x.sub(&MultiPoly::one()))
                .mul(&x.sub(&lam));
            let quartic = x
                .pow(2)
                .sub(&lam)
                .pow(2)
                .sub(&f.scale(&(&ExactScalar::from_int(4) * tx)));
            let coeffs: Vec<ExactScalar> = quartic
                .univariate_view("x")
                .iter()
                .map(|c| c.as_constant().expect("specialised quartic"))
                .collect();
            if let Ok(rts) = roots::rational_roots(&coeffs, false) {
                for (r, _) in rts {
                    let P1Rat::Finite(rx) = r else { continue };
                    let y2 = c.rhs(&rx);
                    if let Some(ry) = y2.sqrt_exact() {
                        for cand in [
                            EllipticPoint::Affine(rx.clone(), ry.clone()),
                            EllipticPoint::Affine(rx.clone(), -&ry),
                        ] {
                            if group_mul(c, 2, &cand) == *target && !out.contains(&cand) {
                                out.push(cand);
                            }
                        }
                    }
                }
            }
            // Irrational roots simply contribute no rational halving.
        }
    }
    out
}

// ---- Seeded rational sampling ----

/// A curve with a known non-torsion rational point, generated by choosing a
/// rational `(x, y)` first and solving `y² = x(x−1)(x−λ)` for `λ`. Keeps
/// all arithmetic in ℚ regardless of how sparse rational points are on any
/// particular curve.
pub fn sample_curve_with_point<R: Rng>(rng: &mut R) -> (CurveParams, EllipticPoint) {
    loop {
        let xn = rng.gen_range(-12i64..13);
        let xd = rng.gen_range(1i64..5);
        let yn = rng.gen_range(1i64..13);
        let yd = rng.gen_range(1i64..5);
        let x = ExactScalar::from_ratio(xn, xd);
        let y = ExactScalar::from_ratio(yn, yd);
        if x.is_zero() || x.is_one() {
            continue;
        }
        // λ = x − y²/(x(x−1))
        let denom = &x * &(&x - &ExactScalar::one());
        if denom.is_zero() {
            continue;
        }
        let lambda = &x - &(&(&y * &y) / &denom);
        if lambda.is_zero() || lambda.is_one() {
            continue;
        }
        let c = CurveParams::new(lambda).unwrap();
        let p = EllipticPoint::Affine(x, y);
        debug_assert!(c.contains(&p));
        // Reject 2-torsion base points.
        if group_mul(&c, 2, &p).is_infinity() {
            continue;
        }
        return (c, p);
    }
}

/// A small pool of distinct rational points on the sampled curve: multiples
/// of the base point and their torsion translates.
pub fn point_pool(c: &CurveParams, base: &EllipticPoint, want: usize) -> Vec<EllipticPoint> {
    let mut out = Vec::new();
    'outer: for n in 1..=4i64 {
        for sign in [1i64, -1] {
            let q = group_mul(c, sign * n, base);
            for k in TorsionIndex::ALL {
                let r = torsion_translate(c, &q, k);
                if !out.contains(&r) {
                    out.push(r);
                    if out.len() >= want {
                        break 'outer;
                    }
                }
            }
        }
    }
    out
}

/// Specialises a symbolic polynomial at rational `(λ, t)` (and optionally
/// `s`), leaving other variables untouched.
pub fn specialize(
    p: &MultiPoly,
    lambda: &ExactScalar,
    t: Option<&ExactScalar>,
    s: Option<&ExactScalar>,
) -> MultiPoly {
    let mut assign = BTreeMap::new();
    assign.insert("lambda".to_string(), lambda.clone());
    if let Some(t) = t {
        assign.insert("t".to_string(), t.clone());
    }
    if let Some(s) = s {
        assign.insert("s".to_string(), s.clone());
    }
    p.eval_partial(&assign)
}
