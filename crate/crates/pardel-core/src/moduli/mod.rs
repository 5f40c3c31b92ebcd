//! The concrete geometric catalog on `P²_b` and `P¹_z × P¹_w`: the five
//! special points, the sixteen special curves, the branch curve `Γ`, the
//! cubic `Σ`, the 2:1 covering map `Φ̃`, and the involutions `τ`, `σ_k`,
//! `ψ_T` together with their `P¹×P¹` counterparts.
//!
//! All formulas are built once over symbolic `(λ, t)` and specialised on
//! demand, so every identity can be certified as a polynomial identity and
//! re-checked at rational parameter values.

pub mod action;
pub mod cover;
pub mod fitting;
pub mod group;
pub mod theta;
pub mod torelli;

use std::collections::BTreeMap;

use crate::elliptic::TorsionIndex;
use crate::poly::MultiPoly;
use crate::projective::{
    line_through, BiCurve, BirMapP2, MoebiusMap, PlaneCurve, ProjPoint, RuledMap,
};
use crate::ratfunc::RatFunc;
use crate::scalar::ExactScalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModuliError {
    #[error("parameters are degenerate: need λ ∉ {{0,1}} and t ∉ {{0,1,λ}}")]
    DegenerateParams,
    #[error("s² ≠ t(t−1)(t−λ)")]
    InvalidPuncture,
    #[error("r is not a square root of the puncture class")]
    InvalidRoot,
    #[error("the fourth-point consistency check failed")]
    Inconsistent,
    #[error("tangency fitting system is rank-deficient beyond the expected line")]
    UnderdeterminedFit,
    #[error("tangent abscissas are not all rational")]
    IrrationalBranch,
    #[error("no normalisation reproduces the standard branch curve")]
    NotGammaType,
    #[error("input curve is not of bidegree (2,2) with constant coefficients")]
    NotBidegree22,
}

/// Moduli parameters: fully symbolic, or rational `(λ, t)` with an optional
/// rational `s` satisfying `s² = t(t−1)(t−λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuliParams {
    Symbolic,
    Rational {
        lambda: ExactScalar,
        t: ExactScalar,
        s: Option<ExactScalar>,
    },
}

impl ModuliParams {
    pub fn symbolic() -> Self {
        ModuliParams::Symbolic
    }

    pub fn rational(lambda: ExactScalar, t: ExactScalar) -> Result<Self, ModuliError> {
        if lambda.is_zero() || lambda.is_one() {
            return Err(ModuliError::DegenerateParams);
        }
        if t.is_zero() || t.is_one() || t == lambda {
            return Err(ModuliError::DegenerateParams);
        }
        Ok(ModuliParams::Rational { lambda, t, s: None })
    }

    pub fn rational_with_s(
        lambda: ExactScalar,
        t: ExactScalar,
        s: ExactScalar,
    ) -> Result<Self, ModuliError> {
        let base = Self::rational(lambda.clone(), t.clone())?;
        let ModuliParams::Rational { .. } = &base else { unreachable!() };
        let one = ExactScalar::one();
        let rhs = &t * &(&t - &one) * (&t - &lambda);
        if &s * &s != rhs {
            return Err(ModuliError::InvalidPuncture);
        }
        Ok(ModuliParams::Rational {
            lambda,
            t,
            s: Some(s),
        })
    }

    /// Attempts to compute `s` from `(λ, t)`; fails when `t(t−1)(t−λ)` is
    /// not a rational square.
    pub fn solve_s(&self) -> Option<ExactScalar> {
        match self {
            ModuliParams::Symbolic => None,
            ModuliParams::Rational { lambda, t, s } => s.clone().or_else(|| {
                let one = ExactScalar::one();
                (&(t * &(t - &one)) * &(t - lambda)).sqrt_exact()
            }),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ModuliParams::Symbolic)
    }

    pub fn lambda_scalar(&self) -> Option<ExactScalar> {
        match self {
            ModuliParams::Symbolic => None,
            ModuliParams::Rational { lambda, .. } => Some(lambda.clone()),
        }
    }

    pub fn t_scalar(&self) -> Option<ExactScalar> {
        match self {
            ModuliParams::Symbolic => None,
            ModuliParams::Rational { t, .. } => Some(t.clone()),
        }
    }

    /// `λ` as a polynomial: the variable in symbolic mode, a constant
    /// otherwise.
    pub fn lambda_poly(&self) -> MultiPoly {
        match self {
            ModuliParams::Symbolic => MultiPoly::var("lambda"),
            ModuliParams::Rational { lambda, .. } => MultiPoly::constant(lambda.clone()),
        }
    }

    pub fn t_poly(&self) -> MultiPoly {
        match self {
            ModuliParams::Symbolic => MultiPoly::var("t"),
            ModuliParams::Rational { t, .. } => MultiPoly::constant(t.clone()),
        }
    }

    /// Specialises a symbolic master polynomial at these parameters.
    pub fn specialize(&self, p: &MultiPoly) -> MultiPoly {
        match self {
            ModuliParams::Symbolic => p.clone(),
            ModuliParams::Rational { lambda, t, s } => {
                let mut assign = BTreeMap::new();
                assign.insert("lambda".to_string(), lambda.clone());
                assign.insert("t".to_string(), t.clone());
                if let Some(s) = s {
                    assign.insert("s".to_string(), s.clone());
                }
                p.eval_partial(&assign)
            }
        }
    }

    /// The `P¹` value of `k ∈ {0, 1, λ, ∞}` in this parameter set, as a
    /// projective point with polynomial coordinates.
    pub fn delta_point(&self, k: TorsionIndex) -> ProjPoint {
        match k {
            TorsionIndex::Zero => ProjPoint::p1(RatFunc::one(), RatFunc::zero()),
            TorsionIndex::One => ProjPoint::p1(RatFunc::one(), RatFunc::one()),
            TorsionIndex::Lambda => ProjPoint::p1(
                RatFunc::one(),
                RatFunc::from_poly(self.lambda_poly()),
            ),
            TorsionIndex::Infinity => ProjPoint::p1(RatFunc::zero(), RatFunc::one()),
        }
    }
}

/// Index of a special point; `T` is the fifth point `D_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointId {
    Zero,
    One,
    Lambda,
    T,
    Infinity,
}

impl PointId {
    pub const ALL: [PointId; 5] = [
        PointId::Zero,
        PointId::One,
        PointId::Lambda,
        PointId::T,
        PointId::Infinity,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            PointId::Zero => "0",
            PointId::One => "1",
            PointId::Lambda => "lambda",
            PointId::T => "t",
            PointId::Infinity => "inf",
        }
    }
}

/// One of the named maps of the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedMapTag {
    Tau,
    Sigma0,
    Sigma1,
    SigmaLambda,
    PsiT,
    Twist(TorsionIndex),
    Swap,
    PhiTilde,
    PhiW,
}

// ---- Symbolic master formulas ----

fn sc(n: i64) -> ExactScalar {
    ExactScalar::from_int(n)
}

fn pvar(name: &str) -> MultiPoly {
    MultiPoly::var(name)
}

/// Bihomogenises an affine `(z, w)` term list of bidegree (2,2):
/// `(i, j, coeff)` means `coeff · z^i w^j`.
fn bihom22(terms: &[(u32, u32, MultiPoly)]) -> MultiPoly {
    let z0 = pvar("z0");
    let z1 = pvar("z1");
    let w0 = pvar("w0");
    let w1 = pvar("w1");
    let mut acc = MultiPoly::zero();
    for (i, j, c) in terms {
        let m = z1
            .pow(*i)
            .mul(&z0.pow(2 - i))
            .mul(&w1.pow(*j))
            .mul(&w0.pow(2 - j));
        acc = acc.add(&c.mul(&m));
    }
    acc
}

/// The branch curve `Γ` of bidegree (2,2), symbolic in `(λ, t)`:
/// `t²z² − 2tz²w + t²w² − 2tzw² + z²w² − 2λtz − 2λtw
///  + 2(2(λ+1)t − t² − λ)zw + λ²`.
pub fn gamma_master() -> MultiPoly {
    let lam = pvar("lambda");
    let t = pvar("t");
    let two = MultiPoly::from_int(2);
    let mixed = two.mul(
        &two.mul(&lam.add(&MultiPoly::one()))
            .mul(&t)
            .sub(&t.pow(2))
            .sub(&lam),
    );
    bihom22(&[
        (2, 0, t.pow(2)),
        (2, 1, t.scale(&sc(-2))),
        (0, 2, t.pow(2)),
        (1, 2, t.scale(&sc(-2))),
        (2, 2, MultiPoly::one()),
        (1, 0, lam.mul(&t).scale(&sc(-2))),
        (0, 1, lam.mul(&t).scale(&sc(-2))),
        (1, 1, mixed),
        (0, 0, lam.pow(2)),
    ])
}

/// The ramification cubic `Σ` in `P²_b`, symbolic in `(λ, t)`.
pub fn sigma_master() -> MultiPoly {
    let lam = pvar("lambda");
    let t = pvar("t");
    let b0 = pvar("b0");
    let b1 = pvar("b1");
    let b2 = pvar("b2");
    let terms: Vec<(MultiPoly, MultiPoly)> = vec![
        // −λt²·b0²b1
        (lam.mul(&t.pow(2)).neg(), b0.pow(2).mul(&b1)),
        // +λt·b0²b2
        (lam.mul(&t), b0.pow(2).mul(&b2)),
        // (λt² + λt + t²)·b0b1²
        (
            lam.mul(&t.pow(2)).add(&lam.mul(&t)).add(&t.pow(2)),
            b0.mul(&b1.pow(2)),
        ),
        // −(t² + λ)·b1³
        (t.pow(2).add(&lam).neg(), b1.pow(3)),
        // −2(λt + t)·b0b1b2
        (
            lam.mul(&t).add(&t).scale(&sc(-2)),
            b0.mul(&b1).mul(&b2),
        ),
        // (λ + t + 1)·b1²b2
        (lam.add(&t).add(&MultiPoly::one()), b1.pow(2).mul(&b2)),
        // t·b0b2²
        (t.clone(), b0.mul(&b2.pow(2))),
        // −b1b2²
        (MultiPoly::from_int(-1), b1.mul(&b2.pow(2))),
    ];
    terms
        .into_iter()
        .fold(MultiPoly::zero(), |acc, (c, m)| acc.add(&c.mul(&m)))
}

/// The covering map `Φ̃ : P²_b ⇢ P¹_z × P¹_w`,
/// `b ↦ ((b₁t − b₂)/(b₀t − b₁), −b₁(b₀λ − b₁λ − b₁ + b₂)/(b₁² − b₀b₂))`,
/// stored as (denominator, numerator) pairs.
pub fn phi_tilde_master() -> ([MultiPoly; 2], [MultiPoly; 2]) {
    let lam = pvar("lambda");
    let t = pvar("t");
    let b0 = pvar("b0");
    let b1 = pvar("b1");
    let b2 = pvar("b2");
    let z_den = b0.mul(&t).sub(&b1);
    let z_num = b1.mul(&t).sub(&b2);
    let w_den = b1.pow(2).sub(&b0.mul(&b2));
    let w_num = b1
        .mul(&b0.mul(&lam).sub(&b1.mul(&lam)).sub(&b1).add(&b2))
        .neg();
    ([z_den, z_num], [w_den, w_num])
}

/// The de Jonquières involution `τ` with the `b₀²` coefficient of the
/// printed third component corrected to `λt²` (the printed row drops the
/// factor; see `tau_master_printed` and the derivation oracle in
/// [`fitting`]).
pub fn tau_master() -> [MultiPoly; 3] {
    tau_master_inner(true)
}

/// The table row exactly as printed, including the suspect `b₀²`
/// coefficient `1` in the third component.
pub fn tau_master_printed() -> [MultiPoly; 3] {
    tau_master_inner(false)
}

fn tau_master_inner(corrected: bool) -> [MultiPoly; 3] {
    let lam = pvar("lambda");
    let t = pvar("t");
    let b0 = pvar("b0");
    let b1 = pvar("b1");
    let b2 = pvar("b2");
    let one = MultiPoly::one();
    let tb0_b1 = t.mul(&b0).sub(&b1);
    let tb1_b2 = t.mul(&b1).sub(&b2);
    // τ₀ = (λt·b0b1 + (t² − tλ − t)·b0b2 − (t² + λ)·b1² + (t + λ + 1)·b1b2 − b2²)(tb0 − b1)
    let q0 = lam
        .mul(&t)
        .mul(&b0.mul(&b1))
        .add(
            &t.pow(2)
                .sub(&t.mul(&lam))
                .sub(&t)
                .mul(&b0.mul(&b2)),
        )
        .sub(&t.pow(2).add(&lam).mul(&b1.pow(2)))
        .add(&t.add(&lam).add(&one).mul(&b1.mul(&b2)))
        .sub(&b2.pow(2));
    let tau0 = q0.mul(&tb0_b1);
    // τ₁ = (λb0 − (λ+1)b1 + b2)(tb0 − b1)(tb1 − b2)·t
    let lin = lam
        .mul(&b0)
        .sub(&lam.add(&one).mul(&b1))
        .add(&b2);
    let tau1 = lin.mul(&tb0_b1).mul(&tb1_b2).mul(&t);
    // τ₂ = (λt²·b0² − (t²λ + t² + tλ)·b0b1 + (tλ + t − λ)·b0b2
    //       + (t² + λ)·b1² − t·b1b2)(tb1 − b2)·t
    let b0sq_coeff = if corrected { lam.mul(&t.pow(2)) } else { one.clone() };
    let q2 = b0sq_coeff
        .mul(&b0.pow(2))
        .sub(
            &t.pow(2)
                .mul(&lam)
                .add(&t.pow(2))
                .add(&t.mul(&lam))
                .mul(&b0.mul(&b1)),
        )
        .add(&t.mul(&lam).add(&t).sub(&lam).mul(&b0.mul(&b2)))
        .add(&t.pow(2).add(&lam).mul(&b1.pow(2)))
        .sub(&t.mul(&b1.mul(&b2)));
    let tau2 = q2.mul(&tb1_b2).mul(&t);
    [tau0, tau1, tau2]
}

/// The lift `σ₀` of the twist by `L₀`.
pub fn sigma0_master() -> [MultiPoly; 3] {
    let lam = pvar("lambda");
    let t = pvar("t");
    let b0 = pvar("b0");
    let b1 = pvar("b1");
    let b2 = pvar("b2");
    let one = MultiPoly::one();
    let tb0_b1 = t.mul(&b0).sub(&b1);
    let tb1_b2 = t.mul(&b1).sub(&b2);
    // σ₀₀ = (λb0 + (t − 1 − λ)b1)(tb1 − b2)
    let s0 = lam
        .mul(&b0)
        .add(&t.sub(&one).sub(&lam).mul(&b1))
        .mul(&tb1_b2);
    // σ₀₁ = λ(tb0 − b1)(tb1 − b2)
    let s1 = lam.mul(&tb0_b1).mul(&tb1_b2);
    // σ₀₂ = λ(tb0 − b1)((t − λ + λt)b1 − tb2)
    let s2 = lam.mul(&tb0_b1).mul(
        &t.sub(&lam)
            .add(&lam.mul(&t))
            .mul(&b1)
            .sub(&t.mul(&b2)),
    );
    [s0, s1, s2]
}

/// The lift `σ₁` of the twist by `L₁`.
pub fn sigma1_master() -> [MultiPoly; 3] {
    let lam = pvar("lambda");
    let t = pvar("t");
    let b0 = pvar("b0");
    let b1 = pvar("b1");
    let b2 = pvar("b2");
    let one = MultiPoly::one();
    // σ₁₀ = (tb0 − (1+t)b1 + b2)(tb0 + (λ − t − 1)b1)
    let f1 = t
        .mul(&b0)
        .sub(&one.add(&t).mul(&b1))
        .add(&b2);
    let f2 = t.mul(&b0).add(&lam.sub(&t).sub(&one).mul(&b1));
    let s0 = f1.mul(&f2);
    // σ₁₁ = t(λb0 − b1)(tb0 − (1+t)b1 + b2)
    let s1 = t.mul(&lam.mul(&b0).sub(&b1)).mul(&f1);
    // σ₁₂ = t(λ²t·b0² + (λ² + t)b1² − (λ² + λt + λ²t)b0b1 + (λ − t + λt)b0b2 − λb1b2)
    let q = lam
        .pow(2)
        .mul(&t)
        .mul(&b0.pow(2))
        .add(&lam.pow(2).add(&t).mul(&b1.pow(2)))
        .sub(
            &lam.pow(2)
                .add(&lam.mul(&t))
                .add(&lam.pow(2).mul(&t))
                .mul(&b0.mul(&b1)),
        )
        .add(&lam.sub(&t).add(&lam.mul(&t)).mul(&b0.mul(&b2)))
        .sub(&lam.mul(&b1.mul(&b2)));
    let s2 = t.mul(&q);
    [s0, s1, s2]
}

/// The lift `σ_λ` of the twist by `L_λ`.
pub fn sigma_lambda_master() -> [MultiPoly; 3] {
    let lam = pvar("lambda");
    let t = pvar("t");
    let b0 = pvar("b0");
    let b1 = pvar("b1");
    let b2 = pvar("b2");
    let one = MultiPoly::one();
    let lt = lam.mul(&t);
    // shared factor λtb0 − (λ+t)b1 + b2
    let g = lt.mul(&b0).sub(&lam.add(&t).mul(&b1)).add(&b2);
    // σ_λ0 = (λt·b0 + (1 − λ − t)b1)·g
    let s0 = lt
        .mul(&b0)
        .add(&one.sub(&lam).sub(&t).mul(&b1))
        .mul(&g);
    // σ_λ1 = λt(b0 − b1)·g
    let s1 = lt.mul(&b0.sub(&b1)).mul(&g);
    // σ_λ2 = λt(λt·b0² + (1 + λt)b1² − (λ + t + λt)b0b1 + (λ + t − λt)b0b2 − b1b2)
    let q = lt
        .mul(&b0.pow(2))
        .add(&one.add(&lt).mul(&b1.pow(2)))
        .sub(&lam.add(&t).add(&lt).mul(&b0.mul(&b1)))
        .add(&lam.add(&t).sub(&lt).mul(&b0.mul(&b2)))
        .sub(&b1.mul(&b2));
    let s2 = lt.mul(&q);
    [s0, s1, s2]
}

/// The lift `ψ_T` of the factor exchange.
pub fn psi_t_master() -> [MultiPoly; 3] {
    let lam = pvar("lambda");
    let t = pvar("t");
    let b0 = pvar("b0");
    let b1 = pvar("b1");
    let b2 = pvar("b2");
    let one = MultiPoly::one();
    // ψ_T0 = −(λ + t²)b1² − b2² + λt·b0b1 + (t² − t − λt)b0b2 + (λ + t + 1)b1b2
    let s0 = lam
        .add(&t.pow(2))
        .neg()
        .mul(&b1.pow(2))
        .sub(&b2.pow(2))
        .add(&lam.mul(&t).mul(&b0.mul(&b1)))
        .add(
            &t.pow(2)
                .sub(&t)
                .sub(&lam.mul(&t))
                .mul(&b0.mul(&b2)),
        )
        .add(&lam.add(&t).add(&one).mul(&b1.mul(&b2)));
    // shared factor λb0 − (1+λ)b1 + b2
    let g = lam.mul(&b0).sub(&one.add(&lam).mul(&b1)).add(&b2);
    // ψ_T1 = t·g·(tb1 − b2)
    let s1 = t.mul(&g).mul(&t.mul(&b1).sub(&b2));
    // ψ_T2 = t((t − λ + λt)b1 − tb2)·g
    let s2 = t
        .mul(
            &t.sub(&lam)
                .add(&lam.mul(&t))
                .mul(&b1)
                .sub(&t.mul(&b2)),
        )
        .mul(&g);
    [s0, s1, s2]
}

// ---- Public catalog constructors ----

/// The five special points `D_0, D_1, D_λ, D_t, D_∞`.
pub fn special_points(params: &ModuliParams) -> Vec<(PointId, ProjPoint)> {
    let lam = params.lambda_poly();
    let t = params.t_poly();
    let pt = |a: MultiPoly, b: MultiPoly, c: MultiPoly| {
        ProjPoint::p2(
            RatFunc::from_poly(a),
            RatFunc::from_poly(b),
            RatFunc::from_poly(c),
        )
    };
    vec![
        (PointId::Zero, pt(MultiPoly::one(), MultiPoly::zero(), MultiPoly::zero())),
        (PointId::One, pt(MultiPoly::one(), MultiPoly::one(), MultiPoly::one())),
        (PointId::Lambda, pt(MultiPoly::one(), lam.clone(), lam.pow(2))),
        (PointId::T, pt(MultiPoly::one(), t.clone(), t.pow(2))),
        (PointId::Infinity, pt(MultiPoly::zero(), MultiPoly::zero(), MultiPoly::one())),
    ]
}

pub fn special_point(params: &ModuliParams, id: PointId) -> ProjPoint {
    special_points(params)
        .into_iter()
        .find(|(i, _)| *i == id)
        .map(|(_, p)| p)
        .unwrap()
}

/// The ten lines `Π_{ij}` joining pairs of special points.
pub fn standard_lines(params: &ModuliParams) -> Vec<((PointId, PointId), PlaneCurve)> {
    let pts = special_points(params);
    let mut out = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            let (idi, pi) = &pts[i];
            let (idj, pj) = &pts[j];
            let l = line_through(pi, pj).expect("special points are distinct");
            out.push(((*idi, *idj), l));
        }
    }
    out
}

pub fn standard_line(params: &ModuliParams, a: PointId, b: PointId) -> PlaneCurve {
    standard_lines(params)
        .into_iter()
        .find(|((i, j), _)| (*i == a && *j == b) || (*i == b && *j == a))
        .map(|(_, l)| l)
        .expect("line exists")
}

/// The conic `b₁² − b₀b₂` through all five special points. The fitted
/// conic (the unique one through the five points) is computed in
/// [`fitting::fit_conic_through_points`]; this is the closed form it must
/// reproduce.
pub fn standard_conic(params: &ModuliParams) -> PlaneCurve {
    let _ = params;
    PlaneCurve::new(
        pvar("b1")
            .pow(2)
            .sub(&pvar("b0").mul(&pvar("b2"))),
    )
    .expect("conic is homogeneous")
}

/// The conic exactly as printed (`b₁² − b₀b₁`), kept for the typo report.
pub fn printed_conic() -> PlaneCurve {
    PlaneCurve::new(
        pvar("b1")
            .pow(2)
            .sub(&pvar("b0").mul(&pvar("b1"))),
    )
    .expect("homogeneous")
}

pub fn gamma_curve(params: &ModuliParams) -> BiCurve {
    BiCurve::new(params.specialize(&gamma_master())).expect("gamma is bihomogeneous")
}

pub fn sigma_cubic(params: &ModuliParams) -> PlaneCurve {
    PlaneCurve::new(params.specialize(&sigma_master())).expect("sigma is homogeneous")
}

fn bir_from_master(params: &ModuliParams, master: [MultiPoly; 3]) -> BirMapP2 {
    BirMapP2::new([
        params.specialize(&master[0]),
        params.specialize(&master[1]),
        params.specialize(&master[2]),
    ])
    .expect("catalog maps are homogeneous")
}

/// A named plane involution.
pub fn plane_map(params: &ModuliParams, tag: NamedMapTag) -> BirMapP2 {
    match tag {
        NamedMapTag::Tau => bir_from_master(params, tau_master()),
        NamedMapTag::Sigma0 => bir_from_master(params, sigma0_master()),
        NamedMapTag::Sigma1 => bir_from_master(params, sigma1_master()),
        NamedMapTag::SigmaLambda => bir_from_master(params, sigma_lambda_master()),
        NamedMapTag::PsiT => bir_from_master(params, psi_t_master()),
        _ => panic!("not a plane map: {tag:?}"),
    }
}

/// The covering map `Φ̃`.
pub fn phi_tilde(params: &ModuliParams) -> RuledMap {
    let (z, w) = phi_tilde_master();
    RuledMap::new(
        [params.specialize(&z[0]), params.specialize(&z[1])],
        [params.specialize(&w[0]), params.specialize(&w[1])],
    )
    .expect("phi is homogeneous")
}

/// The twist `β_k × β_k` on `P¹×P¹`.
pub fn twist_auto(params: &ModuliParams, k: TorsionIndex) -> group::PPAuto {
    let b = crate::elliptic::beta(k, &params.lambda_poly());
    group::PPAuto {
        mz: b.clone(),
        mw: b,
        swap: false,
    }
}

/// The factor exchange `(z, w) ↦ (w, z)`.
pub fn swap_auto() -> group::PPAuto {
    group::PPAuto {
        mz: MoebiusMap::identity(),
        mw: MoebiusMap::identity(),
        swap: true,
    }
}

/// The equations of the sixteen special curves: the ten lines and the
/// conic (the exceptional objects have no plane equation). These are the
/// candidate contracted factors used when normalising compositions.
pub fn contracted_candidates(params: &ModuliParams) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = standard_lines(params)
        .into_iter()
        .map(|(_, l)| l.poly().clone())
        .collect();
    out.push(standard_conic(params).poly().clone());
    out
}

// ---- Tangency structure of Γ ----

/// The discriminant of `Γ` along a ruling: a binary quartic in the other
/// factor's coordinates. `Ruling::Vertical` eliminates `w` (the quartic is
/// in `z`).
pub fn gamma_ruling_discriminant(
    curve: &BiCurve,
    ruling: crate::projective::Ruling,
) -> MultiPoly {
    let (v1, keep0) = match ruling {
        crate::projective::Ruling::Vertical => ("w1", "w0"),
        crate::projective::Ruling::Horizontal => ("z1", "z0"),
    };
    // Quadratic A·v1² + B·v1·v0 + C·v0² in the eliminated pair.
    let view = curve.poly().univariate_view(v1);
    let strip = |p: &MultiPoly, k: u32| -> MultiPoly {
        p.exact_divide(&MultiPoly::var(keep0).pow(k))
            .expect("bihomogeneous restriction")
    };
    let c = strip(&view[0], 2);
    let b = if view.len() > 1 { strip(&view[1], 1) } else { MultiPoly::zero() };
    let a = if view.len() > 2 { view[2].clone() } else { MultiPoly::zero() };
    // B² − 4AC
    b.pow(2).sub(&a.mul(&c).scale(&sc(4)))
}

/// The tangency ordinate of `Γ` over the vertical line `z = k`: the double
/// root of the restricted binary quadratic, as a projective pair
/// `(den, num)`. The restriction must be a perfect square.
pub fn gamma_vertical_tangency(
    params: &ModuliParams,
    k: TorsionIndex,
) -> Option<(MultiPoly, MultiPoly)> {
    let gamma = gamma_curve(params);
    let at = params.delta_point(k);
    let r = gamma.restrict(crate::projective::Ruling::Vertical, &at);
    // r = A w1² + B w1 w0 + C w0²; a double root needs B² = 4AC and the
    // root is (2A : −B) as (den, num).
    let view = r.univariate_view("w1");
    let c = view
        .first()
        .cloned()
        .unwrap_or_else(MultiPoly::zero)
        .exact_divide(&pvar("w0").pow(2))
        .unwrap_or_else(MultiPoly::zero);
    let b = view
        .get(1)
        .cloned()
        .unwrap_or_else(MultiPoly::zero)
        .exact_divide(&pvar("w0"))
        .unwrap_or_else(MultiPoly::zero);
    let a = view.get(2).cloned().unwrap_or_else(MultiPoly::zero);
    if !b.pow(2).sub(&a.mul(&c).scale(&sc(4))).is_zero() {
        return None;
    }
    if a.is_zero() {
        // Double root at infinity.
        return if b.is_zero() {
            Some((MultiPoly::zero(), MultiPoly::one()))
        } else {
            None
        };
    }
    Some((a.scale(&sc(2)), b.neg()))
}

/// Whether `a = c·b` for a nonzero scalar `c` in the parameters (a
/// rational function of `λ, t` only, with no geometric variables).
pub fn param_scalar_multiple(a: &MultiPoly, b: &MultiPoly) -> bool {
    const GEOM: [&str; 7] = ["b0", "b1", "b2", "z0", "z1", "w0", "w1"];
    let param_only = |p: &MultiPoly| GEOM.iter().all(|v| p.degree_in(v) == 0);
    if a.is_zero() || b.is_zero() {
        return false;
    }
    if let Some(q) = a.exact_divide(b) {
        if param_only(&q) && !q.is_zero() {
            return true;
        }
    }
    if let Some(q) = b.exact_divide(a) {
        if param_only(&q) && !q.is_zero() {
            return true;
        }
    }
    false
}

/// `β_k(t)` as a projective `(den, num)` pair of polynomials.
pub fn beta_of_t(params: &ModuliParams, k: TorsionIndex) -> (MultiPoly, MultiPoly) {
    let b = crate::elliptic::beta(k, &params.lambda_poly());
    let t = params.t_poly();
    // Apply to (1 : t).
    let den = b.m[0].add(&b.m[1].mul(&t));
    let num = b.m[2].add(&b.m[3].mul(&t));
    (den, num)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::Ruling;

    fn params25() -> ModuliParams {
        ModuliParams::rational(sc(2), sc(5)).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(ModuliParams::rational(sc(0), sc(5)).is_err());
        assert!(ModuliParams::rational(sc(2), sc(2)).is_err());
        assert!(ModuliParams::rational_with_s(sc(2), sc(5), sc(1)).is_err());
        // λ = −3, t = 3: s² = 3·2·6 = 36, s = 6.
        assert!(ModuliParams::rational_with_s(sc(-3), sc(3), sc(6)).is_ok());
        assert_eq!(
            ModuliParams::rational(sc(-3), sc(3)).unwrap().solve_s(),
            Some(sc(6))
        );
        assert_eq!(params25().solve_s(), None);
    }

    #[test]
    fn special_points_as_printed() {
        let p = params25();
        let d_lam = special_point(&p, PointId::Lambda);
        assert_eq!(d_lam, ProjPoint::p2_scalars(1, 2, 4));
        let d_t = special_point(&p, PointId::T);
        assert_eq!(d_t, ProjPoint::p2_scalars(1, 5, 25));
    }

    #[test]
    fn line_por_zero_infinity_is_b1() {
        let p = params25();
        let l = standard_line(&p, PointId::Zero, PointId::Infinity);
        assert!(l.same_curve(&PlaneCurve::new(pvar("b1")).unwrap()));
        // D_0 D_t: t·b1 − b2 up to scale.
        let l0t = standard_line(&p, PointId::Zero, PointId::T);
        let expect = PlaneCurve::new(pvar("b1").scale(&sc(5)).sub(&pvar("b2"))).unwrap();
        assert!(l0t.same_curve(&expect));
        // D_1 D_λ: λb0 − (1+λ)b1 + b2.
        let l1l = standard_line(&p, PointId::One, PointId::Lambda);
        let expect = PlaneCurve::new(
            pvar("b0")
                .scale(&sc(2))
                .sub(&pvar("b1").scale(&sc(3)))
                .add(&pvar("b2")),
        )
        .unwrap();
        assert!(l1l.same_curve(&expect));
    }

    #[test]
    fn gamma_is_bidegree_22_and_swap_symmetric() {
        for params in [ModuliParams::symbolic(), params25()] {
            let g = gamma_curve(&params);
            assert_eq!(g.bidegree(), (2, 2));
            assert!(g.same_curve(&g.swap_factors()));
        }
    }

    #[test]
    fn gamma_twist_invariance_symbolic() {
        let params = ModuliParams::symbolic();
        let g = gamma_curve(&params);
        for k in TorsionIndex::ALL {
            let b = crate::elliptic::beta(k, &params.lambda_poly());
            let pulled = g.pullback(&b, &b);
            assert!(
                param_scalar_multiple(pulled.poly(), g.poly()),
                "twist {k:?}"
            );
        }
    }

    #[test]
    fn sigma_passes_through_special_points() {
        for params in [ModuliParams::symbolic(), params25()] {
            let s = sigma_cubic(&params);
            for (id, p) in special_points(&params) {
                assert!(s.contains(&p), "sigma misses D_{}", id.label());
            }
        }
    }

    #[test]
    fn gamma_vertical_tangencies_are_beta_of_t() {
        for params in [ModuliParams::symbolic(), params25()] {
            for k in TorsionIndex::ALL {
                let (den, num) = gamma_vertical_tangency(&params, k)
                    .unwrap_or_else(|| panic!("no double root over {k:?}"));
                let (eden, enum_) = beta_of_t(&params, k);
                // (den : num) == (eden : enum) projectively.
                assert!(
                    den.mul(&enum_).sub(&num.mul(&eden)).is_zero(),
                    "tangency over {k:?}"
                );
            }
        }
    }

    #[test]
    fn gamma_discriminant_roots_are_delta() {
        let params = ModuliParams::symbolic();
        let g = gamma_curve(&params);
        let disc = gamma_ruling_discriminant(&g, Ruling::Vertical);
        // disc vanishes exactly on {0, 1, λ, ∞}: divide by z1, (z1 − z0),
        // (z1 − λ z0), z0 and end with a (λ,t)-scalar.
        let z0 = pvar("z0");
        let z1 = pvar("z1");
        let lam = pvar("lambda");
        let mut q = disc;
        for f in [
            z1.clone(),
            z1.sub(&z0),
            z1.sub(&lam.mul(&z0)),
            z0.clone(),
        ] {
            q = q.exact_divide(&f).expect("disc has the four linear factors");
        }
        assert_eq!(q.degree_in("z0"), 0);
        assert_eq!(q.degree_in("z1"), 0);
        assert!(!q.is_zero());
    }

    #[test]
    fn phi_examples() {
        // Φ̃ at D₀ is undefined; at (1:0:1) with λ=2, t=3 it is
        // (z, w) = (−1/3, 0).
        let params = ModuliParams::rational(sc(2), sc(3)).unwrap();
        let phi = phi_tilde(&params);
        let d0 = special_point(&params, PointId::Zero);
        assert_eq!(
            phi.apply(&d0).unwrap_err(),
            crate::projective::ProjError::Undefined
        );
        let p = ProjPoint::p2_scalars(1, 0, 1);
        let (z, w) = phi.apply(&p).unwrap();
        assert_eq!(
            z.p1_value().unwrap(),
            crate::roots::P1Rat::Finite(ExactScalar::from_ratio(-1, 3))
        );
        assert_eq!(w.p1_value().unwrap(), crate::roots::P1Rat::from_int(0));
        // All five special points are base points.
        for (id, d) in special_points(&params) {
            assert!(
                phi.apply(&d).is_err(),
                "Φ̃ should be undefined at D_{}",
                id.label()
            );
        }
    }

    #[test]
    fn phi_tau_identity_symbolic() {
        let params = ModuliParams::symbolic();
        let phi = phi_tilde(&params);
        let tau = plane_map(&params, NamedMapTag::Tau);
        let cands = contracted_candidates(&params);
        let composed = phi.compose_bir(&tau, &cands);
        assert!(composed.map_equal(&phi));
    }

    #[test]
    fn printed_tau_fails_phi_identity() {
        let params = params25();
        let phi = phi_tilde(&params);
        let tau_printed = bir_from_master(&params, tau_master_printed());
        let composed = phi.compose_bir(&tau_printed, &contracted_candidates(&params));
        assert!(!composed.map_equal(&phi));
    }

    #[test]
    fn covering_conjugacies_symbolic() {
        let params = ModuliParams::symbolic();
        let phi = phi_tilde(&params);
        let cands = contracted_candidates(&params);
        for (tag, k) in [
            (NamedMapTag::Sigma0, TorsionIndex::Zero),
            (NamedMapTag::Sigma1, TorsionIndex::One),
            (NamedMapTag::SigmaLambda, TorsionIndex::Lambda),
        ] {
            let sigma = plane_map(&params, tag);
            let lhs = phi.compose_bir(&sigma, &cands);
            let tw = twist_auto(&params, k);
            let rhs = phi.postcompose(&tw.mz, &tw.mw, tw.swap);
            assert!(lhs.map_equal(&rhs), "conjugacy for {tag:?}");
        }
        // Φ̃ ∘ ψ_T = swap ∘ Φ̃
        let psi = plane_map(&params, NamedMapTag::PsiT);
        let lhs = phi.compose_bir(&psi, &cands);
        let sw = swap_auto();
        let rhs = phi.postcompose(&sw.mz, &sw.mw, sw.swap);
        assert!(lhs.map_equal(&rhs));
    }

    #[test]
    fn involutions_square_to_identity_symbolic() {
        let params = ModuliParams::symbolic();
        let cands = contracted_candidates(&params);
        for tag in [
            NamedMapTag::Tau,
            NamedMapTag::Sigma0,
            NamedMapTag::Sigma1,
            NamedMapTag::SigmaLambda,
            NamedMapTag::PsiT,
        ] {
            let m = plane_map(&params, tag);
            let sq = m.compose(&m, &cands);
            assert!(
                sq.map_equal(&BirMapP2::identity()),
                "{tag:?} squared is not the identity"
            );
        }
    }

    #[test]
    fn tau_fixes_sigma_pointwise_via_ideal_membership() {
        let params = ModuliParams::symbolic();
        let tau = plane_map(&params, NamedMapTag::Tau);
        let sigma = sigma_cubic(&params);
        let b = [pvar("b0"), pvar("b1"), pvar("b2")];
        let c = tau.components();
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let minor = c[i].mul(&b[j]).sub(&c[j].mul(&b[i]));
            let q = minor
                .exact_divide(sigma.poly())
                .expect("minor lies in the ideal (Σ)");
            assert_eq!(q.homogeneous_degree_in(&["b0", "b1", "b2"]), Some(1));
        }
    }
}
