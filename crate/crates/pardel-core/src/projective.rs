//! Projective points, Möbius maps, plane and biprojective curves, and
//! rational maps from the plane to `P¹×P¹`.
//!
//! Conventions: `P¹` points are `(v₀ : v₁)` with affine value `v₁/v₀` and
//! infinity `(0 : 1)`; the plane carries coordinates `(b₀ : b₁ : b₂)`; the
//! two `P¹×P¹` factors use `(z₀, z₁)` and `(w₀, w₁)`. Rational maps are
//! stored with cleared denominators, so a map to `P¹` is a pair
//! `(denominator form, numerator form)`. Equality of points and maps is
//! projective, decided by the vanishing of all 2×2 minors.

use std::collections::BTreeMap;

use crate::poly::{self, poly_det, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::roots::P1Rat;
use crate::scalar::ExactScalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ProjError {
    #[error("degenerate point configuration (points not pairwise distinct)")]
    DegeneratePoints,
    #[error("coincident points do not span a line")]
    CoincidentPoints,
    #[error("map is undefined at the point (base/indeterminacy point)")]
    Undefined,
    #[error("point does not lie on the curve")]
    PointNotOnCurve,
    #[error("curve admits no rational parametrization here")]
    NoRationalParametrization,
    #[error("polynomial is not homogeneous of the expected shape: {0}")]
    NotHomogeneous(String),
    #[error("dimension mismatch")]
    DimensionMismatch,
}

// ---- Points ----

/// A point of `P¹` or `P²` with rational-function coordinates.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec<RatFunc>,
}

impl ProjPoint {
    pub fn new(coords: Vec<RatFunc>) -> Self {
        assert!(
            coords.len() == 2 || coords.len() == 3,
            "only P1 and P2 points supported"
        );
        assert!(coords.iter().any(|c| !c.is_zero()), "all-zero point");
        ProjPoint { coords }
    }

    pub fn p1(a: RatFunc, b: RatFunc) -> Self {
        Self::new(vec![a, b])
    }

    pub fn p2(a: RatFunc, b: RatFunc, c: RatFunc) -> Self {
        Self::new(vec![a, b, c])
    }

    pub fn p1_affine(v: &ExactScalar) -> Self {
        Self::p1(RatFunc::one(), RatFunc::from_scalar(v.clone()))
    }

    pub fn p1_infinity() -> Self {
        Self::p1(RatFunc::zero(), RatFunc::one())
    }

    pub fn from_p1rat(v: &P1Rat) -> Self {
        match v {
            P1Rat::Finite(x) => Self::p1_affine(x),
            P1Rat::Infinity => Self::p1_infinity(),
        }
    }

    pub fn p2_scalars(a: i64, b: i64, c: i64) -> Self {
        Self::p2(
            RatFunc::from_scalar(ExactScalar::from_int(a)),
            RatFunc::from_scalar(ExactScalar::from_int(b)),
            RatFunc::from_scalar(ExactScalar::from_int(c)),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    /// Coordinates with cleared denominators and common factors stripped.
    pub fn as_polys(&self) -> Vec<MultiPoly> {
        let mut den = MultiPoly::one();
        for c in &self.coords {
            den = den.mul(c.den());
        }
        let cleared: Vec<MultiPoly> = self
            .coords
            .iter()
            .map(|c| {
                c.num()
                    .mul(&den.exact_divide(c.den()).expect("den product divides"))
            })
            .collect();
        poly::strip_common_factors(&cleared)
    }

    /// The affine value `v₁/v₀` of a `P¹` point, or `Infinity`.
    pub fn p1_value(&self) -> Option<P1Rat> {
        if self.dim() != 2 {
            return None;
        }
        let p = self.as_polys();
        match (p[0].as_constant(), p[1].as_constant()) {
            (Some(a), Some(b)) => {
                if a.is_zero() {
                    Some(P1Rat::Infinity)
                } else {
                    Some(P1Rat::Finite(&b / &a))
                }
            }
            _ => None,
        }
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let a = self.as_polys();
        let b = other.as_polys();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if !a[i].mul(&b[j]).sub(&a[j].mul(&b[i])).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl Eq for ProjPoint {}

// ---- Möbius maps ----

/// An invertible 2×2 matrix up to scalar, acting on `P¹` column vectors.
#[derive(Clone, Debug)]
pub struct MoebiusMap {
    /// Row-major entries; the image of `(v₀:v₁)` is
    /// `(m₀₀v₀ + m₀₁v₁ : m₁₀v₀ + m₁₁v₁)`.
    pub m: [MultiPoly; 4],
}

impl MoebiusMap {
    pub fn new(m: [MultiPoly; 4]) -> Self {
        let map = MoebiusMap { m };
        assert!(!map.det().is_zero(), "singular Möbius matrix");
        map
    }

    pub fn identity() -> Self {
        Self::new([
            MultiPoly::one(),
            MultiPoly::zero(),
            MultiPoly::zero(),
            MultiPoly::one(),
        ])
    }

    /// The map with affine formula `v ↦ (c + d·v)/(a + b·v)` given rows
    /// `[a, b, c, d]`.
    pub fn from_rows(a: MultiPoly, b: MultiPoly, c: MultiPoly, d: MultiPoly) -> Self {
        Self::new([a, b, c, d])
    }

    pub fn det(&self) -> MultiPoly {
        self.m[0].mul(&self.m[3]).sub(&self.m[1].mul(&self.m[2]))
    }

    pub fn inverse(&self) -> Self {
        Self::new([
            self.m[3].clone(),
            self.m[1].neg(),
            self.m[2].neg(),
            self.m[0].clone(),
        ])
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, ProjError> {
        if p.dim() != 2 {
            return Err(ProjError::DimensionMismatch);
        }
        let v = p.as_polys();
        let a = self.m[0].mul(&v[0]).add(&self.m[1].mul(&v[1]));
        let b = self.m[2].mul(&v[0]).add(&self.m[3].mul(&v[1]));
        if a.is_zero() && b.is_zero() {
            return Err(ProjError::Undefined);
        }
        Ok(ProjPoint::p1(RatFunc::from_poly(a), RatFunc::from_poly(b)))
    }

    pub fn apply_value(&self, v: &P1Rat) -> P1Rat {
        self.apply(&ProjPoint::from_p1rat(v))
            .expect("Möbius maps are everywhere defined")
            .p1_value()
            .expect("scalar input")
    }

    /// `self ∘ inner` as matrices.
    pub fn compose(&self, inner: &MoebiusMap) -> MoebiusMap {
        let a = &self.m;
        let b = &inner.m;
        MoebiusMap::new([
            a[0].mul(&b[0]).add(&a[1].mul(&b[2])),
            a[0].mul(&b[1]).add(&a[1].mul(&b[3])),
            a[2].mul(&b[0]).add(&a[3].mul(&b[2])),
            a[2].mul(&b[1]).add(&a[3].mul(&b[3])),
        ])
    }

    pub fn map_equal(&self, other: &MoebiusMap) -> bool {
        tuple_proportional(&self.m, &other.m)
    }

    /// Substitutes and strips; entries stay polynomial.
    pub fn normalized(&self) -> MoebiusMap {
        let v = poly::strip_common_factors(self.m.as_ref());
        MoebiusMap {
            m: [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()],
        }
    }
}

/// Whether two tuples are proportional (all 2×2 minors vanish).
pub fn tuple_proportional(a: &[MultiPoly], b: &[MultiPoly]) -> bool {
    assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if !a[i].mul(&b[j]).sub(&a[j].mul(&b[i])).is_zero() {
                return false;
            }
        }
    }
    // Exclude the degenerate all-zero case.
    a.iter().any(|p| !p.is_zero()) && b.iter().any(|p| !p.is_zero())
}

/// The map sending `p₁ ↦ 0`, `p₂ ↦ 1`, `p₃ ↦ ∞`.
fn cross_ratio_map(pts: [&ProjPoint; 3]) -> Result<MoebiusMap, ProjError> {
    let p: Vec<Vec<MultiPoly>> = pts.iter().map(|q| q.as_polys()).collect();
    let bracket = |i: usize, j: usize| -> MultiPoly {
        p[i][0].mul(&p[j][1]).sub(&p[i][1].mul(&p[j][0]))
    };
    // Row for v₀ vanishes at p₃, row for v₁ vanishes at p₁; scaled to agree
    // at p₂.
    let c = bracket(1, 0);
    let d = bracket(1, 2);
    let m = [
        c.mul(&p[2][1]),
        c.mul(&p[2][0]).neg(),
        d.mul(&p[0][1]),
        d.mul(&p[0][0]).neg(),
    ];
    let map = MoebiusMap { m };
    if map.det().is_zero() {
        return Err(ProjError::DegeneratePoints);
    }
    Ok(map.normalized())
}

/// The unique Möbius map (up to scalar) sending each source to its target.
pub fn moebius_through(
    pairs: [(&ProjPoint, &ProjPoint); 3],
) -> Result<MoebiusMap, ProjError> {
    let src = cross_ratio_map([pairs[0].0, pairs[1].0, pairs[2].0])?;
    let dst = cross_ratio_map([pairs[0].1, pairs[1].1, pairs[2].1])?;
    Ok(dst.inverse().compose(&src).normalized())
}

// ---- Plane curves ----

const B_VARS: [&str; 3] = ["b0", "b1", "b2"];

/// A primitive homogeneous curve in `P²_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    poly: MultiPoly,
    degree: u32,
}

impl PlaneCurve {
    pub fn new(poly: MultiPoly) -> Result<Self, ProjError> {
        if poly.is_zero() {
            return Err(ProjError::NotHomogeneous("zero polynomial".into()));
        }
        let d = poly
            .homogeneous_degree_in(&B_VARS)
            .ok_or_else(|| ProjError::NotHomogeneous(format!("{poly}")))?;
        if d == 0 {
            return Err(ProjError::NotHomogeneous(
                "degree zero in the plane coordinates".into(),
            ));
        }
        Ok(PlaneCurve {
            poly: poly.primitive_part(),
            degree: d as u32,
        })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval_at(p).is_zero()
    }

    pub fn eval_at(&self, p: &ProjPoint) -> MultiPoly {
        let v = p.as_polys();
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(v)
            .map(|(n, c)| (n.to_string(), c))
            .collect();
        self.poly.subst(&map)
    }

    /// Equality up to a nonzero scalar (both sides are primitive).
    pub fn same_curve(&self, other: &PlaneCurve) -> bool {
        self.poly == other.poly || self.poly == other.poly.neg()
    }
}

/// The line through two distinct points.
pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<PlaneCurve, ProjError> {
    if p.dim() != 3 || q.dim() != 3 {
        return Err(ProjError::DimensionMismatch);
    }
    let a = p.as_polys();
    let b = q.as_polys();
    let cross = vec![
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ];
    if cross.iter().all(|c| c.is_zero()) {
        return Err(ProjError::CoincidentPoints);
    }
    let l = poly::strip_common_factors(&cross);
    let poly = MultiPoly::var("b0")
        .mul(&l[0])
        .add(&MultiPoly::var("b1").mul(&l[1]))
        .add(&MultiPoly::var("b2").mul(&l[2]));
    PlaneCurve::new(poly)
}

// ---- Biprojective curves ----

/// A primitive bihomogeneous curve in `P¹_z × P¹_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiCurve {
    poly: MultiPoly,
    bidegree: (u32, u32),
}

/// A ruling line of `P¹×P¹`: vertical (`z` constant) or horizontal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ruling {
    Vertical,
    Horizontal,
}

impl BiCurve {
    pub fn new(poly: MultiPoly) -> Result<Self, ProjError> {
        if poly.is_zero() {
            return Err(ProjError::NotHomogeneous("zero polynomial".into()));
        }
        let dz = poly
            .homogeneous_degree_in(&["z0", "z1"])
            .ok_or_else(|| ProjError::NotHomogeneous(format!("{poly}")))?;
        let dw = poly
            .homogeneous_degree_in(&["w0", "w1"])
            .ok_or_else(|| ProjError::NotHomogeneous(format!("{poly}")))?;
        Ok(BiCurve {
            poly: poly.primitive_part(),
            bidegree: (dz as u32, dw as u32),
        })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn same_curve(&self, other: &BiCurve) -> bool {
        self.poly == other.poly || self.poly == other.poly.neg()
    }

    /// Restriction to a ruling line through the given `P¹` point: a binary
    /// form in the other factor's coordinates.
    pub fn restrict(&self, ruling: Ruling, at: &ProjPoint) -> MultiPoly {
        let v = at.as_polys();
        let (v0, v1) = match ruling {
            Ruling::Vertical => ("z0", "z1"),
            Ruling::Horizontal => ("w0", "w1"),
        };
        let mut map = BTreeMap::new();
        map.insert(v0.to_string(), v[0].clone());
        map.insert(v1.to_string(), v[1].clone());
        self.poly.subst(&map)
    }

    pub fn contains(&self, z: &ProjPoint, w: &ProjPoint) -> bool {
        let f = self.restrict(Ruling::Vertical, z);
        let wv = w.as_polys();
        let mut map = BTreeMap::new();
        map.insert("w0".to_string(), wv[0].clone());
        map.insert("w1".to_string(), wv[1].clone());
        f.subst(&map).is_zero()
    }

    /// Swaps the two factors.
    pub fn swap_factors(&self) -> BiCurve {
        let mut map = BTreeMap::new();
        map.insert("z0".to_string(), MultiPoly::var("w0"));
        map.insert("z1".to_string(), MultiPoly::var("w1"));
        map.insert("w0".to_string(), MultiPoly::var("z0"));
        map.insert("w1".to_string(), MultiPoly::var("z1"));
        BiCurve::new(self.poly.subst(&map)).expect("swap preserves bihomogeneity")
    }

    /// Substitutes a pair of 2×2 matrices into the two coordinate pairs:
    /// the pullback of the curve along `(mz, mw)` acting on columns.
    pub fn pullback(&self, mz: &MoebiusMap, mw: &MoebiusMap) -> BiCurve {
        let mut map = BTreeMap::new();
        let z0 = MultiPoly::var("z0");
        let z1 = MultiPoly::var("z1");
        let w0 = MultiPoly::var("w0");
        let w1 = MultiPoly::var("w1");
        map.insert("z0".to_string(), mz.m[0].mul(&z0).add(&mz.m[1].mul(&z1)));
        map.insert("z1".to_string(), mz.m[2].mul(&z0).add(&mz.m[3].mul(&z1)));
        map.insert("w0".to_string(), mw.m[0].mul(&w0).add(&mw.m[1].mul(&w1)));
        map.insert("w1".to_string(), mw.m[2].mul(&w0).add(&mw.m[3].mul(&w1)));
        BiCurve::new(self.poly.subst(&map)).expect("linear substitution preserves bidegree")
    }

    /// The image of the curve under the `P¹×P¹` automorphism `(mz, mw)`:
    /// the pullback along the inverse matrices.
    pub fn transform(&self, mz: &MoebiusMap, mw: &MoebiusMap) -> BiCurve {
        self.pullback(&mz.inverse(), &mw.inverse())
    }
}

/// Multiplicity of the intersection of a ruling line with the curve at a
/// point of the line.
pub fn intersection_multiplicity_line(
    curve: &BiCurve,
    ruling: Ruling,
    at: &ProjPoint,
    point_on_other_factor: &ProjPoint,
) -> Result<u32, ProjError> {
    let f = curve.restrict(ruling, at);
    if f.is_zero() {
        // Ruling line contained in the curve; not meaningful here.
        return Err(ProjError::PointNotOnCurve);
    }
    let (v0, v1) = match ruling {
        Ruling::Vertical => ("w0", "w1"),
        Ruling::Horizontal => ("z0", "z1"),
    };
    let p = point_on_other_factor.as_polys();
    // Linear form vanishing at (a : b): b·v0 − a·v1.
    let lin = p[1]
        .mul(&MultiPoly::var(v0))
        .sub(&p[0].mul(&MultiPoly::var(v1)));
    let (_, mult) = f.strip_factor(&lin);
    if mult == 0 {
        return Err(ProjError::PointNotOnCurve);
    }
    Ok(mult)
}

// ---- Rational maps ----

/// A rational self-map of `P²` given by three homogeneous forms of common
/// degree with no common factor (after normalisation).
#[derive(Clone, Debug)]
pub struct BirMapP2 {
    components: [MultiPoly; 3],
}

impl BirMapP2 {
    pub fn new(components: [MultiPoly; 3]) -> Result<Self, ProjError> {
        let mut deg = None;
        for c in &components {
            if c.is_zero() {
                continue;
            }
            let d = c
                .homogeneous_degree_in(&B_VARS)
                .ok_or_else(|| ProjError::NotHomogeneous(format!("{c}")))?;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => {
                    return Err(ProjError::NotHomogeneous(
                        "components of different degrees".into(),
                    ))
                }
                _ => {}
            }
        }
        if deg.is_none() {
            return Err(ProjError::NotHomogeneous("all components zero".into()));
        }
        Ok(BirMapP2 { components })
    }

    pub fn identity() -> Self {
        Self::new([
            MultiPoly::var("b0"),
            MultiPoly::var("b1"),
            MultiPoly::var("b2"),
        ])
        .unwrap()
    }

    pub fn components(&self) -> &[MultiPoly; 3] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.homogeneous_degree_in(&B_VARS).unwrap() as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, ProjError> {
        if p.dim() != 3 {
            return Err(ProjError::DimensionMismatch);
        }
        let v = p.as_polys();
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(v)
            .map(|(n, c)| (n.to_string(), c))
            .collect();
        let img: Vec<MultiPoly> = self.components.iter().map(|c| c.subst(&map)).collect();
        if img.iter().all(|c| c.is_zero()) {
            return Err(ProjError::Undefined);
        }
        Ok(ProjPoint::new(
            img.into_iter().map(RatFunc::from_poly).collect(),
        ))
    }

    /// Raw substitution `self ∘ inner` without factor stripping.
    pub fn compose_raw(&self, inner: &BirMapP2) -> [MultiPoly; 3] {
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(inner.components.iter())
            .map(|(n, c)| (n.to_string(), c.clone()))
            .collect();
        [
            self.components[0].subst(&map),
            self.components[1].subst(&map),
            self.components[2].subst(&map),
        ]
    }

    /// Composition with common factors stripped. Candidate factors (known
    /// contracted curves) are tried by exact division before the generic
    /// gcd-based normalisation.
    pub fn compose(&self, inner: &BirMapP2, candidates: &[MultiPoly]) -> BirMapP2 {
        let raw = self.compose_raw(inner);
        let stripped = strip_with_candidates(&raw, candidates);
        BirMapP2::new([
            stripped[0].clone(),
            stripped[1].clone(),
            stripped[2].clone(),
        ])
        .expect("composition of homogeneous maps is homogeneous")
    }

    pub fn map_equal(&self, other: &BirMapP2) -> bool {
        tuple_proportional(&self.components, &other.components)
    }

    /// Applies the map to a parametrized curve: binary forms in the
    /// parameters.
    pub fn apply_to_param(&self, param: &[MultiPoly; 3]) -> [MultiPoly; 3] {
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(param.iter())
            .map(|(n, c)| (n.to_string(), c.clone()))
            .collect();
        [
            self.components[0].subst(&map),
            self.components[1].subst(&map),
            self.components[2].subst(&map),
        ]
    }
}

/// Strips shared factors from a tuple: candidates first (repeatedly, by
/// exact division), then rational content, then the generic gcd rule.
pub fn strip_with_candidates(forms: &[MultiPoly], candidates: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = forms.to_vec();
    let mut progress = true;
    while progress {
        progress = false;
        for cand in candidates {
            if cand.as_constant().is_some() {
                continue;
            }
            loop {
                let divided: Option<Vec<MultiPoly>> = out
                    .iter()
                    .map(|f| {
                        if f.is_zero() {
                            Some(MultiPoly::zero())
                        } else {
                            f.exact_divide(cand)
                        }
                    })
                    .collect();
                match divided {
                    Some(d) => {
                        out = d;
                        progress = true;
                    }
                    None => break,
                }
            }
        }
    }
    poly::strip_common_factors(&out)
}

/// A rational map `P² ⇢ P¹_z × P¹_w`: two pairs of homogeneous forms. In
/// each pair the first entry is the denominator (the `v₀` output) and the
/// second the numerator.
#[derive(Clone, Debug)]
pub struct RuledMap {
    pub zpair: [MultiPoly; 2],
    pub wpair: [MultiPoly; 2],
}

impl RuledMap {
    pub fn new(zpair: [MultiPoly; 2], wpair: [MultiPoly; 2]) -> Result<Self, ProjError> {
        for pair in [&zpair, &wpair] {
            let mut deg = None;
            for c in pair.iter() {
                if c.is_zero() {
                    continue;
                }
                let d = c
                    .homogeneous_degree_in(&B_VARS)
                    .ok_or_else(|| ProjError::NotHomogeneous(format!("{c}")))?;
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 != d => {
                        return Err(ProjError::NotHomogeneous(
                            "pair entries of different degrees".into(),
                        ))
                    }
                    _ => {}
                }
            }
            if deg.is_none() {
                return Err(ProjError::NotHomogeneous("identically zero pair".into()));
            }
        }
        Ok(RuledMap { zpair, wpair })
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<(ProjPoint, ProjPoint), ProjError> {
        if p.dim() != 3 {
            return Err(ProjError::DimensionMismatch);
        }
        let v = p.as_polys();
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(v)
            .map(|(n, c)| (n.to_string(), c))
            .collect();
        let z0 = self.zpair[0].subst(&map);
        let z1 = self.zpair[1].subst(&map);
        let w0 = self.wpair[0].subst(&map);
        let w1 = self.wpair[1].subst(&map);
        if (z0.is_zero() && z1.is_zero()) || (w0.is_zero() && w1.is_zero()) {
            return Err(ProjError::Undefined);
        }
        Ok((
            ProjPoint::p1(RatFunc::from_poly(z0), RatFunc::from_poly(z1)),
            ProjPoint::p1(RatFunc::from_poly(w0), RatFunc::from_poly(w1)),
        ))
    }

    /// `self ∘ inner` for a plane self-map `inner`, stripped per pair.
    pub fn compose_bir(&self, inner: &BirMapP2, candidates: &[MultiPoly]) -> RuledMap {
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(inner.components().iter())
            .map(|(n, c)| (n.to_string(), c.clone()))
            .collect();
        let z = strip_with_candidates(
            &[self.zpair[0].subst(&map), self.zpair[1].subst(&map)],
            candidates,
        );
        let w = strip_with_candidates(
            &[self.wpair[0].subst(&map), self.wpair[1].subst(&map)],
            candidates,
        );
        RuledMap::new([z[0].clone(), z[1].clone()], [w[0].clone(), w[1].clone()])
            .expect("composition stays homogeneous")
    }

    /// Post-composition with a pair of Möbius matrices acting on the two
    /// factors (optionally swapping them first).
    pub fn postcompose(&self, mz: &MoebiusMap, mw: &MoebiusMap, swap: bool) -> RuledMap {
        let (zp, wp) = if swap {
            (&self.wpair, &self.zpair)
        } else {
            (&self.zpair, &self.wpair)
        };
        let z = [
            mz.m[0].mul(&zp[0]).add(&mz.m[1].mul(&zp[1])),
            mz.m[2].mul(&zp[0]).add(&mz.m[3].mul(&zp[1])),
        ];
        let w = [
            mw.m[0].mul(&wp[0]).add(&mw.m[1].mul(&wp[1])),
            mw.m[2].mul(&wp[0]).add(&mw.m[3].mul(&wp[1])),
        ];
        RuledMap::new(z, w).expect("linear postcomposition stays homogeneous")
    }

    pub fn map_equal(&self, other: &RuledMap) -> bool {
        tuple_proportional(&self.zpair, &other.zpair)
            && tuple_proportional(&self.wpair, &other.wpair)
    }

    pub fn apply_to_param(&self, param: &[MultiPoly; 3]) -> ([MultiPoly; 2], [MultiPoly; 2]) {
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(param.iter())
            .map(|(n, c)| (n.to_string(), c.clone()))
            .collect();
        (
            [self.zpair[0].subst(&map), self.zpair[1].subst(&map)],
            [self.wpair[0].subst(&map), self.wpair[1].subst(&map)],
        )
    }

    /// Pullback of a bihomogeneous curve: substitutes the four forms.
    pub fn pullback_curve(&self, curve: &BiCurve) -> MultiPoly {
        let mut map = BTreeMap::new();
        map.insert("z0".to_string(), self.zpair[0].clone());
        map.insert("z1".to_string(), self.zpair[1].clone());
        map.insert("w0".to_string(), self.wpair[0].clone());
        map.insert("w1".to_string(), self.wpair[1].clone());
        curve.poly().subst(&map)
    }
}

/// Critical locus of a map to `P¹×P¹`: the determinant of the matrix whose
/// rows are the cross-form gradients of the two components and the
/// coordinate vector. Returned primitive, before any factor stripping.
pub fn critical_locus(map: &RuledMap) -> MultiPoly {
    let grad = |p: &MultiPoly| -> [MultiPoly; 3] {
        [
            p.derivative("b0"),
            p.derivative("b1"),
            p.derivative("b2"),
        ]
    };
    let cross_row = |den: &MultiPoly, num: &MultiPoly| -> Vec<MultiPoly> {
        let gn = grad(num);
        let gd = grad(den);
        (0..3)
            .map(|i| den.mul(&gn[i]).sub(&num.mul(&gd[i])))
            .collect()
    };
    let rows = vec![
        cross_row(&map.zpair[0], &map.zpair[1]),
        cross_row(&map.wpair[0], &map.wpair[1]),
        vec![
            MultiPoly::var("b0"),
            MultiPoly::var("b1"),
            MultiPoly::var("b2"),
        ],
    ];
    let det = poly_det(&rows);
    if det.is_zero() {
        det
    } else {
        det.primitive_part()
    }
}

// ---- Parametrizations and contraction ----

/// A rational parametrization of a plane curve: three binary forms in
/// `(u, v)`.
pub type CurveParam = [MultiPoly; 3];

/// Parametrizes a line `ℓ·b = 0` by two rational points on it.
pub fn parametrize_line(line: &PlaneCurve) -> Result<CurveParam, ProjError> {
    if line.degree() != 1 {
        return Err(ProjError::NoRationalParametrization);
    }
    // Line coefficients (possibly polynomials in the parameters).
    let lp: Vec<MultiPoly> = {
        let p = line.poly();
        (0..3)
            .map(|i| {
                let v = ["b0", "b1", "b2"][i];
                let view = p.univariate_view(v);
                if view.len() > 1 {
                    view[1].clone()
                } else {
                    MultiPoly::zero()
                }
            })
            .collect()
    };
    // Two independent points on the line: cross products with basis vectors.
    let candidates = [
        [MultiPoly::zero(), lp[2].clone(), lp[1].neg()],
        [lp[2].neg(), MultiPoly::zero(), lp[0].clone()],
        [lp[1].clone(), lp[0].neg(), MultiPoly::zero()],
    ];
    let mut pts: Vec<[MultiPoly; 3]> = Vec::new();
    for c in candidates {
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        let independent = pts.iter().all(|p| {
            !(0..3).all(|i| {
                (0..3)
                    .filter(|&j| j > i)
                    .all(|j| p[i].mul(&c[j]).sub(&p[j].mul(&c[i])).is_zero())
            })
        });
        if independent || pts.is_empty() {
            pts.push(c);
        }
        if pts.len() == 2 {
            break;
        }
    }
    if pts.len() < 2 {
        return Err(ProjError::NoRationalParametrization);
    }
    let u = MultiPoly::var("u");
    let v = MultiPoly::var("v");
    Ok([
        pts[0][0].mul(&u).add(&pts[1][0].mul(&v)),
        pts[0][1].mul(&u).add(&pts[1][1].mul(&v)),
        pts[0][2].mul(&u).add(&pts[1][2].mul(&v)),
    ])
}

/// Parametrizes a smooth conic by projection from a rational point on it.
pub fn parametrize_conic(
    conic: &PlaneCurve,
    base: &ProjPoint,
) -> Result<CurveParam, ProjError> {
    if conic.degree() != 2 {
        return Err(ProjError::NoRationalParametrization);
    }
    if !conic.contains(base) {
        return Err(ProjError::PointNotOnCurve);
    }
    let x = base.as_polys();
    let u = MultiPoly::var("u");
    let v = MultiPoly::var("v");
    // Direction vector y = (0, u, v); lines x + s·y sweep the plane.
    let y = [MultiPoly::zero(), u.clone(), v.clone()];
    let c = conic.poly();
    let subst_point = |pt: &[MultiPoly]| -> MultiPoly {
        let map: BTreeMap<String, MultiPoly> = B_VARS
            .iter()
            .zip(pt.iter())
            .map(|(n, p)| (n.to_string(), p.clone()))
            .collect();
        c.subst(&map)
    };
    // C(x + s y) = C(x) + s·B(x,y) + s²·C(y) with C(x) = 0; the second
    // intersection is at s = −B(x,y)/C(y), giving C(y)·x − B(x,y)·y.
    let cy = subst_point(&y);
    let bxy = {
        // B(x,y) = C(x+y) − C(x) − C(y)
        let xy: Vec<MultiPoly> = (0..3).map(|i| x[i].add(&y[i])).collect();
        subst_point(&xy).sub(&subst_point(&x)).sub(&cy)
    };
    let comps: Vec<MultiPoly> = (0..3)
        .map(|i| cy.mul(&x[i]).sub(&bxy.mul(&y[i])))
        .collect();
    let s = poly::strip_common_factors(&comps);
    if s.iter().all(|p| p.is_zero()) {
        return Err(ProjError::NoRationalParametrization);
    }
    Ok([s[0].clone(), s[1].clone(), s[2].clone()])
}

/// Whether a parametrized image triple is projectively constant; returns
/// the image point if so.
pub fn constant_image(forms: &[MultiPoly]) -> Option<ProjPoint> {
    let n = forms.len();
    // Cross-minors at two independent parameter values must vanish.
    for i in 0..n {
        for j in i + 1..n {
            let m = forms[i].mul(&shift_uv(&forms[j])).sub(&forms[j].mul(&shift_uv(&forms[i])));
            if !m.is_zero() {
                return None;
            }
        }
    }
    // Evaluate at parameter values until nonzero.
    for (a, b) in [(1i64, 0i64), (0, 1), (1, 1), (1, 2), (2, 1), (1, -1)] {
        let mut assign = BTreeMap::new();
        assign.insert("u".to_string(), MultiPoly::from_int(a));
        assign.insert("v".to_string(), MultiPoly::from_int(b));
        let vals: Vec<MultiPoly> = forms
            .iter()
            .map(|f| {
                let map: BTreeMap<String, MultiPoly> = assign.clone();
                f.subst(&map)
            })
            .collect();
        if vals.iter().any(|p| !p.is_zero()) {
            return Some(ProjPoint::new(
                vals.into_iter().map(RatFunc::from_poly).collect(),
            ));
        }
    }
    None
}

/// Renames `(u, v)` to fresh parameters, so minors compare the same map at
/// two independent parameter values.
fn shift_uv(p: &MultiPoly) -> MultiPoly {
    let mut map = BTreeMap::new();
    map.insert("u".to_string(), MultiPoly::var("u2"));
    map.insert("v".to_string(), MultiPoly::var("v2"));
    p.subst(&map)
}

/// Outcome of a contraction test.
#[derive(Clone, Debug)]
pub enum Contraction {
    Contracted(ProjPoint),
    NotContracted,
}

/// Evaluates the map along a parametrized curve and reports whether the
/// image is a single point.
pub fn contracts_to(map: &BirMapP2, param: &CurveParam) -> Contraction {
    let img = map.apply_to_param(param);
    match constant_image(&img) {
        Some(p) => Contraction::Contracted(p),
        None => Contraction::NotContracted,
    }
}

/// Substitutes a parametrized curve into a plane curve's equation; the
/// result vanishes identically iff the image lies inside the curve.
pub fn image_in_curve(map: &BirMapP2, param: &CurveParam, target: &PlaneCurve) -> bool {
    let img = map.apply_to_param(param);
    let m: BTreeMap<String, MultiPoly> = B_VARS
        .iter()
        .zip(img.iter())
        .map(|(n, c)| (n.to_string(), c.clone()))
        .collect();
    target.poly().subst(&m).is_zero()
}
