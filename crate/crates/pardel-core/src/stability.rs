//! The finite symbolic catalog of rank-2 parabolic bundles over `(C, T)`
//! and its weight-chamber stability calculus.
//!
//! Descriptors are symbolic: a degree-0 line bundle is a [`DivisorClass`],
//! so torsion coincidences are detected exactly. The destabilising
//! candidates for each catalog type are the finitely many named subbundles
//! together with a generic degree −1 subbundle through both parabolic
//! points; lower degrees are never minimal once these are present.

use std::fmt;

use crate::elliptic::{CurveParams, DivisorClass, TorsionIndex};
use crate::scalar::ExactScalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StabilityError {
    #[error("weights must lie in [0, 1]")]
    WeightOutOfRange,
    #[error("subbundle is not admissible for this bundle type")]
    InadmissibleSubbundle,
    #[error("bundle is not strictly semistable on a wall here")]
    NotOnWall,
    #[error("bundle is not strictly semistable at these weights")]
    NotStrictlySemistable,
    #[error("descriptor violates the catalog incidence constraints: {0}")]
    InvalidDescriptor(String),
}

/// A weight vector `(μ₁, μ₂) ∈ [0,1]²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub mu1: ExactScalar,
    pub mu2: ExactScalar,
}

impl WeightVector {
    pub fn new(mu1: ExactScalar, mu2: ExactScalar) -> Result<Self, StabilityError> {
        for m in [&mu1, &mu2] {
            if m.is_negative() || m.cmp_value(&ExactScalar::one()) == std::cmp::Ordering::Greater {
                return Err(StabilityError::WeightOutOfRange);
            }
        }
        Ok(WeightVector { mu1, mu2 })
    }

    pub fn of(m1: (i64, i64), m2: (i64, i64)) -> Self {
        Self::new(
            ExactScalar::from_ratio(m1.0, m1.1),
            ExactScalar::from_ratio(m2.0, m2.1),
        )
        .unwrap()
    }
}

/// Which parabolic points a subbundle passes through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Incidence {
    pub t1: bool,
    pub t2: bool,
}

impl Incidence {
    pub const NONE: Incidence = Incidence { t1: false, t2: false };
    pub const T1: Incidence = Incidence { t1: true, t2: false };
    pub const T2: Incidence = Incidence { t1: false, t2: true };
    pub const BOTH: Incidence = Incidence { t1: true, t2: true };
}

/// A destabilising candidate: a line subbundle with its degree and the
/// parabolic points it passes through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubbundleDescriptor {
    pub degree: i64,
    pub through: Incidence,
    /// Which named subbundle this is, for witnesses.
    pub label: String,
}

/// Underlying bundle of a catalog entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Underlying {
    /// The unique nontrivial extension of `O(w_∞)` by `O` (odd degree).
    E1,
    /// `L ⊕ L⁻¹(w_∞)` with `L` of degree 0 (odd degree).
    SplitOdd { l: DivisorClass },
    /// `L ⊕ L⁻¹` with `L` of degree 0, not 2-torsion (even degree).
    SplitEven { l: DivisorClass },
    /// `E₀ ⊗ L_k` (even degree, indecomposable).
    E0Twist { k: TorsionIndex },
    /// `L_k ⊕ L_k` (even degree).
    TorsionDouble { k: TorsionIndex },
}

/// Parabolic configuration, following the catalog's enumerated cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Config {
    /// `E₁`: directions not on a common degree-0 subbundle.
    E1Generic,
    /// `E₁`: both directions on the common `L` (the class stored in the
    /// descriptor); the wall-crossing bundle `E_<(L)`.
    E1CommonL { l: DivisorClass },
    /// `L ⊕ L⁻¹(w_∞)`: directions off `L⁻¹(w_∞)`, not on a common
    /// degree-0 subbundle; the bundle `E_>(L)`.
    OddGreater,
    /// `L ⊕ L⁻¹(w_∞)`: both directions on one degree-0 subbundle; `E_=(L)`.
    OddEqual,
    /// `L ⊕ L⁻¹(w_∞)`: the boundary case with `m_i` on `L⁻¹(w_∞)`.
    OddOnLinvWinf { at_t1: bool },
    /// `L ⊕ L⁻¹`: no direction on `L` or `L⁻¹`.
    EvenGeneric,
    /// `m₁ ∈ L`, `m₂` outside both: `F_<(L)`.
    EvenLess,
    /// `m₂ ∈ L⁻¹`, `m₁` outside both: `F_>(L)`.
    EvenGreater,
    /// `m₁ ∈ L`, `m₂ ∈ L⁻¹`: `F_=(L)`.
    EvenEqual,
    /// `E₀ ⊗ L_k`: no direction on `L_k`.
    TwistGeneric,
    /// `E₀ ⊗ L_k`: exactly one direction on `L_k`; `F_<` / `F_>`.
    TwistOn { at_t1: bool },
    /// `L_k ⊕ L_k`: directions not on the same copy; `F_=(L_k)`.
    DoubleDistinct,
}

/// A catalog entry: an underlying bundle together with its parabolic
/// incidence configuration.
#[derive(Clone, Debug, Eq)]
pub struct BundleDescriptor {
    pub underlying: Underlying,
    pub config: Config,
    /// Display name for reports; not part of equality.
    pub name: String,
}

impl PartialEq for BundleDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.underlying == other.underlying && self.config == other.config
    }
}

impl fmt::Display for BundleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl BundleDescriptor {
    pub fn new(
        underlying: Underlying,
        config: Config,
        name: &str,
    ) -> Result<Self, StabilityError> {
        let ok = matches!(
            (&underlying, &config),
            (Underlying::E1, Config::E1Generic)
                | (Underlying::E1, Config::E1CommonL { .. })
                | (Underlying::SplitOdd { .. }, Config::OddGreater)
                | (Underlying::SplitOdd { .. }, Config::OddEqual)
                | (Underlying::SplitOdd { .. }, Config::OddOnLinvWinf { .. })
                | (Underlying::SplitEven { .. }, Config::EvenGeneric)
                | (Underlying::SplitEven { .. }, Config::EvenLess)
                | (Underlying::SplitEven { .. }, Config::EvenGreater)
                | (Underlying::SplitEven { .. }, Config::EvenEqual)
                | (Underlying::E0Twist { .. }, Config::TwistGeneric)
                | (Underlying::E0Twist { .. }, Config::TwistOn { .. })
                | (Underlying::TorsionDouble { .. }, Config::DoubleDistinct)
        );
        if !ok {
            return Err(StabilityError::InvalidDescriptor(format!(
                "{underlying:?} with {config:?}"
            )));
        }
        Ok(BundleDescriptor {
            underlying,
            config,
            name: name.to_string(),
        })
    }

    /// Degree of the underlying bundle.
    pub fn degree(&self) -> i64 {
        match self.underlying {
            Underlying::E1 | Underlying::SplitOdd { .. } => 1,
            _ => 0,
        }
    }

    pub fn determinant_parity_odd(&self) -> bool {
        self.degree() % 2 != 0
    }

    /// Whether the underlying vector bundle is indecomposable.
    pub fn is_indecomposable(&self) -> bool {
        matches!(
            self.underlying,
            Underlying::E1 | Underlying::E0Twist { .. }
        )
    }

    /// The admissible destabilising candidates for this configuration.
    pub fn admissible_subbundles(&self) -> Vec<SubbundleDescriptor> {
        let sb = |degree: i64, through: Incidence, label: &str| SubbundleDescriptor {
            degree,
            through,
            label: label.to_string(),
        };
        let deg_minus_one = sb(-1, Incidence::BOTH, "generic deg -1 through both");
        let mut v = match (&self.underlying, &self.config) {
            (Underlying::E1, Config::E1Generic) => vec![
                sb(0, Incidence::T1, "deg 0 through m1"),
                sb(0, Incidence::T2, "deg 0 through m2"),
                sb(0, Incidence::NONE, "deg 0 through neither"),
            ],
            (Underlying::E1, Config::E1CommonL { .. }) => vec![
                sb(0, Incidence::BOTH, "common L"),
                sb(0, Incidence::T1, "deg 0 through m1"),
                sb(0, Incidence::T2, "deg 0 through m2"),
                sb(0, Incidence::NONE, "deg 0 through neither"),
            ],
            (Underlying::SplitOdd { .. }, Config::OddGreater) => vec![
                sb(1, Incidence::NONE, "L^-1(w_inf)"),
                sb(0, Incidence::T1, "deg 0 through m1"),
                sb(0, Incidence::T2, "deg 0 through m2"),
                sb(0, Incidence::NONE, "deg 0 through neither"),
            ],
            (Underlying::SplitOdd { .. }, Config::OddEqual) => vec![
                sb(1, Incidence::NONE, "L^-1(w_inf)"),
                sb(0, Incidence::BOTH, "common L"),
                sb(0, Incidence::T1, "deg 0 through m1"),
                sb(0, Incidence::T2, "deg 0 through m2"),
                sb(0, Incidence::NONE, "deg 0 through neither"),
            ],
            (Underlying::SplitOdd { .. }, Config::OddOnLinvWinf { at_t1 }) => {
                let inc = if *at_t1 { Incidence::T1 } else { Incidence::T2 };
                let other = if *at_t1 { Incidence::T2 } else { Incidence::T1 };
                vec![
                    sb(1, inc, "L^-1(w_inf)"),
                    sb(0, other, "deg 0 through the other direction"),
                    sb(0, Incidence::NONE, "deg 0 through neither"),
                ]
            }
            (Underlying::SplitEven { .. }, Config::EvenGeneric) => vec![
                sb(0, Incidence::NONE, "L"),
                sb(0, Incidence::NONE, "L^-1"),
            ],
            (Underlying::SplitEven { .. }, Config::EvenLess) => vec![
                sb(0, Incidence::T1, "L"),
                sb(0, Incidence::NONE, "L^-1"),
            ],
            (Underlying::SplitEven { .. }, Config::EvenGreater) => vec![
                sb(0, Incidence::NONE, "L"),
                sb(0, Incidence::T2, "L^-1"),
            ],
            (Underlying::SplitEven { .. }, Config::EvenEqual) => vec![
                sb(0, Incidence::T1, "L"),
                sb(0, Incidence::T2, "L^-1"),
            ],
            (Underlying::E0Twist { .. }, Config::TwistGeneric) => {
                vec![sb(0, Incidence::NONE, "L_k")]
            }
            (Underlying::E0Twist { .. }, Config::TwistOn { at_t1 }) => {
                let inc = if *at_t1 { Incidence::T1 } else { Incidence::T2 };
                vec![sb(0, inc, "L_k")]
            }
            (Underlying::TorsionDouble { .. }, Config::DoubleDistinct) => vec![
                sb(0, Incidence::T1, "L_k copy through m1"),
                sb(0, Incidence::T2, "L_k copy through m2"),
                sb(0, Incidence::NONE, "L_k copy through neither"),
            ],
            _ => unreachable!("constructor rejects other combinations"),
        };
        v.push(deg_minus_one);
        v
    }
}

/// The parabolic index
/// `ind_μ(E, L) = deg E − 2 deg L + Σ_{pᵢ ∉ L} μᵢ − Σ_{pᵢ ⊂ L} μᵢ`.
pub fn parabolic_index(
    e: &BundleDescriptor,
    l: &SubbundleDescriptor,
    mu: &WeightVector,
) -> Result<ExactScalar, StabilityError> {
    if !e.admissible_subbundles().iter().any(|s| s.degree == l.degree && s.through == l.through) {
        return Err(StabilityError::InadmissibleSubbundle);
    }
    Ok(index_unchecked(e, l, mu))
}

fn index_unchecked(
    e: &BundleDescriptor,
    l: &SubbundleDescriptor,
    mu: &WeightVector,
) -> ExactScalar {
    let mut acc = ExactScalar::from_int(e.degree() - 2 * l.degree);
    for (on_l, m) in [(l.through.t1, &mu.mu1), (l.through.t2, &mu.mu2)] {
        if on_l {
            acc = &acc - m;
        } else {
            acc = &acc + m;
        }
    }
    acc
}

/// Classification of a bundle at given weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Stable,
    StrictlySemistable(SubbundleDescriptor),
    Unstable(SubbundleDescriptor),
}

/// Minimises the parabolic index over the admissible subbundles.
pub fn classify(e: &BundleDescriptor, mu: &WeightVector) -> Classification {
    let mut min: Option<(ExactScalar, SubbundleDescriptor)> = None;
    for l in e.admissible_subbundles() {
        let v = index_unchecked(e, &l, mu);
        let replace = match &min {
            None => true,
            Some((best, _)) => v.cmp_value(best) == std::cmp::Ordering::Less,
        };
        if replace {
            min = Some((v, l));
        }
    }
    let (v, witness) = min.expect("catalog types always have candidates");
    match v.cmp_value(&ExactScalar::zero()) {
        std::cmp::Ordering::Greater => Classification::Stable,
        std::cmp::Ordering::Equal => Classification::StrictlySemistable(witness),
        std::cmp::Ordering::Less => Classification::Unstable(witness),
    }
}

/// The descriptor representing the same moduli point in the opposite
/// chamber. `E_< ↔ E_>` and `F_< ↔ F_>`; the polystable `E_=`/`F_=`
/// representatives are their own partners.
pub fn wall_partner(e: &BundleDescriptor) -> Result<BundleDescriptor, StabilityError> {
    match (&e.underlying, &e.config) {
        (Underlying::E1, Config::E1CommonL { l }) => BundleDescriptor::new(
            Underlying::SplitOdd { l: l.clone() },
            Config::OddGreater,
            &format!("E_>({})", l.reduction),
        )
        .map_err(|_| StabilityError::NotOnWall),
        (Underlying::SplitOdd { l }, Config::OddGreater) => BundleDescriptor::new(
            Underlying::E1,
            Config::E1CommonL { l: l.clone() },
            &format!("E_<({})", l.reduction),
        )
        .map_err(|_| StabilityError::NotOnWall),
        (Underlying::SplitOdd { .. }, Config::OddEqual) => Ok(e.clone()),
        (Underlying::SplitEven { l }, Config::EvenLess) => BundleDescriptor::new(
            Underlying::SplitEven { l: l.clone() },
            Config::EvenGreater,
            &format!("F_>({})", l.reduction),
        )
        .map_err(|_| StabilityError::NotOnWall),
        (Underlying::SplitEven { l }, Config::EvenGreater) => BundleDescriptor::new(
            Underlying::SplitEven { l: l.clone() },
            Config::EvenLess,
            &format!("F_<({})", l.reduction),
        )
        .map_err(|_| StabilityError::NotOnWall),
        (Underlying::SplitEven { .. }, Config::EvenEqual) => Ok(e.clone()),
        (Underlying::E0Twist { k }, Config::TwistOn { at_t1 }) => BundleDescriptor::new(
            Underlying::E0Twist { k: *k },
            Config::TwistOn { at_t1: !at_t1 },
            &format!("F_{}(L_{k:?})", if *at_t1 { ">" } else { "<" }),
        )
        .map_err(|_| StabilityError::NotOnWall),
        (Underlying::TorsionDouble { .. }, Config::DoubleDistinct) => Ok(e.clone()),
        _ => Err(StabilityError::NotOnWall),
    }
}

/// A graded (s-equivalence) summand: a line-bundle class with the parabolic
/// points it carries.
pub type GradedPiece = (DivisorClass, Incidence);

/// The Jordan–Hölder graded object of a strictly semistable bundle: an
/// unordered pair of parabolic line-bundle summands.
pub fn graded(
    c: &CurveParams,
    e: &BundleDescriptor,
    mu: &WeightVector,
) -> Result<[GradedPiece; 2], StabilityError> {
    let Classification::StrictlySemistable(witness) = classify(e, mu) else {
        return Err(StabilityError::NotStrictlySemistable);
    };
    // The witness subbundle and the quotient det ⊗ witness⁻¹, with
    // complementary parabolic support.
    let l_class = witness_class(c, e, &witness)?;
    let det = determinant_class(c, e);
    let quotient = det.tensor(c, &l_class.inverse());
    let co = Incidence {
        t1: !witness.through.t1,
        t2: !witness.through.t2,
    };
    Ok([(l_class, witness.through), (quotient, co)])
}

/// Determinant of the underlying bundle as a divisor class.
pub fn determinant_class(c: &CurveParams, e: &BundleDescriptor) -> DivisorClass {
    match &e.underlying {
        Underlying::E1 | Underlying::SplitOdd { .. } => DivisorClass {
            degree: 1,
            reduction: crate::elliptic::EllipticPoint::Infinity,
        },
        Underlying::SplitEven { .. } => DivisorClass::trivial(),
        Underlying::E0Twist { k } | Underlying::TorsionDouble { k } => {
            let lk = DivisorClass::torsion(c, *k);
            lk.tensor(c, &lk) // = O, torsion squared
        }
    }
}

fn witness_class(
    c: &CurveParams,
    e: &BundleDescriptor,
    w: &SubbundleDescriptor,
) -> Result<DivisorClass, StabilityError> {
    match (&e.underlying, &e.config) {
        (Underlying::E1, Config::E1CommonL { l }) => Ok(l.clone()),
        (Underlying::SplitOdd { l }, cfg) => {
            if w.degree == 1 {
                // L⁻¹(w_∞)
                Ok(l.inverse().twist_winf(1))
            } else if w.through == Incidence::BOTH {
                Ok(l.clone())
            } else {
                match cfg {
                    Config::OddGreater | Config::OddEqual | Config::OddOnLinvWinf { .. } => {
                        Ok(l.clone())
                    }
                    _ => Err(StabilityError::NotStrictlySemistable),
                }
            }
        }
        (Underlying::SplitEven { l }, _) => {
            if w.label == "L" {
                Ok(l.clone())
            } else {
                Ok(l.inverse())
            }
        }
        (Underlying::E0Twist { k }, _) | (Underlying::TorsionDouble { k }, _) => {
            Ok(DivisorClass::torsion(c, *k))
        }
        (Underlying::E1, _) => Err(StabilityError::NotStrictlySemistable),
    }
}

/// Whether two graded objects agree as unordered pairs.
pub fn graded_equal(a: &[GradedPiece; 2], b: &[GradedPiece; 2]) -> bool {
    (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{group_mul, sample_curve_with_point};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (CurveParams, DivisorClass) {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (c, p) = sample_curve_with_point(&mut rng);
        let l = DivisorClass::from_point(&p);
        (c, l)
    }

    fn e_less(l: &DivisorClass) -> BundleDescriptor {
        BundleDescriptor::new(
            Underlying::E1,
            Config::E1CommonL { l: l.clone() },
            "E_<(L)",
        )
        .unwrap()
    }

    #[test]
    fn index_formulas_match_hand_computation() {
        let (_c, l) = setup();
        let e = e_less(&l);
        let mu = WeightVector::of((1, 3), (1, 5));
        let common = SubbundleDescriptor {
            degree: 0,
            through: Incidence::BOTH,
            label: "common L".into(),
        };
        // 1 − μ₁ − μ₂
        let idx = parabolic_index(&e, &common, &mu).unwrap();
        let expect = &(&ExactScalar::one() - &mu.mu1) - &mu.mu2;
        assert_eq!(idx, expect);
        // deg 0 through neither at (1/2, 1/2): index 2.
        let e_gen = BundleDescriptor::new(Underlying::E1, Config::E1Generic, "E1 generic").unwrap();
        let none = SubbundleDescriptor {
            degree: 0,
            through: Incidence::NONE,
            label: "deg 0 through neither".into(),
        };
        let mu_half = WeightVector::of((1, 2), (1, 2));
        assert_eq!(
            parabolic_index(&e_gen, &none, &mu_half).unwrap(),
            ExactScalar::from_int(2)
        );
        // Even: L through t1 only gives −μ₁ + μ₂.
        let f_less = BundleDescriptor::new(
            Underlying::SplitEven { l: l.clone() },
            Config::EvenLess,
            "F_<(L)",
        )
        .unwrap();
        let through_t1 = SubbundleDescriptor {
            degree: 0,
            through: Incidence::T1,
            label: "L".into(),
        };
        let idx = parabolic_index(&f_less, &through_t1, &mu).unwrap();
        assert_eq!(idx, &mu.mu2 - &mu.mu1);
        // Inadmissible: deg 0 through both for the generic E1.
        assert_eq!(
            parabolic_index(&e_gen, &common, &mu).unwrap_err(),
            StabilityError::InadmissibleSubbundle
        );
    }

    #[test]
    fn chamber_classification_of_e_less() {
        let (_c, l) = setup();
        let e = e_less(&l);
        assert_eq!(classify(&e, &WeightVector::of((1, 4), (1, 4))), Classification::Stable);
        match classify(&e, &WeightVector::of((3, 4), (3, 4))) {
            Classification::Unstable(w) => assert_eq!(w.through, Incidence::BOTH),
            other => panic!("expected unstable, got {other:?}"),
        }
        match classify(&e, &WeightVector::of((1, 2), (1, 2))) {
            Classification::StrictlySemistable(w) => assert_eq!(w.through, Incidence::BOTH),
            other => panic!("expected strictly semistable, got {other:?}"),
        }
    }

    #[test]
    fn f_equal_strictly_semistable_on_diagonal() {
        let (_c, l) = setup();
        let f_eq = BundleDescriptor::new(
            Underlying::SplitEven { l: l.clone() },
            Config::EvenEqual,
            "F_=(L)",
        )
        .unwrap();
        for (n, d) in [(1i64, 5i64), (1, 2), (4, 5)] {
            let mu = WeightVector::of((n, d), (n, d));
            assert!(matches!(
                classify(&f_eq, &mu),
                Classification::StrictlySemistable(_)
            ));
        }
        assert!(matches!(
            classify(&f_eq, &WeightVector::of((1, 3), (2, 3))),
            Classification::Unstable(_) | Classification::StrictlySemistable(_)
        ));
    }

    #[test]
    fn wall_partner_involutive_and_graded_equal() {
        let (c, l) = setup();
        let e = e_less(&l);
        let partner = wall_partner(&e).unwrap();
        assert_eq!(wall_partner(&partner).unwrap(), e);
        let mu = WeightVector::of((1, 2), (1, 2));
        let ga = graded(&c, &e, &mu).unwrap();
        let gb = graded(&c, &partner, &mu).unwrap();
        assert!(graded_equal(&ga, &gb));
        // gr E_<(L) = {(L, both), (L⁻¹(w_∞), none)}
        let expect_l = (l.clone(), Incidence::BOTH);
        let expect_q = (l.inverse().twist_winf(1), Incidence::NONE);
        assert!(graded_equal(&ga, &[expect_l, expect_q]));
    }

    #[test]
    fn torsion_double_graded() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let (c, _p) = sample_curve_with_point(&mut rng);
        let f_eq = BundleDescriptor::new(
            Underlying::TorsionDouble { k: TorsionIndex::Zero },
            Config::DoubleDistinct,
            "F_=(L_0)",
        )
        .unwrap();
        let mu = WeightVector::of((1, 3), (1, 3));
        let g = graded(&c, &f_eq, &mu).unwrap();
        let lk = DivisorClass::torsion(&c, TorsionIndex::Zero);
        assert!(graded_equal(
            &g,
            &[(lk.clone(), Incidence::T1), (lk.clone(), Incidence::T2)]
        ));
        // L_k classes are 2-torsion: L_k = L_k^{-1}.
        assert_eq!(lk, lk.inverse());
    }

    #[test]
    fn index_affine_in_weights() {
        // Evaluate at three weight vectors and check affinity with
        // coefficients in {−1, 0, 1}.
        let (_c, l) = setup();
        let e = e_less(&l);
        for sub in e.admissible_subbundles() {
            let at = |m1: (i64, i64), m2: (i64, i64)| {
                index_unchecked(&e, &sub, &WeightVector::of(m1, m2))
            };
            let v00 = at((0, 1), (0, 1));
            let v10 = at((1, 1), (0, 1));
            let v01 = at((0, 1), (1, 1));
            let c1 = &v10 - &v00;
            let c2 = &v01 - &v00;
            for coeff in [&c1, &c2] {
                assert!(
                    coeff.is_one()
                        || coeff.is_zero()
                        || *coeff == ExactScalar::from_int(-1)
                );
            }
            // Affinity: value at (1,1) equals v00 + c1 + c2.
            let v11 = at((1, 1), (1, 1));
            assert_eq!(v11, &(&v00 + &c1) + &c2);
        }
    }

    #[test]
    fn torsion_coincidence_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let (c, p) = sample_curve_with_point(&mut rng);
        let l = DivisorClass::from_point(&p);
        assert_eq!(l.torsion_index(&c), None);
        let lk = DivisorClass::torsion(&c, TorsionIndex::One);
        assert_eq!(lk.torsion_index(&c), Some(TorsionIndex::One));
        // 2L reduces torsion-ness of the double.
        let two_p = DivisorClass::from_point(&group_mul(&c, 2, &p));
        assert_eq!(l.tensor(&c, &l), two_p);
    }
}

// ---- JSON presentation ----

/// Tagged JSON for a descriptor, e.g.
/// `{"type": "E1", "config": "common_L", "L": {...}}`.
pub fn descriptor_json(e: &BundleDescriptor) -> serde_json::Value {
    use serde_json::json;
    let class_json = |l: &DivisorClass| {
        json!({
            "degree": l.degree,
            "reduction": crate::jsonio::PointJson::from_point(&l.reduction),
        })
    };
    let (ty, extra) = match &e.underlying {
        Underlying::E1 => ("E1", serde_json::Value::Null),
        Underlying::SplitOdd { l } => ("L+Linv(winf)", class_json(l)),
        Underlying::SplitEven { l } => ("L+Linv", class_json(l)),
        Underlying::E0Twist { k } => ("E0xLk", json!(format!("{k:?}"))),
        Underlying::TorsionDouble { k } => ("Lk+Lk", json!(format!("{k:?}"))),
    };
    json!({
        "type": ty,
        "config": format!("{:?}", e.config),
        "parabolics": extra,
        "name": e.name,
    })
}

/// Classification report embedding the witness subbundle.
pub fn classification_json(e: &BundleDescriptor, mu: &WeightVector) -> serde_json::Value {
    use serde_json::json;
    let sub_json = |s: &SubbundleDescriptor| {
        json!({
            "degree": s.degree,
            "through_t1": s.through.t1,
            "through_t2": s.through.t2,
            "label": s.label,
        })
    };
    let (verdict, witness) = match classify(e, mu) {
        Classification::Stable => ("stable", serde_json::Value::Null),
        Classification::StrictlySemistable(w) => ("strictly_semistable", sub_json(&w)),
        Classification::Unstable(w) => ("unstable", sub_json(&w)),
    };
    json!({
        "bundle": descriptor_json(e),
        "mu": [mu.mu1.to_string(), mu.mu2.to_string()],
        "verdict": verdict,
        "witness": witness,
    })
}
