//! Cross-module integration checks: the same quantities computed along
//! independent routes must agree exactly.

use std::collections::BTreeMap;

use pardel_core::elliptic::{beta, TorsionIndex};
use pardel_core::moduli::{self, ModuliParams};
use pardel_core::poly::{discriminant, MultiPoly};
use pardel_core::projective::{intersection_multiplicity_line, ProjPoint, Ruling};
use pardel_core::ratfunc::RatFunc;
use pardel_core::roots::{binary_form_roots, P1Rat};
use pardel_core::scalar::ExactScalar;

fn sc(n: i64) -> ExactScalar {
    ExactScalar::from_int(n)
}

fn params25() -> ModuliParams {
    ModuliParams::rational(sc(2), sc(5)).unwrap()
}

/// The ruling discriminant of Γ computed two ways: the Sylvester-based
/// discriminant of the dehomogenised quadratic, and the direct `B² − 4AC`
/// of the binary form. Both must cut out exactly {0, 1, λ, ∞}.
#[test]
fn gamma_discriminant_two_routes() {
    let params = params25();
    let gamma = moduli::gamma_curve(&params);
    let quartic = moduli::gamma_ruling_discriminant(&gamma, Ruling::Vertical);
    // Second route: dehomogenise w, take disc via resultant(p, p')/lead.
    let mut dh = BTreeMap::new();
    dh.insert("w0".to_string(), MultiPoly::one());
    dh.insert("w1".to_string(), MultiPoly::var("w1"));
    let affine = gamma.poly().subst(&dh);
    let disc = discriminant(&affine, "w1").unwrap();
    // disc is a polynomial in (z0, z1); it must agree with the quartic up
    // to a rational scalar.
    let q = quartic
        .exact_divide(&disc)
        .or_else(|| disc.exact_divide(&quartic))
        .expect("the two discriminant routes differ by a scalar");
    assert!(q.as_constant().is_some());
    // Root set at λ = 2, t = 5 is exactly {0, 1, 2, ∞}, all simple.
    let roots = binary_form_roots(&quartic, "z0", "z1").unwrap();
    let expect = vec![
        (P1Rat::from_int(0), 1),
        (P1Rat::from_int(1), 1),
        (P1Rat::from_int(2), 1),
        (P1Rat::Infinity, 1),
    ];
    assert_eq!(roots, expect);
}

/// Ruling intersection multiplicities of Γ: 2 at each tangency point,
/// 1 + 1 over a generic vertical, always summing to the bidegree.
#[test]
fn gamma_ruling_multiplicities() {
    let params = params25();
    let gamma = moduli::gamma_curve(&params);
    // z = 1: double point at w = (t−λ)/(t−1) = 3/4.
    let z1 = ProjPoint::p1_affine(&sc(1));
    let w34 = ProjPoint::p1_affine(&ExactScalar::from_ratio(3, 4));
    assert_eq!(
        intersection_multiplicity_line(&gamma, Ruling::Vertical, &z1, &w34).unwrap(),
        2
    );
    // z = ∞: double point at w = t = 5.
    let zinf = ProjPoint::p1_infinity();
    let w5 = ProjPoint::p1_affine(&sc(5));
    assert_eq!(
        intersection_multiplicity_line(&gamma, Ruling::Vertical, &zinf, &w5).unwrap(),
        2
    );
    // Points off the curve are rejected.
    assert!(
        intersection_multiplicity_line(&gamma, Ruling::Vertical, &zinf, &ProjPoint::p1_affine(&sc(6)))
            .is_err()
    );
    // A generic vertical meets Γ in two simple points. z = 8/3 carries the
    // image of the rational point (1:2:2) of Σ, so both intersections are
    // rational at λ = 2, t = 5.
    let zg = ProjPoint::p1_affine(&ExactScalar::from_ratio(8, 3));
    let restricted = gamma.restrict(Ruling::Vertical, &zg);
    let roots = binary_form_roots(&restricted, "w0", "w1").unwrap();
    assert_eq!(roots.len(), 2);
    let mut total = 0;
    for (w, m) in roots {
        assert_eq!(m, 1);
        let wp = ProjPoint::from_p1rat(&w);
        assert_eq!(
            intersection_multiplicity_line(&gamma, Ruling::Vertical, &zg, &wp).unwrap(),
            1
        );
        total += m;
    }
    assert_eq!(total, 2);
}

/// The element `g ∈ PGL(2)` preserving {0, 1, λ, ∞} and carrying the
/// tangency ordinate over `z = k` to `t` is `β_k` itself.
#[test]
fn tangency_normaliser_is_beta() {
    let params = params25();
    let lam_poly = params.lambda_poly();
    for k in TorsionIndex::ALL {
        let (den, num) = moduli::gamma_vertical_tangency(&params, k).unwrap();
        let ordinate = ProjPoint::p1(RatFunc::from_poly(den), RatFunc::from_poly(num));
        let g = beta(k, &lam_poly);
        let image = g.apply(&ordinate).unwrap();
        assert_eq!(image, ProjPoint::p1_affine(&sc(5)), "k = {k:?}");
        // β_k permutes {0, 1, λ, ∞}.
        let delta: Vec<P1Rat> = [
            P1Rat::from_int(0),
            P1Rat::from_int(1),
            P1Rat::Finite(sc(2)),
            P1Rat::Infinity,
        ]
        .to_vec();
        for v in &delta {
            assert!(delta.contains(&g.apply_value(v)));
        }
    }
}

/// Collecting Γ in one ruling variable gives three bidegree-2 coefficients
/// that reassemble exactly.
#[test]
fn gamma_univariate_view_reassembles() {
    let gamma = moduli::gamma_curve(&ModuliParams::symbolic());
    let view = gamma.poly().univariate_view("w1");
    assert_eq!(view.len(), 3);
    for (i, c) in view.iter().enumerate() {
        // Each coefficient is bihomogeneous of degree (2, 2−i) in z and w0.
        assert_eq!(c.homogeneous_degree_in(&["z0", "z1"]), Some(2));
        assert_eq!(c.degree_in("w0"), 2 - i as u32);
    }
    assert_eq!(
        MultiPoly::from_univariate("w1", &view),
        gamma.poly().clone()
    );
}
