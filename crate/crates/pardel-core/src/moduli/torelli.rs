//! Reconstruction of `(λ, t)` from a bidegree-(2,2) curve: the four
//! vertical- and horizontal-tangent abscissas are the ruling-discriminant
//! roots; normalising three of each to `(0, 1, ∞)` and matching the
//! transformed curve against the standard branch curve recovers the
//! parameters up to the finite normalisation ambiguity, resolved by a
//! fixed total order.


use crate::poly::MultiPoly;
use crate::projective::{moebius_through, BiCurve, MoebiusMap, ProjPoint, Ruling};
use crate::roots::{binary_form_roots, P1Rat, RootError};
use crate::scalar::ExactScalar;

use super::{gamma_curve, gamma_ruling_discriminant, ModuliError, ModuliParams};

/// The outcome of a reconstruction.
#[derive(Clone, Debug)]
pub struct TorelliResult {
    /// The canonical representative.
    pub lambda: ExactScalar,
    pub t: ExactScalar,
    /// The normalising Möbius pair carrying the input onto
    /// `gamma_curve(lambda, t)`.
    pub mz: MoebiusMap,
    pub mw: MoebiusMap,
    /// Every valid `(λ′, t′)` over all orderings.
    pub candidates: Vec<(ExactScalar, ExactScalar)>,
}

fn distinct_roots(form: &MultiPoly, v0: &str, v1: &str) -> Result<Vec<P1Rat>, ModuliError> {
    match binary_form_roots(form, v0, v1) {
        Ok(roots) => {
            if roots.len() == 4 && roots.iter().all(|(_, m)| *m == 1) {
                Ok(roots.into_iter().map(|(r, _)| r).collect())
            } else {
                Err(ModuliError::NotGammaType)
            }
        }
        Err(RootError::IrrationalRoot) => Err(ModuliError::IrrationalBranch),
        Err(RootError::ZeroPolynomial) => Err(ModuliError::NotGammaType),
    }
}

/// Double root of a binary quadratic in `(w0, w1)`, as an affine value.
fn double_root_value(r: &MultiPoly) -> Option<ExactScalar> {
    let view = r.univariate_view("w1");
    let get = |p: Option<&MultiPoly>, k: u32| -> ExactScalar {
        p.map(|q| {
            q.exact_divide(&MultiPoly::var("w0").pow(k))
                .and_then(|x| x.as_constant())
                .unwrap_or_else(ExactScalar::zero)
        })
        .unwrap_or_else(ExactScalar::zero)
    };
    let c = get(view.first(), 2);
    let b = get(view.get(1), 1);
    let a = get(view.get(2), 0);
    let four = ExactScalar::from_int(4);
    if &(&b * &b) - &(&four * &(&a * &c)) != ExactScalar::zero() {
        return None;
    }
    if a.is_zero() {
        return None; // double root at infinity: not a valid t
    }
    Some(&(-&b) / &(&ExactScalar::from_int(2) * &a))
}

/// Reconstructs `(λ, t)` from a bidegree-(2,2) curve with constant
/// coefficients.
pub fn torelli_reconstruct(curve: &BiCurve) -> Result<TorelliResult, ModuliError> {
    if curve.bidegree() != (2, 2) {
        return Err(ModuliError::NotBidegree22);
    }
    for v in curve.poly().variables() {
        if !["z0", "z1", "w0", "w1"].contains(&v.as_str()) {
            return Err(ModuliError::NotBidegree22);
        }
    }
    let disc_z = gamma_ruling_discriminant(curve, Ruling::Vertical);
    let disc_w = gamma_ruling_discriminant(curve, Ruling::Horizontal);
    let z_roots = distinct_roots(&disc_z, "z0", "z1")?;
    let w_roots = distinct_roots(&disc_w, "w0", "w1")?;
    let zero = ProjPoint::p1_affine(&ExactScalar::zero());
    let one = ProjPoint::p1_affine(&ExactScalar::one());
    let inf = ProjPoint::p1_infinity();
    let mut best: Option<(ExactScalar, ExactScalar, MoebiusMap, MoebiusMap)> = None;
    let mut candidates: Vec<(ExactScalar, ExactScalar)> = Vec::new();
    for zperm in orderings(&z_roots) {
        let src: Vec<ProjPoint> = zperm.iter().map(ProjPoint::from_p1rat).collect();
        let Ok(g) = moebius_through([(&src[0], &zero), (&src[1], &one), (&src[2], &inf)]) else {
            continue;
        };
        let lam = match g.apply(&src[3]).unwrap().p1_value().unwrap() {
            P1Rat::Finite(v) => v,
            P1Rat::Infinity => continue,
        };
        if lam.is_zero() || lam.is_one() {
            continue;
        }
        for wperm in orderings(&w_roots) {
            let srcw: Vec<ProjPoint> = wperm.iter().map(ProjPoint::from_p1rat).collect();
            let Ok(h) =
                moebius_through([(&srcw[0], &zero), (&srcw[1], &one), (&srcw[2], &inf)])
            else {
                continue;
            };
            let lam_w = h.apply(&srcw[3]).unwrap().p1_value().unwrap();
            if lam_w != P1Rat::Finite(lam.clone()) {
                continue;
            }
            let transformed = curve.transform(&g, &h);
            // Tangency ordinate over z = ∞ is the candidate t.
            let restriction = transformed.restrict(Ruling::Vertical, &inf);
            let Some(t) = double_root_value(&restriction) else {
                continue;
            };
            if t.is_zero() || t.is_one() || t == lam {
                continue;
            }
            let Ok(params) = ModuliParams::rational(lam.clone(), t.clone()) else {
                continue;
            };
            if !transformed.same_curve(&gamma_curve(&params)) {
                continue;
            }
            if !candidates.contains(&(lam.clone(), t.clone())) {
                candidates.push((lam.clone(), t.clone()));
            }
            let better = match &best {
                None => true,
                Some((bl, bt, _, _)) => {
                    use std::cmp::Ordering::*;
                    match lam.cmp_canonical(bl) {
                        Less => true,
                        Greater => false,
                        Equal => t.cmp_canonical(bt) == Less,
                    }
                }
            };
            if better {
                best = Some((lam.clone(), t.clone(), g.clone(), h.clone()));
            }
        }
    }
    let (lambda, t, mz, mw) = best.ok_or(ModuliError::NotGammaType)?;
    candidates.sort_by(|a, b| {
        a.0.cmp_canonical(&b.0)
            .then_with(|| a.1.cmp_canonical(&b.1))
    });
    Ok(TorelliResult {
        lambda,
        t,
        mz,
        mw,
        candidates,
    })
}

/// All 24 ordered selections of 4 distinct items.
fn orderings(items: &[P1Rat]) -> Vec<[P1Rat; 4]> {
    let mut out = Vec::new();
    let n = items.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([
                            items[a].clone(),
                            items[b].clone(),
                            items[c].clone(),
                            items[d].clone(),
                        ]);
                    }
                }
            }
        }
    }
    out
}

/// Reconstruction round trip: the canonical classes of the curve and of a
/// transformed copy agree.
pub fn canonical_class(curve: &BiCurve) -> Result<(ExactScalar, ExactScalar), ModuliError> {
    torelli_reconstruct(curve).map(|r| (r.lambda, r.t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::ModuliParams;
    use rand::Rng as _;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sc(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn round_trip_contains_original_pair() {
        let params = ModuliParams::rational(sc(2), sc(5)).unwrap();
        let gamma = gamma_curve(&params);
        let r = torelli_reconstruct(&gamma).unwrap();
        assert!(r.candidates.contains(&(sc(2), sc(5))));
        // The canonical transformed curve really is the standard one.
        let canon = ModuliParams::rational(r.lambda.clone(), r.t.clone()).unwrap();
        let transformed = gamma.transform(&r.mz, &r.mw);
        assert!(transformed.same_curve(&gamma_curve(&canon)));
        // For one ordering the normalising pair is the identity, so (2, 5)
        // itself is a candidate found with identity maps; check by
        // reconstructing and matching the canonical class of the identity
        // transform.
        let again = torelli_reconstruct(&gamma_curve(&canon)).unwrap();
        assert_eq!((again.lambda, again.t), (r.lambda, r.t));
    }

    #[test]
    fn invariance_under_moebius_pairs() {
        let params = ModuliParams::rational(sc(2), sc(5)).unwrap();
        let gamma = gamma_curve(&params);
        let base = canonical_class(&gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut tried = 0;
        while tried < 3 {
            let e = |r: &mut ChaCha8Rng| MultiPoly::from_int(r.gen_range(-5i64..6));
            let mz = MoebiusMap { m: [e(&mut rng), e(&mut rng), e(&mut rng), e(&mut rng)] };
            let mw = MoebiusMap { m: [e(&mut rng), e(&mut rng), e(&mut rng), e(&mut rng)] };
            if mz.det().is_zero() || mw.det().is_zero() {
                continue;
            }
            tried += 1;
            let moved = gamma.transform(&mz, &mw);
            assert_eq!(canonical_class(&moved).unwrap(), base);
        }
    }

    #[test]
    fn degenerate_tangency_rejected() {
        // z0²w0² + z1²w1²: its w-discriminant is −4z0²z1², only two
        // distinct roots.
        let form = MultiPoly::var("z0")
            .pow(2)
            .mul(&MultiPoly::var("w0").pow(2))
            .add(&MultiPoly::var("z1").pow(2).mul(&MultiPoly::var("w1").pow(2)));
        let curve = BiCurve::new(form).unwrap();
        let err = torelli_reconstruct(&curve).unwrap_err();
        assert!(matches!(
            err,
            ModuliError::IrrationalBranch | ModuliError::NotGammaType
        ));
    }

    #[test]
    fn symbolic_curve_rejected() {
        let gamma = gamma_curve(&ModuliParams::symbolic());
        assert_eq!(
            torelli_reconstruct(&gamma).unwrap_err(),
            ModuliError::NotBidegree22
        );
    }
}
