//! Geometry of the 2:1 covering: fibers via the de Jonquières pencils,
//! the ramification cubic inside the critical locus, the pullback identity
//! `Φ̃*Γ = (scalar)·Σ²`, and the smoothness spot-check of the degree-4
//! model cut out in `P⁴` by the Segre quadric and `v² = g`.

use std::collections::BTreeMap;

use crate::matrix::{ExactMatrix, LinearSolution};
use crate::poly::MultiPoly;
use crate::projective::{critical_locus, parametrize_line, PlaneCurve, ProjPoint, Ruling};
use crate::ratfunc::RatFunc;
use crate::scalar::ExactScalar;

use super::{
    gamma_curve, param_scalar_multiple, phi_tilde, sigma_cubic,
    special_point, standard_conic, ModuliError, ModuliParams, PointId,
};

/// The fiber of the covering over `(z*, w*)`, presented as a binary
/// quadratic: the two pullback pencil members (the line through `D_t` and
/// the conic through the four `D_i`) intersect in the fiber; restricting
/// the conic to the parametrized line gives the quadratic whose roots are
/// the fiber points.
pub fn fiber_quadratic(
    params: &ModuliParams,
    z: &ProjPoint,
    w: &ProjPoint,
) -> Result<MultiPoly, ModuliError> {
    let phi = phi_tilde(params);
    let zc = z.as_polys();
    let wc = w.as_polys();
    // Line: z-pair matches (z0* : z1*), i.e. den·z1* − num·z0* = 0.
    let line_poly = phi.zpair[0].mul(&zc[1]).sub(&phi.zpair[1].mul(&zc[0]));
    let conic_poly = phi.wpair[0].mul(&wc[1]).sub(&phi.wpair[1].mul(&wc[0]));
    let line = PlaneCurve::new(line_poly).map_err(|_| ModuliError::DegenerateParams)?;
    let param = parametrize_line(&line).map_err(|_| ModuliError::DegenerateParams)?;
    let map: BTreeMap<String, MultiPoly> = ["b0", "b1", "b2"]
        .iter()
        .zip(param.iter())
        .map(|(n, c)| (n.to_string(), c.clone()))
        .collect();
    Ok(conic_poly.subst(&map))
}

/// Discriminant of a binary quadratic in `(u, v)`.
pub fn quadratic_disc(q: &MultiPoly) -> MultiPoly {
    let view = q.univariate_view("v");
    let get = |i: usize, k: u32| -> MultiPoly {
        view.get(i)
            .map(|p| {
                p.exact_divide(&MultiPoly::var("u").pow(k))
                    .unwrap_or_else(MultiPoly::zero)
            })
            .unwrap_or_else(MultiPoly::zero)
    };
    let c = get(0, 2);
    let b = get(1, 1);
    let a = get(2, 0);
    b.pow(2)
        .sub(&a.mul(&c).scale(&ExactScalar::from_int(4)))
}

/// Value of `Γ` at a point pair, as a polynomial in the parameters.
pub fn gamma_value(params: &ModuliParams, z: &ProjPoint, w: &ProjPoint) -> MultiPoly {
    let gamma = gamma_curve(params);
    let r = gamma.restrict(Ruling::Vertical, z);
    let wc = w.as_polys();
    let mut map = BTreeMap::new();
    map.insert("w0".to_string(), wc[0].clone());
    map.insert("w1".to_string(), wc[1].clone());
    r.subst(&map)
}

/// The quintic critical determinant of the covering map factors as
/// `Σ · (b₀² + b₁² + b₂²) · scalar`. The quadric cofactor is forced by the
/// determinant construction itself: both cross-form rows are
/// Euler-orthogonal to the coordinate row `b`, so their cross product is
/// `μ(b)·b` and the determinant is `μ·(b·b)`; the geometric content is
/// `μ = Σ` up to scalar. Returns the cofactor quadric on success.
pub fn critical_locus_factors(params: &ModuliParams) -> Result<MultiPoly, ModuliError> {
    let phi = phi_tilde(params);
    let det = critical_locus(&phi);
    if det.is_zero() {
        return Err(ModuliError::Inconsistent);
    }
    let sigma = sigma_cubic(params);
    let rest = det
        .exact_divide(sigma.poly())
        .ok_or(ModuliError::Inconsistent)?;
    let norm_form = MultiPoly::var("b0")
        .pow(2)
        .add(&MultiPoly::var("b1").pow(2))
        .add(&MultiPoly::var("b2").pow(2));
    if param_scalar_multiple(&rest, &norm_form) {
        Ok(rest)
    } else {
        Err(ModuliError::Inconsistent)
    }
}

/// The classical Jacobian determinant of a plane map's three components.
pub fn plane_jacobian(map: &crate::projective::BirMapP2) -> MultiPoly {
    let c = map.components();
    let rows: Vec<Vec<MultiPoly>> = (0..3)
        .map(|i| {
            ["b0", "b1", "b2"]
                .iter()
                .map(|v| c[i].derivative(v))
                .collect()
        })
        .collect();
    crate::poly::poly_det(&rows)
}

/// The Jacobian determinant of `τ` vanishes exactly on the union of the
/// curves it contracts: the conic and the four lines `Π_{it}`. Returns the
/// multiset of stripped factor labels.
pub fn tau_jacobian_factors(params: &ModuliParams) -> Result<Vec<String>, ModuliError> {
    let tau = super::plane_map(params, super::NamedMapTag::Tau);
    let jac = plane_jacobian(&tau);
    if jac.is_zero() {
        return Err(ModuliError::Inconsistent);
    }
    let mut rest = jac;
    let mut stripped = Vec::new();
    let named: Vec<(String, MultiPoly)> = super::standard_lines(params)
        .into_iter()
        .map(|((i, j), l)| (format!("Pi_{{{},{}}}", i.label(), j.label()), l.poly().clone()))
        .chain(std::iter::once((
            "Pi".to_string(),
            standard_conic(params).poly().clone(),
        )))
        .collect();
    let mut progress = true;
    while progress && rest.homogeneous_degree_in(&["b0", "b1", "b2"]) != Some(0) {
        progress = false;
        for (name, f) in &named {
            if let Some(q) = rest.exact_divide(f) {
                stripped.push(name.clone());
                rest = q;
                progress = true;
                break;
            }
        }
    }
    if rest.homogeneous_degree_in(&["b0", "b1", "b2"]) == Some(0) && !rest.is_zero() {
        stripped.sort();
        Ok(stripped)
    } else {
        Err(ModuliError::Inconsistent)
    }
}

/// `Φ̃*Γ` equals `Σ²` up to a parameter scalar.
pub fn pullback_gamma_is_sigma_squared(params: &ModuliParams) -> bool {
    let phi = phi_tilde(params);
    let gamma = gamma_curve(params);
    let sigma = sigma_cubic(params);
    let pulled = phi.pullback_curve(&gamma);
    param_scalar_multiple(&pulled, &sigma.poly().pow(2))
}

/// Σ is tangent to the conic at `D_t`: the restriction of Σ to the conic
/// parametrization vanishes doubly at the parameter of `D_t`.
pub fn sigma_tangent_to_conic_at_dt(params: &ModuliParams) -> bool {
    let conic = standard_conic(params);
    let d0 = special_point(params, PointId::Zero);
    let Ok(param) = crate::projective::parametrize_conic(&conic, &d0) else {
        return false;
    };
    let sigma = sigma_cubic(params);
    let map: BTreeMap<String, MultiPoly> = ["b0", "b1", "b2"]
        .iter()
        .zip(param.iter())
        .map(|(n, c)| (n.to_string(), c.clone()))
        .collect();
    let restricted = sigma.poly().subst(&map);
    // Find the parameter value of D_t on the conic parametrization, then
    // count the vanishing order there.
    let dt = special_point(params, PointId::T);
    let dtc = dt.as_polys();
    // The projection-from-D0 parametrization of b1² − b0b2 is
    // (u² : uv : v²); D_t = (1 : t : t²) sits at (u : v) = (1 : t).
    let t = params.t_poly();
    let lin = MultiPoly::var("v").sub(&t.mul(&MultiPoly::var("u")));
    // Confirm the parameter value: substitute (1, t) and compare with D_t.
    let mut at = BTreeMap::new();
    at.insert("u".to_string(), MultiPoly::one());
    at.insert("v".to_string(), t.clone());
    let pt: Vec<MultiPoly> = param.iter().map(|p| p.subst(&at)).collect();
    let matches_dt = (0..3).all(|i| {
        (i + 1..3).all(|j| pt[i].mul(&dtc[j]).sub(&pt[j].mul(&dtc[i])).is_zero())
    });
    if !matches_dt {
        return false;
    }
    let (_, mult) = restricted.strip_factor(&lin);
    mult >= 2
}

/// The quadric `g` in Segre coordinates `u0..u3` restricting to `Γ` on the
/// Segre quadric `f = u0·u3 − u1·u2`.
pub fn segre_gamma_quadric(params: &ModuliParams) -> Result<MultiPoly, ModuliError> {
    let gamma = gamma_curve(params);
    // Quadric monomials in u, mapped to (2,2) monomials via
    // u0 = z0w0, u1 = z0w1, u2 = z1w0, u3 = z1w1.
    let unames = ["u0", "u1", "u2", "u3"];
    let images = [("z0", "w0"), ("z0", "w1"), ("z1", "w0"), ("z1", "w1")];
    let mut monos: Vec<(usize, usize)> = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            monos.push((i, j));
        }
    }
    // (2,2) monomial basis: z1^a z0^(2−a) w1^b w0^(2−b).
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in 0..=2u32 {
        for b in 0..=2u32 {
            let mut row = Vec::new();
            for (i, j) in &monos {
                // image of u_i u_j as z/w exponents
                let (zi, wi) = images[*i];
                let (zj, wj) = images[*j];
                let mut za = 0;
                let mut wb = 0;
                for z in [zi, zj] {
                    if z == "z1" {
                        za += 1;
                    }
                }
                for w in [wi, wj] {
                    if w == "w1" {
                        wb += 1;
                    }
                }
                row.push(RatFunc::from_scalar(if za == a && wb == b {
                    ExactScalar::one()
                } else {
                    ExactScalar::zero()
                }));
            }
            rows.push(row);
            rhs.push(RatFunc::from_scalar(gamma.poly().coeff_of(&[
                ("z1", a),
                ("z0", 2 - a),
                ("w1", b),
                ("w0", 2 - b),
            ])));
        }
    }
    let m = ExactMatrix::new(
        rows.len(),
        monos.len(),
        rows.into_iter().flatten().collect(),
    );
    let solution = match m.solve(&rhs) {
        LinearSolution::Unique(x) => x,
        LinearSolution::Underdetermined { particular, .. } => particular,
        LinearSolution::Inconsistent => return Err(ModuliError::Inconsistent),
    };
    let mut g = MultiPoly::zero();
    for ((i, j), c) in monos.iter().zip(solution) {
        let c = c.as_poly().cloned().unwrap_or_else(|| {
            // Clear the (constant) denominator.
            c.num().clone()
        });
        g = g.add(
            &c.mul(&MultiPoly::var(unames[*i]))
                .mul(&MultiPoly::var(unames[*j])),
        );
    }
    Ok(g)
}

/// The Segre quadric `f = u0u3 − u1u2`.
pub fn segre_quadric() -> MultiPoly {
    MultiPoly::var("u0")
        .mul(&MultiPoly::var("u3"))
        .sub(&MultiPoly::var("u1").mul(&MultiPoly::var("u2")))
}

/// Smoothness spot-check of `X = {f = 0, v² = g} ⊂ P⁴` at rational points:
/// the 2×5 Jacobian must have rank 2 at every sampled point and at every
/// tangency point of the branch curve (`v = 0`). Specialised parameters
/// only.
pub fn segre_model_smooth_at_samples(
    params: &ModuliParams,
    samples: &[(ExactScalar, ExactScalar, ExactScalar)],
) -> Result<bool, ModuliError> {
    if params.is_symbolic() {
        return Err(ModuliError::DegenerateParams);
    }
    let f = segre_quadric();
    let g = segre_gamma_quadric(params)?;
    let rank2_at = |zw: (&ExactScalar, &ExactScalar), v: &ExactScalar| -> bool {
        let u = [
            ExactScalar::one(),
            zw.1.clone(),
            zw.0.clone(),
            zw.0 * zw.1,
        ];
        let mut assign = BTreeMap::new();
        for (i, name) in ["u0", "u1", "u2", "u3"].iter().enumerate() {
            assign.insert(name.to_string(), u[i].clone());
        }
        let mut row_f = Vec::new();
        let mut row_g = Vec::new();
        for name in ["u0", "u1", "u2", "u3"] {
            row_f.push(f.derivative(name).eval_partial(&assign).as_constant().unwrap());
            row_g.push(
                g.derivative(name)
                    .eval_partial(&assign)
                    .as_constant()
                    .unwrap()
                    .abs()
                    .clone(),
            );
        }
        // Rows of the Jacobian of (f, v² − g): (∂f, 0) and (−∂g, 2v).
        let two_v = &ExactScalar::from_int(2) * v;
        if !two_v.is_zero() && row_f.iter().any(|c| !c.is_zero()) {
            return true;
        }
        // v = 0: need ∂f and ∂g non-proportional.
        for i in 0..4 {
            for j in i + 1..4 {
                if &(&row_f[i] * &row_g[j]) - &(&row_f[j] * &row_g[i]) != ExactScalar::zero() {
                    return true;
                }
            }
        }
        false
    };
    for (z, w, v) in samples {
        // Verify the sample is on the model: v² = Γ(z, w) in affine form.
        let val = gamma_value(
            params,
            &ProjPoint::p1_affine(z),
            &ProjPoint::p1_affine(w),
        )
        .as_constant()
        .ok_or(ModuliError::Inconsistent)?;
        if (v * v) != val {
            return Err(ModuliError::Inconsistent);
        }
        if !rank2_at((z, w), v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded rational points on the double cover: pairs `(z, w)` whose `Γ`
/// value is a rational square, with the square root.
pub fn sample_cover_points(
    params: &ModuliParams,
    seed: u64,
    want: usize,
) -> Vec<(ExactScalar, ExactScalar, ExactScalar)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < want && guard < 20_000 {
        guard += 1;
        let z = ExactScalar::from_ratio(rng.gen_range(-30i64..31), rng.gen_range(1i64..7));
        let w = ExactScalar::from_ratio(rng.gen_range(-30i64..31), rng.gen_range(1i64..7));
        let val = gamma_value(
            params,
            &ProjPoint::p1_affine(&z),
            &ProjPoint::p1_affine(&w),
        );
        let Some(c) = val.as_constant() else { continue };
        if let Some(v) = c.sqrt_exact() {
            out.push((z, w, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::TorsionIndex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sc(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn params25() -> ModuliParams {
        ModuliParams::rational(sc(2), sc(5)).unwrap()
    }

    #[test]
    fn fiber_has_two_points_off_gamma_one_on_it() {
        let params = params25();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 8 {
            let z = ExactScalar::from_ratio(rng.gen_range(-9i64..10), rng.gen_range(1i64..4));
            let w = ExactScalar::from_ratio(rng.gen_range(-9i64..10), rng.gen_range(1i64..4));
            let zp = ProjPoint::p1_affine(&z);
            let wp = ProjPoint::p1_affine(&w);
            let gv = gamma_value(&params, &zp, &wp);
            if gv.is_zero() {
                continue;
            }
            let q = fiber_quadratic(&params, &zp, &wp).unwrap();
            if q.is_zero() {
                continue;
            }
            let d = quadratic_disc(&q);
            assert!(!d.is_zero(), "off Γ the fiber must have 2 points");
            checked += 1;
        }
        // On Γ: the four vertical tangency points are rational points of Γ.
        for k in TorsionIndex::ALL {
            let (den, num) = super::super::gamma_vertical_tangency(&params, k).unwrap();
            let zp = crate::projective::ProjPoint::from_p1rat(&match k {
                TorsionIndex::Zero => crate::roots::P1Rat::from_int(0),
                TorsionIndex::One => crate::roots::P1Rat::from_int(1),
                TorsionIndex::Lambda => crate::roots::P1Rat::Finite(sc(2)),
                TorsionIndex::Infinity => crate::roots::P1Rat::Infinity,
            });
            let wp = ProjPoint::p1(
                RatFunc::from_poly(den.clone()),
                RatFunc::from_poly(num.clone()),
            );
            assert!(gamma_value(&params, &zp, &wp).is_zero());
            let q = fiber_quadratic(&params, &zp, &wp).unwrap();
            assert!(!q.is_zero());
            assert!(
                quadratic_disc(&q).is_zero(),
                "on Γ the fiber degenerates to one point ({k:?})"
            );
        }
    }

    #[test]
    fn fiber_check_symbolic_tangencies() {
        let params = ModuliParams::symbolic();
        for k in [TorsionIndex::Zero, TorsionIndex::One] {
            let (den, num) = super::super::gamma_vertical_tangency(&params, k).unwrap();
            let zp = params.delta_point(k);
            let wp = ProjPoint::p1(RatFunc::from_poly(den), RatFunc::from_poly(num));
            let q = fiber_quadratic(&params, &zp, &wp).unwrap();
            assert!(!q.is_zero());
            assert!(quadratic_disc(&q).is_zero());
        }
    }

    #[test]
    fn critical_locus_is_sigma_times_euler_quadric() {
        for params in [ModuliParams::symbolic(), params25()] {
            let cofactor = critical_locus_factors(&params).unwrap();
            assert_eq!(cofactor.homogeneous_degree_in(&["b0", "b1", "b2"]), Some(2));
        }
    }

    #[test]
    fn tau_jacobian_vanishes_on_contracted_curves() {
        for params in [ModuliParams::symbolic(), params25()] {
            let names = tau_jacobian_factors(&params).unwrap();
            let mut expect = vec![
                "Pi".to_string(),
                "Pi_{0,t}".to_string(),
                "Pi_{1,t}".to_string(),
                "Pi_{lambda,t}".to_string(),
                "Pi_{t,inf}".to_string(),
            ];
            expect.sort();
            assert_eq!(names, expect);
        }
    }

    #[test]
    fn critical_locus_vanishes_at_d1() {
        let params = params25();
        let phi = phi_tilde(&params);
        let det = critical_locus(&phi);
        let mut assign = BTreeMap::new();
        assign.insert("b0".to_string(), sc(1));
        assign.insert("b1".to_string(), sc(1));
        assign.insert("b2".to_string(), sc(1));
        assert!(det.eval_partial(&assign).as_constant().unwrap().is_zero());
    }

    #[test]
    fn degenerate_ruled_map_has_zero_critical_locus() {
        // z and w both pulled from the same pencil: the determinant
        // vanishes identically.
        let m = crate::projective::RuledMap::new(
            [MultiPoly::var("b0"), MultiPoly::var("b1")],
            [MultiPoly::var("b0"), MultiPoly::var("b1")],
        )
        .unwrap();
        assert!(critical_locus(&m).is_zero());
    }

    #[test]
    fn pullback_identity() {
        for params in [ModuliParams::symbolic(), params25()] {
            assert!(pullback_gamma_is_sigma_squared(&params));
        }
    }

    #[test]
    fn sigma_conic_tangency() {
        for params in [ModuliParams::symbolic(), params25()] {
            assert!(sigma_tangent_to_conic_at_dt(&params));
        }
    }

    #[test]
    fn segre_model_smoothness_specialized() {
        let params = params25();
        let mut samples = sample_cover_points(&params, 7, 6);
        // Also test the four tangency points (all have v = 0); over z = k
        // the ordinate is β_k(t), rational here.
        for k in TorsionIndex::ALL {
            let (den, num) = super::super::gamma_vertical_tangency(&params, k).unwrap();
            let d = den.as_constant().unwrap();
            if d.is_zero() {
                continue; // tangency at infinity not in the affine chart
            }
            let w = &num.as_constant().unwrap() / &d;
            let z = match k {
                TorsionIndex::Zero => sc(0),
                TorsionIndex::One => sc(1),
                TorsionIndex::Lambda => sc(2),
                TorsionIndex::Infinity => continue,
            };
            samples.push((z, w, sc(0)));
        }
        assert!(!samples.is_empty());
        assert!(segre_model_smooth_at_samples(&params, &samples).unwrap());
    }
}
