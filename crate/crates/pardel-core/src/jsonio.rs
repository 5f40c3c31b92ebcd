//! JSON wire formats.
//!
//! Polynomials serialise as
//! `{"vars": ["z0", ...], "terms": [{"e": [..], "n": "1", "d": "1"}, ...]}`
//! with integer strings for numerator and denominator and terms emitted in
//! canonical graded-lex order, leading term first. Curves and maps wrap a
//! payload as `{"kind": "...", "payload": ...}`; elliptic points are
//! `{"x": "p/q", "y": "p/q"}` or `{"inf": true}`.

use serde::{Deserialize, Serialize};

use crate::elliptic::EllipticPoint;
use crate::poly::MultiPoly;
use crate::projective::{BiCurve, BirMapP2, PlaneCurve, RuledMap};
use crate::scalar::ExactScalar;

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub n: String,
    pub d: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &MultiPoly) -> Self {
        PolyJson {
            vars: p.variables().to_vec(),
            terms: p
                .terms_desc()
                .map(|(m, c)| TermJson {
                    e: m.0.clone(),
                    n: c.numer().to_string(),
                    d: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MultiPoly, String> {
        let mut raw = Vec::new();
        for t in &self.terms {
            let c: ExactScalar = format!("{}/{}", t.n, t.d).parse()?;
            raw.push((t.e.clone(), c));
        }
        MultiPoly::from_raw(self.vars.clone(), raw)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum ObjectJson {
    Bicurve(PolyJson),
    Planecurve(PolyJson),
    MapP2 { components: Vec<PolyJson> },
    MapRuled { z: Vec<PolyJson>, w: Vec<PolyJson> },
}

impl ObjectJson {
    pub fn from_bicurve(c: &BiCurve) -> Self {
        ObjectJson::Bicurve(PolyJson::from_poly(c.poly()))
    }

    pub fn from_planecurve(c: &PlaneCurve) -> Self {
        ObjectJson::Planecurve(PolyJson::from_poly(c.poly()))
    }

    pub fn from_map_p2(m: &BirMapP2) -> Self {
        ObjectJson::MapP2 {
            components: m.components().iter().map(PolyJson::from_poly).collect(),
        }
    }

    pub fn from_ruled(m: &RuledMap) -> Self {
        ObjectJson::MapRuled {
            z: m.zpair.iter().map(PolyJson::from_poly).collect(),
            w: m.wpair.iter().map(PolyJson::from_poly).collect(),
        }
    }

    pub fn to_bicurve(&self) -> Result<BiCurve, String> {
        match self {
            ObjectJson::Bicurve(p) => {
                BiCurve::new(p.to_poly()?).map_err(|e| e.to_string())
            }
            _ => Err("expected kind = bicurve".into()),
        }
    }

    pub fn to_planecurve(&self) -> Result<PlaneCurve, String> {
        match self {
            ObjectJson::Planecurve(p) => {
                PlaneCurve::new(p.to_poly()?).map_err(|e| e.to_string())
            }
            _ => Err("expected kind = planecurve".into()),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum PointJson {
    Infinity { inf: bool },
    Affine { x: String, y: String },
}

impl PointJson {
    pub fn from_point(p: &EllipticPoint) -> Self {
        match p {
            EllipticPoint::Infinity => PointJson::Infinity { inf: true },
            EllipticPoint::Affine(x, y) => PointJson::Affine {
                x: x.to_string(),
                y: y.to_string(),
            },
        }
    }

    pub fn to_point(&self) -> Result<EllipticPoint, String> {
        match self {
            PointJson::Infinity { inf } => {
                if *inf {
                    Ok(EllipticPoint::Infinity)
                } else {
                    Err("inf must be true when present".into())
                }
            }
            PointJson::Affine { x, y } => {
                Ok(EllipticPoint::Affine(x.parse()?, y.parse()?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{gamma_curve, ModuliParams};
    use proptest::prelude::*;

    #[test]
    fn gamma_round_trips() {
        let params =
            ModuliParams::rational(ExactScalar::from_int(2), ExactScalar::from_int(5)).unwrap();
        let g = gamma_curve(&params);
        let json = serde_json::to_string(&ObjectJson::from_bicurve(&g)).unwrap();
        let back: ObjectJson = serde_json::from_str(&json).unwrap();
        assert!(back.to_bicurve().unwrap().same_curve(&g));
    }

    #[test]
    fn point_round_trips() {
        for p in [
            EllipticPoint::Infinity,
            EllipticPoint::Affine(
                ExactScalar::from_ratio(-3, 7),
                ExactScalar::from_ratio(22, 5),
            ),
        ] {
            let json = serde_json::to_string(&PointJson::from_point(&p)).unwrap();
            let back: PointJson = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_point().unwrap(), p);
        }
    }

    #[test]
    fn emission_order_is_graded_lex_leading_first() {
        let p = MultiPoly::var("z0")
            .add(&MultiPoly::var("z0").pow(2))
            .add(&MultiPoly::one());
        let j = PolyJson::from_poly(&p);
        assert_eq!(j.terms[0].e, vec![2]);
        assert_eq!(j.terms[2].e, vec![0]);
    }

    proptest! {
        #[test]
        fn poly_json_round_trip(coeffs in proptest::collection::vec((-9i64..10, 0u32..3, 0u32..3), 0..6)) {
            let mut p = MultiPoly::zero();
            for (c, e0, e1) in coeffs {
                p = p.add(
                    &MultiPoly::from_int(c)
                        .mul(&MultiPoly::var("z0").pow(e0))
                        .mul(&MultiPoly::var("w1").pow(e1)),
                );
            }
            prop_assume!(!p.is_zero());
            let j = serde_json::to_string(&PolyJson::from_poly(&p)).unwrap();
            let back: PolyJson = serde_json::from_str(&j).unwrap();
            prop_assert_eq!(back.to_poly().unwrap(), p);
        }
    }
}
