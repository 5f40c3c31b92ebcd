//! The automorphism groups: closure of `⟨σ₀, σ₁, ψ_T, τ⟩` on the plane
//! model, its Cayley table, and the conjugated group on `P¹×P¹` generated
//! by the twists and the factor exchange.

use crate::elliptic::{beta, TorsionIndex};
use crate::projective::{BirMapP2, MoebiusMap, ProjPoint, RuledMap};

use super::{contracted_candidates, phi_tilde, plane_map, ModuliParams, NamedMapTag};

/// An automorphism of `P¹×P¹`: a pair of Möbius matrices, optionally
/// preceded by the factor exchange. Acting on `(z, w)`:
/// `swap = false ↦ (mz·z, mw·w)`, `swap = true ↦ (mz·w, mw·z)`.
#[derive(Clone, Debug)]
pub struct PPAuto {
    pub mz: MoebiusMap,
    pub mw: MoebiusMap,
    pub swap: bool,
}

impl PPAuto {
    pub fn identity() -> Self {
        PPAuto {
            mz: MoebiusMap::identity(),
            mw: MoebiusMap::identity(),
            swap: false,
        }
    }

    pub fn apply(&self, z: &ProjPoint, w: &ProjPoint) -> (ProjPoint, ProjPoint) {
        let (a, b) = if self.swap { (w, z) } else { (z, w) };
        (
            self.mz.apply(a).expect("Möbius everywhere defined"),
            self.mw.apply(b).expect("Möbius everywhere defined"),
        )
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PPAuto) -> PPAuto {
        let (ga, gb) = if self.swap {
            (&inner.mw, &inner.mz)
        } else {
            (&inner.mz, &inner.mw)
        };
        PPAuto {
            mz: self.mz.compose(ga),
            mw: self.mw.compose(gb),
            swap: self.swap ^ inner.swap,
        }
    }

    pub fn map_equal(&self, other: &PPAuto) -> bool {
        self.swap == other.swap
            && self.mz.map_equal(&other.mz)
            && self.mw.map_equal(&other.mw)
    }
}

/// The eight automorphisms of `P¹×P¹` preserving the branch curve: the
/// four diagonal twists times the factor exchange.
pub fn pp_gamma_group(params: &ModuliParams) -> Vec<(String, PPAuto)> {
    let lam = params.lambda_poly();
    let mut out = Vec::new();
    for k in TorsionIndex::ALL {
        let b = beta(k, &lam);
        for swap in [false, true] {
            let name = format!(
                "twist_{:?}{}",
                k,
                if swap { "_swap" } else { "" }
            );
            out.push((
                name,
                PPAuto {
                    mz: b.clone(),
                    mw: b.clone(),
                    swap,
                },
            ));
        }
    }
    out
}

/// The closure of `⟨σ₀, σ₁, ψ_T, τ⟩` under composition, with normalised
/// representatives, plus the Cayley table (entry `[i][j]` is the index of
/// `g_i ∘ g_j`).
pub struct AutClosure {
    pub elements: Vec<(String, BirMapP2)>,
    pub table: Vec<Vec<usize>>,
}

impl AutClosure {
    pub fn index_of(&self, m: &BirMapP2) -> Option<usize> {
        self.elements.iter().position(|(_, g)| g.map_equal(m))
    }

    pub fn all_involutions(&self) -> bool {
        (0..self.elements.len()).all(|i| self.table[i][i] == 0)
    }

    pub fn all_commute(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }
}

/// Breadth-first closure of the plane involutions under composition.
/// Compositions are normalised by stripping the known contracted-curve
/// factors; distinctness is projective equality of component triples.
pub fn aut_s_closure(params: &ModuliParams) -> AutClosure {
    let cands = contracted_candidates(params);
    let gens = [
        ("sigma0", plane_map(params, NamedMapTag::Sigma0)),
        ("sigma1", plane_map(params, NamedMapTag::Sigma1)),
        ("psi_T", plane_map(params, NamedMapTag::PsiT)),
        ("tau", plane_map(params, NamedMapTag::Tau)),
    ];
    let mut elements: Vec<(String, BirMapP2)> = vec![("id".into(), BirMapP2::identity())];
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        let (base_name, base) = elements[i].clone();
        for (gname, g) in &gens {
            let composed = g.compose(&base, &cands);
            if elements.iter().all(|(_, e)| !e.map_equal(&composed)) {
                let name = if base_name == "id" {
                    gname.to_string()
                } else {
                    format!("{gname}*{base_name}")
                };
                elements.push((name, composed));
                frontier.push(elements.len() - 1);
            }
        }
    }
    let n = elements.len();
    let mut table = vec![vec![usize::MAX; n]; n];
    for i in 0..n {
        for j in 0..n {
            let composed = elements[i].1.compose(&elements[j].1, &cands);
            let idx = elements
                .iter()
                .position(|(_, e)| e.map_equal(&composed))
                .expect("closure: composition stays in the group");
            table[i][j] = idx;
        }
    }
    AutClosure { elements, table }
}

/// The image of a plane automorphism under conjugation by the covering
/// map: the unique `P¹×P¹` automorphism `ĝ` with `Φ̃ ∘ g = ĝ ∘ Φ̃`, found
/// among the eight candidates.
pub fn conjugate_by_cover(
    params: &ModuliParams,
    g: &BirMapP2,
    phi: &RuledMap,
    downstairs: &[(String, PPAuto)],
) -> Option<usize> {
    let cands = contracted_candidates(params);
    let lhs = phi.compose_bir(g, &cands);
    downstairs.iter().position(|(_, h)| {
        let rhs = phi.postcompose(&h.mz, &h.mw, h.swap);
        lhs.map_equal(&rhs)
    })
}

/// Full conjugation data: for each upstairs element, the downstairs index.
pub struct CoverConjugation {
    pub upstairs: AutClosure,
    pub downstairs: Vec<(String, PPAuto)>,
    pub image: Vec<usize>,
}

pub fn conjugation_data(params: &ModuliParams) -> Option<CoverConjugation> {
    let upstairs = aut_s_closure(params);
    let downstairs = pp_gamma_group(params);
    let phi = phi_tilde(params);
    let mut image = Vec::with_capacity(upstairs.elements.len());
    for (_, g) in &upstairs.elements {
        image.push(conjugate_by_cover(params, g, &phi, &downstairs)?);
    }
    Some(CoverConjugation {
        upstairs,
        downstairs,
        image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use std::collections::BTreeSet;

    fn sc(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn swap_squares_to_identity() {
        let sw = super::super::swap_auto();
        assert!(sw.compose(&sw).map_equal(&PPAuto::identity()));
    }

    #[test]
    fn downstairs_group_has_eight_distinct_elements() {
        let params = ModuliParams::symbolic();
        let g = pp_gamma_group(&params);
        assert_eq!(g.len(), 8);
        for i in 0..8 {
            for j in i + 1..8 {
                assert!(!g[i].1.map_equal(&g[j].1), "{} vs {}", g[i].0, g[j].0);
            }
        }
        // Closed under composition and all involutive.
        for (ni, i) in &g {
            assert!(
                i.compose(i).map_equal(&PPAuto::identity()),
                "{ni} not involutive"
            );
            for (_, j) in &g {
                let c = i.compose(j);
                assert!(g.iter().any(|(_, k)| k.map_equal(&c)));
            }
        }
    }

    #[test]
    fn upstairs_closure_specialized() {
        let params = ModuliParams::rational(sc(2), sc(5)).unwrap();
        let closure = aut_s_closure(&params);
        assert_eq!(closure.elements.len(), 16);
        assert!(closure.all_involutions());
        assert!(closure.all_commute());
    }

    #[test]
    fn conjugation_covers_all_eight() {
        let params = ModuliParams::rational(sc(2), sc(5)).unwrap();
        let data = conjugation_data(&params).expect("all elements conjugate");
        assert_eq!(data.upstairs.elements.len(), 16);
        let images: BTreeSet<usize> = data.image.iter().copied().collect();
        assert_eq!(images.len(), 8);
        // τ lies in the kernel: conjugates to the identity twist.
        let tau_idx = data
            .upstairs
            .elements
            .iter()
            .position(|(n, _)| n == "tau")
            .unwrap();
        let id_down = data.image[data
            .upstairs
            .elements
            .iter()
            .position(|(n, _)| n == "id")
            .unwrap()];
        assert_eq!(data.image[tau_idx], id_down);
    }

    #[test]
    fn sigma_product_is_sigma_lambda_up_to_tau() {
        // σ₀∘σ₁ lifts β_λ × β_λ, so it is σ_λ or σ_λ∘τ; the Cayley table
        // records which.
        let params = ModuliParams::rational(sc(2), sc(5)).unwrap();
        let cands = contracted_candidates(&params);
        let s0 = plane_map(&params, NamedMapTag::Sigma0);
        let s1 = plane_map(&params, NamedMapTag::Sigma1);
        let sl = plane_map(&params, NamedMapTag::SigmaLambda);
        let tau = plane_map(&params, NamedMapTag::Tau);
        let prod = s0.compose(&s1, &cands);
        let sl_tau = sl.compose(&tau, &cands);
        let direct = prod.map_equal(&sl);
        let twisted = prod.map_equal(&sl_tau);
        assert!(direct ^ twisted, "product must be exactly one of the lifts");
    }
}
