//! Acceptance suite: one test per exit criterion, each printing a
//! pass/fail line. Everything runs in symbolic `(λ, t)` unless the
//! criterion is inherently about rational specialisation. Tolerances are
//! zero throughout: every assertion is an exact identity.

use pardel_core::moduli::{self, fitting, ModuliParams};
use pardel_core::scalar::ExactScalar;
use pardel_core::verify::{
    run_suite, run_suite_mutated, CheckStatus, Mode, Mutation, VerifyPlan,
};

fn symbolic_plan(selection: &[&str]) -> VerifyPlan {
    VerifyPlan {
        mode: Mode::Symbolic,
        selection: selection.iter().map(|s| s.to_string()).collect(),
        jobs: 2,
        seed: 0,
    }
}

fn specialized_plan(selection: &[&str]) -> VerifyPlan {
    VerifyPlan {
        mode: Mode::Specialized {
            lambda: ExactScalar::from_int(2),
            t: ExactScalar::from_int(5),
        },
        selection: selection.iter().map(|s| s.to_string()).collect(),
        jobs: 2,
        seed: 0,
    }
}

/// Runs the selected checks and asserts every one passes (skips are not
/// allowed unless listed).
fn assert_all_pass(plan: &VerifyPlan, allow_skip: &[&str]) {
    let certs = run_suite(plan);
    assert!(!certs.is_empty(), "selection matched no checks");
    for c in &certs {
        match &c.status {
            CheckStatus::Pass => {}
            CheckStatus::Skipped(reason) => {
                assert!(
                    allow_skip.contains(&c.name.as_str()),
                    "{} unexpectedly skipped: {reason}",
                    c.name
                );
            }
            CheckStatus::Fail => panic!("{} failed: {}", c.name, c.witness),
        }
    }
}

#[test]
fn criterion_01_gamma_structure() {
    assert_all_pass(&symbolic_plan(&["gamma_structure"]), &[]);
    println!("criterion 1 (Gamma bidegree, swap symmetry, twist invariance): pass");
}

#[test]
fn criterion_02_tangency_and_torelli() {
    assert_all_pass(&symbolic_plan(&["gamma_tangency", "torelli_roundtrip"]), &[]);
    println!("criterion 2 (ruling discriminants, tangency ordinates, Torelli round trips): pass");
}

#[test]
fn criterion_03_covering_identities() {
    assert_all_pass(&symbolic_plan(&["covering_identities"]), &[]);
    println!("criterion 3 (phi.tau = phi, phi.sigma_k = twist_k.phi, phi.psi_T = swap.phi): pass");
}

#[test]
fn criterion_04_ramification() {
    assert_all_pass(
        &symbolic_plan(&[
            "ramification_critical_locus",
            "tau_fixes_sigma",
            "sigma_maps_to_gamma",
            "tau_jacobian_contracted",
        ]),
        &[],
    );
    println!(
        "criterion 4 (critical locus = Sigma x Euler quadric x scalar; tau minors in (Sigma); \
         phi^*Gamma = Sigma^2; tau Jacobian = contracted curves): pass \
         [documented deviation: the quadric cofactor of the critical determinant is \
         b0^2+b1^2+b2^2, forced by the determinant construction, not a catalog curve]"
    );
}

#[test]
fn criterion_05_group_theory() {
    assert_all_pass(
        &symbolic_plan(&["group_closure_16", "group_conjugation_8"]),
        &[],
    );
    println!(
        "criterion 5 (16 involutions upstairs, pairwise commuting; 8 downstairs images): pass"
    );
}

#[test]
fn criterion_06_action_tables() {
    assert_all_pass(
        &symbolic_plan(&["action_table", "cover_image_table", "action_table_printed_flags"]),
        &[],
    );
    println!(
        "criterion 6 (sixteen-object action of tau, sigma_k, psi_T and the covering-image \
         table): pass [documented deviation: two printed sigma_k sub-rows \
         (Pi_{{i inf}} <-> Pi_{{j t}}, Pi_{{ik}} <-> Pi_i) are incompatible with the printed \
         sigma_k formulas and are flagged; the realised pairings are verified instead]"
    );
}

#[test]
fn criterion_07_phiw_rederivation() {
    assert_all_pass(
        &symbolic_plan(&["phiw_rederivation", "phiw_printed_flag"]),
        &[],
    );
    // Make the two halves of the statement explicit.
    let params = ModuliParams::symbolic();
    let derived = fitting::derive_phi_w(&params).unwrap();
    let (printed1, printed2) = fitting::phi_w_printed(&params);
    let (_, working2) = fitting::phi_w_working(&params);
    assert!(fitting::value_matches(&derived.first.value, &printed1));
    assert!(fitting::value_matches(&derived.second.value, &working2));
    assert!(!fitting::value_matches(&derived.second.value, &printed2));
    println!(
        "criterion 7 (tangency-system re-derivation of phi_W): first component reproduces the \
         printed formula exactly; second component reproduces \
         lambda*l*((t-1)(c-1)-(lambda-1)(l-1)) over the printed denominator and NOT the printed \
         numerator — the printed formula fails the branch-curve criterion for critical values \
         and is flagged as a suspected typo: pass with documented deviation"
    );
}

#[test]
fn criterion_08_elliptic_layer() {
    assert_all_pass(
        &symbolic_plan(&["elliptic"]),
        &["elliptic_epsilon_plan_params"],
    );
    println!(
        "criterion 8 (group axioms, pi-equivariance, beta relations, epsilon fiber identity, \
         two-section criterion on 50 seeded samples): pass"
    );
}

#[test]
fn criterion_09_stability_layer() {
    assert_all_pass(&symbolic_plan(&["stability"]), &[]);
    println!(
        "criterion 9 (catalog x 25-weight-grid classification, chamber constancy, graded \
         equality across wall partners, affine index): pass"
    );
}

#[test]
fn criterion_10_mutation_sensitivity() {
    // Every single-coefficient sign flip in the tau, sigma_0 or Gamma
    // formulas must make at least one certificate fail. Runs at rational
    // parameters on a sensitive subset for speed.
    let base = specialized_plan(&[
        "gamma_tangency",
        "sigma_maps_to_gamma",
        "covering_identities",
        "tau_involution",
        "plane_involutions",
    ]);
    let params = ModuliParams::rational(ExactScalar::from_int(2), ExactScalar::from_int(5))
        .unwrap();
    let mutations = pardel_core::verify::mutation_space(&params);
    assert!(mutations.len() > 30, "mutation space unexpectedly small");
    let mut caught = 0;
    for m in &mutations {
        let certs = run_suite_mutated(&base, Some(*m));
        let any_fail = certs.iter().any(|c| c.status == CheckStatus::Fail);
        assert!(
            any_fail,
            "mutation {m:?} escaped every certificate in the sensitive subset"
        );
        caught += 1;
    }
    // And the unmutated subset passes.
    assert!(run_suite(&base)
        .iter()
        .all(|c| c.status == CheckStatus::Pass));
    println!(
        "criterion 10 (mutation sensitivity): pass — {caught} single-sign-flip mutations all \
         caught"
    );
}

/// Companion check, not a numbered criterion: the symbolic and specialized
/// plans agree on every non-skipped verdict, and the full suites are green.
#[test]
fn full_suites_agree() {
    let sym = run_suite(&symbolic_plan(&[]));
    let spec = run_suite(&specialized_plan(&[]));
    assert_eq!(sym.len(), spec.len());
    for (a, b) in sym.iter().zip(&spec) {
        assert_eq!(a.name, b.name);
        let verdict = |s: &CheckStatus| match s {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped(_) => "skip",
        };
        let (va, vb) = (verdict(&a.status), verdict(&b.status));
        assert_ne!(va, "fail", "{} failed symbolically", a.name);
        assert_ne!(vb, "fail", "{} failed at (2,5)", a.name);
        if va != "skip" && vb != "skip" {
            assert_eq!(va, vb, "{} verdict differs between modes", a.name);
        }
    }
    println!("full suites: symbolic and specialized runs agree on all non-skipped checks");
}
