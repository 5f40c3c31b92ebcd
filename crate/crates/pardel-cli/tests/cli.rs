//! End-to-end tests of the command-line interface, driving the built
//! binary through its four subcommands.

use std::process::{Command, Output};

fn pardel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pardel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn emit_gamma_round_trips_through_torelli() {
    let dir = std::env::temp_dir().join("pardel-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gamma25.json");
    let out = pardel(&[
        "emit",
        "gamma",
        "--lambda",
        "2",
        "--t",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["kind"], "bicurve");
    // Integer coefficients only at integer parameters.
    for term in json["payload"]["terms"].as_array().unwrap() {
        assert_eq!(term["d"], "1");
    }
    let out = pardel(&["torelli", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cands = rep["candidates"].as_array().unwrap();
    assert!(cands
        .iter()
        .any(|c| c[0] == "2" && c[1] == "5"));
}

#[test]
fn torelli_rejects_non_gamma_curve_with_exit_4() {
    let dir = std::env::temp_dir().join("pardel-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("degenerate.json");
    // z0^2 w0^2 + z1^2 w1^2 has only two distinct tangent abscissas.
    std::fs::write(
        &path,
        r#"{"kind":"bicurve","payload":{"vars":["z0","z1","w0","w1"],
            "terms":[{"e":[2,0,2,0],"n":"1","d":"1"},{"e":[0,2,0,2],"n":"1","d":"1"}]}}"#,
    )
    .unwrap();
    let out = pardel(&["torelli", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn emit_points_contains_printed_coordinates() {
    let out = pardel(&["emit", "points", "--lambda", "2", "--t", "5", "--format", "text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("D_t = (1 : 5 : 25)"));
    assert!(text.contains("D_inf = (0 : 0 : 1)"));
}

#[test]
fn emit_map_tau_symbolic_has_three_cubics() {
    let out = pardel(&["emit", "map", "tau", "--symbolic"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["kind"], "map_p2");
    let comps = json["payload"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 3);
    for c in comps {
        // Every term has total degree 3 in b0, b1, b2.
        let vars: Vec<String> = c["vars"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        for term in c["terms"].as_array().unwrap() {
            let d: u64 = term["e"]
                .as_array()
                .unwrap()
                .iter()
                .zip(&vars)
                .filter(|(_, v)| v.starts_with('b'))
                .map(|(e, _)| e.as_u64().unwrap())
                .sum();
            assert_eq!(d, 3);
        }
    }
}

#[test]
fn eval_phi_reports_base_point() {
    let out = pardel(&["eval", "phi", "--point", "1,0,0", "--lambda", "2", "--t", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("undefined (base point D_0)"));
}

#[test]
fn eval_swap_exchanges_factors() {
    let out = pardel(&["eval", "swap", "--point", "(1,2),(3,4)"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("z = (3 : 4), w = (1 : 2)"));
}

#[test]
fn eval_tau_twice_returns_original() {
    let run = |pt: &str| {
        let arg = format!("--point={pt}");
        let out = pardel(&["eval", "tau", &arg, "--lambda", "2", "--t", "5"]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        stdout(&out)
    };
    let first = run("1,2,3");
    // Parse "(a : b : c)" back into a flag-friendly triple.
    let inner = first
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .replace(" : ", ",");
    let second = run(&inner);
    // Projective equality: the second image is proportional to (1,2,3).
    let coords: Vec<i64> = second
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(" : ")
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(coords[1] * 1, coords[0] * 2);
    assert_eq!(coords[2] * 1, coords[0] * 3);
}

#[test]
fn verify_selection_exits_zero_and_reports() {
    let out = pardel(&[
        "verify",
        "--lambda",
        "2",
        "--t",
        "5",
        "--only",
        "beta",
        "--only",
        "conic",
    ]);
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["summary"]["fail"], 0);
    assert_eq!(rep["summary"]["pass"], 2);
    assert_eq!(rep["suite"][0]["name"], "elliptic_beta_relations");
}

#[test]
fn usage_error_is_nonzero() {
    let out = pardel(&["emit", "gamma", "--lambda", "2"]);
    assert!(!out.status.success());
}
