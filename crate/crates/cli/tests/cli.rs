use assert_cmd::Command;
use serde_json::Value;

fn hopfkit() -> Command {
    Command::cargo_bin("hopfkit").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hopfkit()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn classify_divisible_mixture() {
    let text = stdout(&["classify", "Z(2^inf) + Q"]);
    assert!(text.contains("H  no"), "{text}");
    assert!(text.contains("RH yes"), "{text}");
    assert!(text.contains("[R-DIV]"), "{text}");
    assert!(text.contains("[R-SPLIT-D]"), "{text}");

    let v = json(&["classify", "Z(2^inf) + Q"]);
    assert_eq!(v["descriptor"], "Z(2^inf) + Q");
    assert_eq!(
        v["verdicts"],
        serde_json::json!({"H": "no", "RH": "yes", "WH": "yes", "DF": "yes"})
    );
    let rules: Vec<&str> = v["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["rule"].as_str().unwrap())
        .collect();
    assert!(
        rules.contains(&"R-DIV") && rules.contains(&"R-SPLIT-D"),
        "{rules:?}"
    );
}

#[test]
fn ulm_of_standard_group() {
    let text = stdout(&["ulm", "B(2)", "-p", "2", "--upto", "5"]);
    for k in 0..5 {
        assert!(text.contains(&format!("f_{k} = 1\n")), "{text}");
    }
    assert!(!text.contains("f_5 ="), "{text}");
    assert!(text.contains("f_inf = 0"), "{text}");

    let v = json(&["ulm", "B(2)", "-p", "2", "--upto", "5"]);
    assert_eq!(v["f"], serde_json::json!([1, 1, 1, 1, 1]));
    assert_eq!(v["f_inf"], 0);
    let v = json(&["ulm", "Z(3)^w + Z(3^inf)^2", "-p", "3", "--upto", "2"]);
    assert_eq!(v["f"], serde_json::json!(["w", 0]));
    assert_eq!(v["f_inf"], 2);
}

#[test]
fn quotient_of_literal_group() {
    // Z(4) + Z(2) modulo <(2,1)> is cyclic of order 4.
    let v = json(&["quotient", "4,2", "--sub", "2,1"]);
    assert_eq!(v["invariant_factors"], serde_json::json!([2, 4]));
    assert_eq!(v["subgroup_order"], 2);
    assert_eq!(v["quotient"], serde_json::json!([4]));
    let v = json(&["quotient", "4,2", "--sub", "1,0;0,1"]);
    assert_eq!(v["quotient"], serde_json::json!([]));
    assert_eq!(v["quotient_order"], 1);
}

#[test]
fn homs_counts_and_listing() {
    let v = json(&["homs", "4,2", "4,2", "--count"]);
    assert_eq!(v["count"], 32);
    assert!(v.get("homomorphisms").is_none());
    let v = json(&["homs", "4", "4", "--surjective-only"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["homomorphisms"], serde_json::json!([[[1]], [[3]]]));
    let text = stdout(&["homs", "2", "4"]);
    assert!(
        text.contains("(0)") && text.contains("(2)") && text.ends_with("2 homomorphisms\n"),
        "{text}"
    );
}

#[test]
fn subgroups_and_purity() {
    let v = json(&["subgroups", "2,2"]);
    assert_eq!(v["count"], 5);
    let v = json(&["subgroups", "4", "--pure-only"]);
    // In Z(4) only 0 and Z(4) are pure.
    assert_eq!(v["count"], 2);
    let text = stdout(&["subgroups", "4,2"]);
    assert!(text.ends_with("8 subgroups\n"), "{text}");
}

#[test]
fn verify_reports() {
    let v = json(&["verify", "lemma-good", "--max-order", "64"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert!(v["instances_checked"].as_u64().unwrap() > 0);
    assert!(v["failures"].as_array().unwrap().is_empty());
    assert_eq!(v["bounds"]["max_order"], 64);

    let text = stdout(&["verify", "chain", "--seed", "5", "--size", "20"]);
    assert!(text.starts_with("suite chain: PASS"), "{text}");
    assert!(text.contains("seed: 5"), "{text}");
}

#[test]
fn verify_is_reproducible() {
    let strip = |mut v: Value| {
        v["elapsed_seconds"] = Value::Null;
        v
    };
    let a = strip(json(&["verify", "dirsum", "--seed", "9", "--size", "100"]));
    let b = strip(json(&["verify", "dirsum", "--seed", "9", "--size", "100"]));
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "no-such-suite"][..],
        &["verify", "finite-hopf", "--max-order", "65"],
        &["classify", "Z(4)"],
        &["classify", "Z(2^0)"],
        &["ulm", "Q", "-p", "6"],
        &["quotient", "4,0", "--sub", "1,0"],
        &["quotient", "4,2", "--sub", "1"],
        &["frobnicate"],
        &["classify"],
    ] {
        hopfkit().args(args).assert().code(2);
    }
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hopfkit.toml");
    std::fs::write(&path, "json = true\nseed = 11\nsize = 15\n").unwrap();
    let out = hopfkit()
        .args(["--config", path.to_str().unwrap(), "verify", "count-finite"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["bounds"]["corpus"]["size"], 15);

    // Flags override the file.
    let out = hopfkit()
        .args([
            "--config",
            path.to_str().unwrap(),
            "verify",
            "count-finite",
            "--seed",
            "2",
        ])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["seed"], 2);

    std::fs::write(&path, "colour = \"blue\"\n").unwrap();
    hopfkit()
        .args(["--config", path.to_str().unwrap(), "classify", "Q"])
        .assert()
        .code(2);
}
