use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sheafwc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sheafwc"))
        .args(args)
        .env_remove("SHEAFWC_HURWITZ_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn rank3_series_text() {
    let o = sheafwc(&["series", "--rank", "3", "--c1", "-C-f", "--order", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# sheafwc "));
    assert!(text.contains("# exact through: q^(25/6)"));
    assert_eq!(
        body(&text),
        ["q^(-5/6+2): 3", "q^(-5/6+3): 69", "q^(-5/6+4): 792", "q^(-5/6+5): 6345"]
    );
}

#[test]
fn rank1_series_counts_partitions_shifted() {
    let o = sheafwc(&["series", "--rank", "1", "--order", "3"]);
    assert!(o.status.success());
    assert_eq!(body(&stdout(&o)), ["q^(-1/6+0): 1", "q^(-1/6+1): 4", "q^(-1/6+2): 14", "q^(-1/6+3): 40"]);
}

#[test]
fn series_json_schema() {
    let o = sheafwc(&["series", "--rank", "2", "--c1", "-H", "--surface", "p2", "--order", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lattice_den"], 24);
    assert_eq!(v["provenance"]["tool"], "sheafwc");
    assert_eq!(v["class"]["rank"], 2);
    assert_eq!(v["class"]["surface"], "p2");
    assert!(v["class"]["polarization"].is_null());
    let coeffs: Vec<&str> = v["terms"].as_array().unwrap().iter().map(|t| t["coeff"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "9", "48"]);
    let last = v["terms"].as_array().unwrap().last().unwrap()["q_num"].as_i64().unwrap();
    assert!(last <= v["cutoff"].as_i64().unwrap());
}

#[test]
fn refined_json_coefficients_are_rational_functions() {
    let o = sheafwc(&["series", "--rank", "3", "--c1", "-C-f", "--order", "2", "--refined", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t = &v["terms"][0]["coeff"];
    assert!(t["num"].is_array() && t["den"].is_array());
}

#[test]
fn vanishing_series_is_annotated() {
    let o = sheafwc(&["series", "--rank", "2", "--c1", "-C-f", "--polarization", "0,1", "--order", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# note: the series vanishes"));
    assert!(body(&text).is_empty());
}

#[test]
fn betti_csv() {
    let o = sheafwc(&["betti", "--c2", "2..3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = body(&text);
    assert_eq!(rows[0], "c2,b0,b2,b4,b6,b8,chi");
    assert_eq!(rows[1], "2,1,1,,,,3");
    assert_eq!(rows[2], "3,1,2,5,8,10,42");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.txt");
    let o = sheafwc(&["betti", "--c2", "2", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("c2=2 dim=2 b0..b2: 1 1 chi=3"));
}

#[test]
fn walls_listing() {
    let o = sheafwc(&["walls", "--rank", "2", "--c1", "-C-f", "--bound", "9/4", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ratios: Vec<(i64, i64)> = v["walls"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| (w["ratio"][0].as_i64().unwrap(), w["ratio"][1].as_i64().unwrap()))
        .collect();
    assert!(ratios.contains(&(1, 1)));
    assert!(ratios.contains(&(1, 3)));

    let o = sheafwc(&["walls", "--rank", "2", "--c1", "-C-f", "--bound", "0", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["walls"].as_array().unwrap().is_empty());
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["series", "--rank", "4"][..],
        &["series", "--rank", "2", "--c1", "-C", "--surface", "p2"],
        &["series", "--rank", "2", "--c1", "0", "--polarization", "0,1"],
        &["series", "--rank", "1", "--surface", "p2", "--refined"],
        &["betti", "--c2", "1"],
        &["check", "--only", "nope"],
        &["series", "--no-such-flag"],
    ] {
        let o = sheafwc(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn selected_checks_pass() {
    let o = sheafwc(&["check", "--only", "closed-forms", "--only", "hurwitz", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS closed-forms"));
    assert!(text.contains("PASS hurwitz"));
    assert!(text.contains("reduced coverage"));
    assert!(text.contains("2 checks, 0 failed"));
}

#[test]
fn failing_check_exits_3() {
    // Order 2 leaves no Betti row to compare, which counts as a failure.
    let o = sheafwc(&["check", "--only", "betti", "--order", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["checks"][0]["name"], "betti");
}

#[test]
fn hurwitz_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sheafwc"))
            .args(["series", "--rank", "1", "--surface", "p2", "--order", "3"])
            .env("SHEAFWC_HURWITZ_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    let file = dir.path().join("hurwitz.json");
    let v: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["values"][3], "1/3");
    let second = run();
    assert_eq!(body(&stdout(&first)), body(&stdout(&second)));
}
