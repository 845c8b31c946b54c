use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ravol(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ravol"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn generated_antiprism_validates() {
    let gen = ravol(&["gen", "antiprism", "--n", "3"], None);
    assert!(gen.status.success());
    let text = String::from_utf8(gen.stdout).unwrap();
    let v = json(&ravol(&["validate", "-"], Some(&text)));
    assert_eq!(v["schema"], "1");
    assert_eq!(v["valid"], true);
    assert_eq!(v["kind"], "ideal");
}

#[test]
fn codes_are_accepted_as_input() {
    let gen = ravol(&["gen", "lobell", "--n", "5", "--format", "text"], None);
    let code = String::from_utf8(gen.stdout).unwrap();
    assert!(code.starts_with("RA1:"));
    let v = json(&ravol(&["validate", "-"], Some(&code)));
    assert_eq!(v["kind"], "compact");
    assert_eq!(v["code"], code.trim());
}

#[test]
fn cube_is_rejected_with_a_witness() {
    let cube = r#"{"faces":[[0,1,2,3],[4,7,6,5],[0,4,5,1],[1,5,6,2],[2,6,7,3],[3,7,4,0]]}"#;
    let v = json(&ravol(&["validate", "-"], Some(cube)));
    assert_eq!(v["valid"], false);
    assert!(!v["report"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn identity_agrees_to_fifty_digits() {
    let v = json(&ravol(&["identity", "--eq", "8", "--digits", "50"], None));
    assert_eq!(v["verdict"], "agree");
    assert_eq!(v["agree_digits"], 50);
    assert_eq!(v["digits"], 50);
    assert!(v["value"]
        .as_str()
        .unwrap()
        .starts_with("6.0230460200471888"));
}

#[test]
fn census_summary_counts() {
    let v = json(&ravol(
        &["census", "--kind", "ideal", "--max-n", "12", "--summary"],
        None,
    ));
    let counts = &v["counts"];
    let want = [(6, 1), (7, 0), (8, 1), (9, 1), (10, 2), (11, 2), (12, 9)];
    for (n, c) in want {
        assert_eq!(counts[n.to_string()], c, "n = {n}");
    }
    assert!(v.get("levels").is_none());
}

#[test]
fn census_provenance_replays() {
    let v = json(&ravol(
        &["census", "--kind", "ideal", "--max-n", "10", "--provenance"],
        None,
    ));
    let level = v["levels"]["10"].as_array().unwrap();
    assert_eq!(level.len(), 2);
    for m in level {
        assert!(m["code"].as_str().unwrap().starts_with("RA1:"));
        assert!(m["replay"]["seed"].is_string());
    }
}

#[test]
fn output_is_independent_of_jobs() {
    let args = ["census", "--kind", "compact", "--max-n", "30"];
    let one = ravol(&[&args[..], &["--jobs", "1"]].concat(), None);
    let eight = ravol(&[&args[..], &["--jobs", "8"]].concat(), None);
    assert!(one.status.success());
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn volumes_are_decimal_strings() {
    let v = json(&ravol(
        &["volume", "antiprism", "--n", "4", "--digits", "30"],
        None,
    ));
    assert_eq!(v["value"], "6.023046020047188823634189314617");
    assert_eq!(v["method"], "closed_form");
    let t = ravol(&["volume", "lobell", "--n", "6", "--format", "text"], None);
    assert_eq!(
        String::from_utf8(t.stdout).unwrap().trim(),
        "6.023046020047189"
    );
}

#[test]
fn realize_matches_closed_form() {
    let gen = ravol(&["gen", "antiprism", "--n", "6"], None);
    let text = String::from_utf8(gen.stdout).unwrap();
    let v = json(&ravol(&["realize", "-", "--dump"], Some(&text)));
    let vol: f64 = v["volume"].as_str().unwrap().parse().unwrap();
    let closed = json(&ravol(&["volume", "antiprism", "--n", "6"], None));
    let closed: f64 = closed["value"].as_str().unwrap().parse().unwrap();
    assert!((vol - closed).abs() < 1e-8);
    assert_eq!(v["pattern"]["faces"].as_array().unwrap().len(), 14);
}

#[test]
fn realize_rejects_compact_input() {
    let gen = ravol(&["gen", "lobell", "--n", "5"], None);
    let out = ravol(
        &["realize", "-"],
        Some(&String::from_utf8(gen.stdout).unwrap()),
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["code"], "realization");
}

#[test]
fn spectrum_row_for_twelve_vertices() {
    let v = json(&ravol(&["spectrum", "--kind", "ideal", "--n", "12"], None));
    assert_eq!(v["count"], 9);
    assert_eq!(v["distinct"], 7);
    assert_eq!(v["min_omega"], "0.8457846720");
    assert_eq!(v["max_omega"], "1.0038410033");
}

#[test]
fn schedule_reaches_target() {
    let v = json(&ravol(
        &["schedule", "--target", "1.2", "--eps", "1e-6"],
        None,
    ));
    let predicted: f64 = v["predicted"].as_str().unwrap().parse().unwrap();
    assert!((predicted - 1.2).abs() <= 1e-6);
    let out = ravol(&["schedule", "--target", "5"], None);
    assert_eq!(json(&out)["error"]["code"], "schedule");
}

#[test]
fn classify_regions() {
    let region = |w: &str, kind: &str| {
        json(&ravol(&["classify", "--omega", w, "--kind", kind], None))["region"].clone()
    };
    assert_eq!(region("0.7", "ideal"), "discrete");
    assert_eq!(region("1.2", "ideal"), "dense");
    assert_eq!(region("0.2", "compact"), "unknown_gap");
}

#[test]
fn constants_list() {
    let v = json(&ravol(&["constants", "--digits", "25"], None));
    let list = v["constants"].as_array().unwrap();
    assert_eq!(list.len(), 11);
    assert_eq!(list[0]["name"], "v_oct");
    assert_eq!(list[0]["digits"], 25);
    assert_eq!(list[0]["value"], "3.6638623767088760602184141");
}

#[test]
fn move_twist_produces_a4_star() {
    let gen = ravol(&["gen", "antiprism", "--n", "4", "--format", "text"], None);
    let code = String::from_utf8(gen.stdout).unwrap();
    let list = json(&ravol(&["move", "list", "-"], Some(&code)));
    let twist = &list["twists"][0];
    let e = |i: usize| format!("{},{}", twist[i][0], twist[i][1]);
    // the list refers to the decoded representative, so pass the code again
    let v = json(&ravol(
        &["move", "twist", "-", "--e1", &e(0), "--e2", &e(1)],
        Some(&code),
    ));
    assert_eq!(v["valid"], true);
    assert_eq!(v["faces"].as_array().unwrap().len(), 11);
}

#[test]
fn failures_exit_with_codes() {
    let out = ravol(&["volume", "lobell", "--n", "3"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["code"], "bad_parameter");
    let out = ravol(&["validate", "-"], Some("not a polyhedron"));
    assert_eq!(json(&out)["error"]["code"], "parse_error");
    let out = ravol(&["identity", "--eq", "7"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = ravol(&["constants", "--digits", "100000"], None);
    assert_eq!(json(&out)["error"]["code"], "precision_unattainable");
}
