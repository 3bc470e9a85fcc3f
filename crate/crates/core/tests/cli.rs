use twistfuse::cli::{run_with, EXIT_BAD_INPUT, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["twistfuse"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn smatrix_a1_json() {
    let (code, out, _) = run(&["smatrix", "A1", "--level", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["re"].as_array().unwrap().len(), 2);
}

#[test]
fn smatrix_with_twist_emits_two_matrices() {
    let (code, out, _) = run(&["smatrix", "A3", "--level", "1", "--twist", "diagram"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[1]["provenance"], "twisted-a");
}

#[test]
fn rank_cap_is_bad_input() {
    let (code, _, err) = run(&["smatrix", "A20", "--level", "1"]);
    assert_eq!(code, EXIT_BAD_INPUT);
    assert!(err.contains("rank 20"));
}

#[test]
fn single_coefficient() {
    let (code, out, _) = run(&["--output", "table", "fusion", "A1", "--level", "1", "1", "1", "0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "1");
    let (_, out, _) = run(&["fusion", "A1", "--level", "1", "1", "1", "1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["N"], 0);
}

#[test]
fn twisted_table_and_sector_rule() {
    let (code, out, _) = run(&[
        "fusion",
        "A3",
        "--level",
        "1",
        "--twist",
        "diagram",
        "--pattern",
        "1,s,s",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pattern"], "1,s,s");
    assert_eq!(v["entries"].as_array().unwrap().len(), 16);
    let (code, _, err) = run(&["fusion", "A3", "--level", "1", "--pattern", "s,s,s"]);
    assert_eq!(code, EXIT_BAD_INPUT);
    assert!(err.contains("sector rule"));
    let (code, _, _) = run(&[
        "fusion",
        "D4",
        "--level",
        "1",
        "--twist",
        "triality",
        "--pattern",
        "s,s,1",
    ]);
    assert_eq!(code, EXIT_BAD_INPUT);
}

#[test]
fn output_is_deterministic() {
    let args = ["fusion", "B2", "--level", "2"];
    let a = run(&args).1;
    let b = run(&args).1;
    assert_eq!(a, b);
}

#[test]
fn fold_info_weights_branch() {
    let (code, out, _) = run(&["fold-info", "E6", "--twist", "diagram"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["twisted"]["type"], "E6^(2)");
    assert_eq!(v["schema"], 1);
    let (code, out, _) = run(&["weights", "A3^(2)", "--level", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["weights"].as_array().unwrap().len(), 2);
    let (code, out, _) = run(&["branch", "A3", "1,0,0"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["components"][0]["weight"], "(1,0)");
}

#[test]
fn bad_inputs() {
    assert_eq!(run(&["smatrix", "Q3", "--level", "1"]).0, EXIT_BAD_INPUT);
    assert_eq!(
        run(&["smatrix", "A3", "--level", "1", "--twist", "sideways"]).0,
        EXIT_BAD_INPUT
    );
    assert_eq!(run(&["fusion", "A1", "--level", "1", "3", "0", "3"]).0, EXIT_BAD_INPUT);
    assert_eq!(
        run(&["fusion", "A1", "--level", "1", "--integer-tolerance", "0"]).0,
        EXIT_BAD_INPUT
    );
    assert_eq!(run(&["selfcheck", "--grid", "huge"]).0, EXIT_BAD_INPUT);
}

#[test]
fn selfcheck_tiny() {
    let (code, out, _) = run(&["selfcheck", "--grid", "tiny"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 9);
}
