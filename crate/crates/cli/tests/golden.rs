//! Pins the JSON report of each subcommand. Timing is blanked before the
//! comparison. Regenerate with `UPDATE_GOLDEN=1 cargo test -p lee-embed-cli`.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const Z55_CODE: &str = r#"{"n":3,"group":"Z_55","images":[1,5,21],"e":2,"period":55,"covering_radius":3}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lee-embed"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = bin().arg("--json").args(args).output().unwrap();
    let mut v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    v["timing"]["elapsed_ms"] = Value::Null;
    (out.status.code().unwrap(), v)
}

fn golden(name: &str, args: &[&str], expected_exit: i32) {
    let (code, got) = run_json(args);
    assert_eq!(code, expected_exit, "{name}: exit code");
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        return;
    }
    let want: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(got, want, "{name}: report differs from {}", path.display());
}

#[test]
fn golden_reports() {
    golden("sphere", &["sphere", "--n", "3", "--r", "2"], 0);
    golden("pi", &["pi", "--n", "2", "--k", "16"], 0);
    golden("pi_single", &["pi", "--n", "2", "--k", "16", "--images", "1,5"], 0);
    golden("pi_group", &["pi", "--n", "2", "--group", "Z_2xZ_8"], 0);
    golden("embed2d", &["embed2d", "--k", "16"], 0);
    golden("search_pl", &["search-pl", "--n", "3", "--k", "25", "--shards", "4"], 0);
    golden("search_pl_witness", &["search-pl", "--n", "2", "--k", "13"], 0);
    golden("search_qpl", &["search-qpl", "--n", "3", "--k", "55"], 0);
    golden("search_qpl_none", &["search-qpl", "--n", "3", "--k", "25", "--all-groups"], 0);
    golden("verify", &["verify"], 0);
    golden("decode", &["decode", "--code", Z55_CODE, "--word", "7,-3,12"], 0);
    golden("bound", &["bound", "--n", "3"], 0);
    golden("render", &["render", "--k", "16", "--images", "2,3", "--extent", "3", "--radii", "1,2"], 0);
    golden("probe", &["conjecture-probe", "--n", "2", "--k-max", "24"], 0);
    golden("budget_refusal", &["pi", "--n", "3", "--k", "2000", "--budget", "1000"], 3);
}

#[test]
fn spec_examples() {
    let (_, v) = run_json(&["pi", "--n", "2", "--k", "16"]);
    assert_eq!(v["verdicts"]["pi"], 29);
    assert_eq!(v["verdicts"]["attained_by"], "Z_16");
    assert_eq!(v["verdicts"]["images"], serde_json::json!([2, 3]));
    let (_, v) = run_json(&["sphere", "--n", "3", "--r", "2"]);
    assert_eq!(v["verdicts"]["size"], 25);
    let (_, v) = run_json(&["bound", "--n", "3"]);
    assert_eq!(v["verdicts"]["threshold_e"], 55);
    let text = bin().args(["sphere", "--n", "3", "--r", "2"]).output().unwrap();
    assert_eq!(String::from_utf8(text.stdout).unwrap().trim(), "25");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["sphere", "--n", "3"]), 2);
    assert_eq!(code(&["sphere", "--n", "3", "--r", "2", "--bogus"]), 2);
    assert_eq!(code(&["sphere", "--n", "60", "--r", "100000000000"]), 4);
    assert_eq!(code(&["search-qpl", "--k", "455", "--budget", "10"]), 3);
    assert_eq!(code(&["pi", "--n", "2", "--k", "16", "--group", "Z_2xZ_4"]), 5);
    assert_eq!(code(&["render", "--k", "16", "--images", "1,2,3"]), 5);
    assert_eq!(code(&["bound", "--n", "4"]), 5);
}

#[test]
fn bad_appendix_rows_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    std::fs::write(&path, "k,phi_e1,phi_e2,phi_e3\n14,1,2,5\n16,1,1,1\n").unwrap();
    let (code, v) = run_json(&["verify", "--appendix", path.to_str().unwrap(), "--max-e", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["failures"], serde_json::json!([16]));
    assert!(v["input_digests"][path.to_str().unwrap()].is_string());

    std::fs::write(&path, "k,phi_e1,phi_e2,phi_e3\n14,1,2\n").unwrap();
    let (code, _) = run_json(&["verify", "--appendix", path.to_str().unwrap()]);
    assert_eq!(code, 5);
    std::fs::write(&path, "k,phi_e1,phi_e2,phi_e3\n14,1,2,5\n").unwrap();
    let (code, v) = run_json(&["verify", "--appendix", path.to_str().unwrap(), "--max-e", "2"]);
    assert_eq!(code, 6, "{v}");
}

#[test]
fn checkpointed_search_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let cp_s = cp.to_str().unwrap();
    let base = ["search-pl", "--n", "5", "--k", "61", "--shards", "2", "--shard-index", "1", "--checkpoint", cp_s];
    let (_, full) = run_json(&["search-pl", "--n", "5", "--k", "61", "--shards", "2", "--shard-index", "1"]);

    let mut first = base.to_vec();
    first.extend(["--max-nodes", "300", "--checkpoint-every", "100"]);
    let (code, paused) = run_json(&first);
    assert_eq!(code, 0);
    assert_eq!(paused["verdicts"]["verdict"], "PAUSED");
    assert!(cp.exists());

    let (code, done) = run_json(&base);
    assert_eq!(code, 0);
    assert_eq!(done["verdicts"]["verdict"], full["verdicts"]["verdict"]);
    assert_eq!(done["verdicts"]["nodes_visited"], full["verdicts"]["nodes_visited"]);
    assert!(done["input_digests"][cp_s].is_string());

    // a checkpoint for another shard is refused
    let other = ["search-pl", "--n", "5", "--k", "61", "--shards", "2", "--shard-index", "0", "--checkpoint", cp_s];
    assert_eq!(run_json(&other).0, 5);
}

#[test]
fn report_round_trips() {
    let (_, v) = run_json(&["verify"]);
    let s = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&s).unwrap(), v);
    for key in ["schema_version", "subcommand", "parameters", "verdicts", "timing", "artifact_version", "input_digests"]
    {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.svg");
    let st = bin()
        .args(["render", "--k", "16", "--images", "1,5", "--extent", "3", "--radii", "1,2,3,4"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(st.status.success());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<rect").count(), 49);
    assert_eq!(svg.matches("data-radius=").count(), 4);
}
