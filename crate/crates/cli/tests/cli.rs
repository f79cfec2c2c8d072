use std::process::{Command, Output};

use serde_json::Value;

fn pil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pil")).args(args).output().unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/result.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

const RUNS: &[&[&str]] = &[
    &["classify", "--poly", "0,1,1"],
    &["classify", "--poly", "-1,0,1", "--max-period", "3"],
    &["index", "--poly", "-1,0,1", "--cycle", "0;-1", "--radius", "0.1", "--levels", "8"],
    &["index", "--poly", "0,0,1", "--point", "0.3", "--anchor", "1", "--radius", "0.5", "--levels", "6", "--critical", "0"],
    &["signature", "--poly", "0,0,1", "--point", "0", "--critical", "0", "--radius", "0.5", "--rings", "3", "--levels", "16"],
    &["signature", "--poly", "0,1,1", "--point", "0", "--critical", "-0.5", "--radius", "0.3", "--rings", "1", "--levels", "auto"],
    &["census", "--poly", "0,0,1", "--point", "0", "--w-center", "0.5", "--w-radius", "0.05", "--levels", "5"],
    &["blaschke-conj", "--product", "0.5773502691896258i,-0.5773502691896258i", "--depth", "6"],
    &["angle-bits", "--theta", "1/3", "--d", "2", "--eps", "0.5", "--len", "64"],
    &["angle-bits", "--theta", "champernowne2", "--eps", "0.25", "--len", "32"],
    &["boundary-sig", "--theta", "champernowne2"],
    &["boundary-sig", "--theta", "1/2", "--len", "64"],
];

#[test]
fn every_command_emits_schema_valid_json() {
    let validator = schema();
    for args in RUNS {
        let out = pil(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let json: Value = serde_json::from_slice(&out.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&json).map(|e| format!("{e} at {}", e.instance_path)).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        assert_eq!(json["command"], args[0]);
    }
}

#[test]
fn documented_examples() {
    let json = |args: &[&str]| -> Value { serde_json::from_slice(&pil(args).stdout).unwrap() };

    let c = json(&["classify", "--poly", "0,1,1", "--max-period", "1"]);
    assert_eq!(c["cycles"][0]["kind"], "parabolic(1)");
    assert_eq!(c["critical"][0]["point"][0].as_f64(), Some(-0.5));
    assert_eq!(c["critical"][0]["basins"][0]["verdict"], "inside");

    let s = json(&["signature", "--poly", "0,0,1", "--point", "0", "--critical", "0", "--radius", "0.5", "--levels", "16"]);
    assert_eq!(s["stabilized"], true);
    assert_eq!(s["generator"], "|1");

    let b = json(&["boundary-sig", "--theta", "champernowne2"]);
    assert_eq!(b["depth"], 512);
    assert_eq!(b["chain"].as_array().unwrap().len(), 8);
}

#[test]
fn csv_tables() {
    let out = pil(&["census", "--poly", "0,0,1", "--point", "0", "--w-center", "0.5", "--w-radius", "0.05", "--levels", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "level,count\n1,1\n2,2\n3,4\n4,8\n");

    let out = pil(&["index", "--poly", "0,0,1", "--point", "0", "--radius", "0.5", "--levels", "3", "--format", "csv", "--samples", "64"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("level,vertex,re,im"));
    let levels: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert!(levels.contains(&"1") && levels.contains(&"3"));

    let out = pil(&["angle-bits", "--theta", "1/2", "--eps", "0.5", "--len", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,bit\n1,0\n2,1\n3,1\n");
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("pil-cli-test-{}.json", std::process::id()));
    let out = pil(&["angle-bits", "--theta", "0", "--eps", "0.5", "--len", "4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["window"], "1111");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| pil(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["classify", "--poly", "0,1"]), 1);
    assert_eq!(code(&["classify"]), 1);
    assert_eq!(code(&["angle-bits", "--theta", "x", "--eps", "0.5", "--len", "4"]), 1);
    assert_eq!(code(&["blaschke-conj", "--product", "0.5,0.5@0.25"]), 1);
    // a point that is not fixed is rejected before any lifting
    assert_eq!(code(&["index", "--poly", "0,0,1", "--point", "0.5", "--radius", "0.1", "--levels", "4"]), 1);
    // a tower that ends after two levels cannot fill an 8-level window
    assert_eq!(
        code(&[
            "signature", "--poly", "0,0,1", "--point", "0", "--critical", "0", "--radius", "0.5", "--rings", "0",
            "--levels", "4", "--min-depth", "8",
        ]),
        3
    );
}
