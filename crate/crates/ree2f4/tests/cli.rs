use std::path::PathBuf;
use std::process::{Command, Output};

fn ree2f4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ree2f4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ree2f4-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn classify_text() {
    let o = ree2f4(&["classify", "--n", "1", "--ell", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Phi8p f=1\n");
}

#[test]
fn smallest_degree_report() {
    let o = ree2f4(&[
        "verify-smallest-degree",
        "--case",
        "phi8p",
        "--n",
        "1",
        "--ell",
        "13",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "verify-smallest-degree");
    assert_eq!(v["ok"], true);
    assert_eq!(v["result"]["d0"], "64638");
    assert_eq!(v["result"]["verdict"], "Holds");
    let phi21 = v["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["label"] == "phi21")
        .unwrap();
    assert_eq!(phi21["value"], "11769507827/3");
    assert!(!phi21["trace"].as_array().unwrap().is_empty());
}

#[test]
fn hecke_csv() {
    let o = ree2f4(&["hecke", "--n", "1", "--ell", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], "rep,ind,sigma1,new-d2-S1,new-d2-S0");
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &[
            "bounds", "--case", "phi8m", "--n", "2", "--ell", "5", "--format", "json",
        ][..],
        &[
            "matrix",
            "--case",
            "ell3",
            "--expand-relations",
            "--format",
            "csv",
        ][..],
        &["degrees", "--n", "2", "--series"][..],
    ] {
        assert_eq!(ree2f4(args).stdout, ree2f4(args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(ree2f4(&["classify", "--n", "1"]).status.code(), Some(2));
    assert_eq!(
        ree2f4(&["classify", "--n", "1", "--ell", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ree2f4(&["pins", "--case", "linear", "--n", "1", "--ell", "13"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ree2f4(&["validate-tables", "--dir", "/nonexistent"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(ree2f4(&["selfcheck"]).status.code(), Some(0));
}

#[test]
fn report_to_file() {
    let dir = scratch_dir("out");
    let path = dir.join("order.json");
    let o = ree2f4(&[
        "order",
        "--n",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["value"], "264905352699586176614400");
}

#[test]
fn edited_table_fails_its_checksum_until_the_manifest_is_rewritten() {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let dir = scratch_dir("tables");
    for entry in std::fs::read_dir(&data).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    let d = dir.to_str().unwrap();
    assert_eq!(
        ree2f4(&["validate-tables", "--dir", d]).status.code(),
        Some(0)
    );

    let pins = dir.join("forced-values.tbl");
    let text = std::fs::read_to_string(&pins).unwrap();
    std::fs::write(&pins, format!("{text}# edited\n")).unwrap();
    assert_eq!(
        ree2f4(&["validate-tables", "--dir", d]).status.code(),
        Some(3)
    );
    assert_eq!(
        ree2f4(&["validate-tables", "--dir", d, "--write-manifest"])
            .status
            .code(),
        Some(0)
    );

    std::fs::write(&pins, format!("{text}broken | row\n")).unwrap();
    assert_eq!(
        ree2f4(&["validate-tables", "--dir", d, "--write-manifest"])
            .status
            .code(),
        Some(3)
    );
}
