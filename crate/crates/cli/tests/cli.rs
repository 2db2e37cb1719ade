use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contact-lie"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("CONTACT_LIE_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "golden {name}");
}

#[test]
fn bracket_goldens() {
    for (f, g, want) in [
        ("x", "z", "1\n"),
        ("y", "x", "-x\n"),
        ("x^2", "z^2", "4*x*z\n"),
        ("1", "y", "1\n"),
    ] {
        let o = bin(&["bracket", f, g]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), want, "{{{f}, {g}}}");
    }
}

#[test]
fn bracket_json() {
    let o = bin(&["--format", "json", "bracket", "x*z", "y"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bracket"], "0");
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(bin(&["bracket", "x^", "z"]).status.code(), Some(2));
    assert_eq!(bin(&["extend", "x^3"]).status.code(), Some(2));
    assert_eq!(bin(&["audit", "I.9"]).status.code(), Some(2));
    assert_eq!(bin(&["catalog", "show", "I.9"]).status.code(), Some(2));
}

#[test]
fn options_are_validated() {
    for args in [
        &["--cutoff", "1", "verify"][..],
        &["--tol", "-1", "audit"],
        &["--samples", "0", "audit"],
        &["--format", "xml", "bracket", "x", "z"],
        &["verify", "--unknown"],
        &["nonsense"],
    ] {
        assert_eq!(bin(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn extend_goldens() {
    let i4 = bin(&["extend", "x^2+z^2", "2*y-x*z"]);
    assert_eq!(i4.status.code(), Some(0));
    golden("extend_i4.txt", &stdout(&i4));
    let i6 = bin(&["extend", "x^2+z^2"]);
    golden("extend_i6.txt", &stdout(&i6));
    let grown = bin(&["--cutoff", "4", "extend", "x^2", "x*z", "z^2", "y", "--h1", "W1"]);
    golden("extend_gl2_w1.txt", &stdout(&grown));
    let json = bin(&["--format", "json", "extend", "x^2", "x*z", "z^2", "y", "--h1", "W1"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["status"], "growth_exceeded");
    let i1 = bin(&["--format", "json", "extend", "x^2", "x*z", "z^2", "y", "--h1", "W2"]);
    let v: serde_json::Value = serde_json::from_slice(&i1.stdout).unwrap();
    assert_eq!(v["dimension"], 10);
}

#[test]
fn catalog_and_fingerprints() {
    golden("catalog_list.txt", &stdout(&bin(&["catalog", "list"])));
    golden("fingerprints.txt", &stdout(&bin(&["fingerprint"])));
    let export = bin(&["catalog", "export"]);
    let shipped = include_str!("../../../data/catalog.json");
    assert_eq!(stdout(&export), shipped);
}

#[test]
fn prolong_golden() {
    golden("prolong_x2.txt", &stdout(&bin(&["prolong", "x^2", "--order", "3"])));
    assert_eq!(bin(&["prolong", "--plane", "x"]).status.code(), Some(2));
}

#[test]
fn audit_single_row_is_deterministic() {
    let a = bin(&["--format", "json", "audit", "I.5"]);
    let b = bin(&["--format", "json", "audit", "I.5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"][0]["selected_variant"], "denominator y3^2");
}

#[test]
fn audit_i4_names_the_variant() {
    let o = bin(&["--samples", "50", "audit", "I.4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("pass I.4 differential"), "{text}");
    assert!(text.contains("[-7/6*D(Q)^2]"), "{text}");
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let o = bin(&["--format", "json", "--out", path.to_str().unwrap(), "bracket", "x", "z"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["bracket"], "1");
}

#[test]
fn verify_passes_and_rejects_a_corrupted_catalog() {
    let o = bin(&["--format", "json", "--cutoff", "4", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"][0]["detail"]["dims"], serde_json::json!([10, 7, 6, 8, 5, 4]));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.json");
    let mut entries: serde_json::Value = serde_json::from_str(include_str!("../../../data/catalog.json")).unwrap();
    let i3 = entries
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["id"] == "I.3")
        .unwrap();
    i3["basis"][5] = "z^3".into();
    std::fs::write(&path, serde_json::to_string(&entries).unwrap()).unwrap();
    let bad = bin(&["verify", "--catalog", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("FAIL catalog"), "{text}");
    assert!(text.contains("I.3: NotClosed"), "{text}");
    assert!(text.contains("verify: failed at catalog"), "{text}");
}
