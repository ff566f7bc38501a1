use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn vknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vknot")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn schema() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(vknot(&["invariants", "--inline", "closed: O1+ O2+ U1+ U2+"]).status.code(), Some(0));
    assert_eq!(vknot(&["invariants", "--inline", "closed: O1+ X2+"]).status.code(), Some(2));
    assert_eq!(vknot(&["invariants", "--inline", "closed: O1+ U2+"]).status.code(), Some(2));
    assert_eq!(vknot(&["invariants", "/nonexistent/input.gauss"]).status.code(), Some(2));
    assert_eq!(vknot(&["invariants", "--corpus", "no-such-knot"]).status.code(), Some(2));
    assert_eq!(vknot(&["corpus", "show", "no-such-knot"]).status.code(), Some(2));
    let capped = vknot(&["invariants", "--corpus", "trefoil", "--max-crossings", "2"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(!capped.stderr.is_empty());
    let flat = vknot(&["invariants", "--corpus", "long-flat-F", "--f"]);
    assert_eq!(flat.status.code(), Some(4));
    let closed_flat = vknot(&["invariants", "--inline", "closed: F1+ F2+ F1+ F2+", "--khovanov"]);
    assert_eq!(closed_flat.status.code(), Some(4));
}

#[test]
fn homology_cap_is_reported() {
    let out = vknot(&["invariants", "--corpus", "cinquefoil", "--khovanov", "--max-homology-crossings", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn text_output() {
    let out = stdout(&vknot(&["invariants", "--corpus", "virtual-trefoil", "--odd-writhe"]));
    assert_eq!(out, "code: closed: O1+ O2+ U1+ U2+\nJ = 2\n");
    let out = stdout(&vknot(&["invariants", "--corpus", "kishino", "--f", "--jones"]));
    assert!(out.contains("f = 1\n") && out.contains("V(t) = 1\n"), "{out}");
    let out = stdout(&vknot(&["invariants", "--inline", "closed:", "--khovanov"]));
    assert!(out.contains("Khovanov mod 2 = (0,-1):1 (0,1):1"), "{out}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["invariants", "--corpus", "ks", "--json"],
        vec!["invariants", "--corpus", "vk5-129"],
        vec!["scramble", "--corpus", "kishino", "--moves", "40", "--seed", "9", "--trace"],
        vec!["check-invariance", "--corpus", "virtual-trefoil", "--trials", "5", "--json"],
    ] {
        let a = vknot(&args);
        let b = vknot(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_validate_against_the_schema() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let cases: [&[&str]; 7] = [
        &["--corpus", "virtual-trefoil"],
        &["--corpus", "ks", "--z-mode"],
        &["--corpus", "long-flat-F"],
        &["--corpus", "long-L"],
        &["--corpus", "kishino", "--timing"],
        &["--corpus", "trefoil", "--jones", "--khovanov", "--arrow-homology"],
        &["--inline", "closed: F1+ F2- F1+ F2-"],
    ];
    for case in cases {
        let mut args = vec!["invariants", "--json"];
        args.extend_from_slice(case);
        let out = vknot(&args);
        assert_eq!(out.status.code(), Some(0), "{case:?}");
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{case:?}: {errors:?}");
        let mut broken = report.clone();
        broken["reports"][0]["crossings"] = Value::from("three");
        assert!(!validator.is_valid(&broken));
    }
}

#[test]
fn json_and_text_agree() {
    let text = stdout(&vknot(&["invariants", "--corpus", "trefoil", "--odd-writhe", "--f", "--arrow"]));
    let json: Value =
        serde_json::from_slice(&vknot(&["invariants", "--corpus", "trefoil", "--odd-writhe", "--f", "--arrow", "--json"]).stdout)
            .unwrap();
    let inv = &json["reports"][0]["invariants"];
    assert!(text.contains(&format!("J = {}\n", inv["odd_writhe"])));
    assert!(text.contains(&format!("f = {}\n", inv["f"]["text"].as_str().unwrap())));
    assert!(text.contains(&format!("W = {}\n", inv["arrow"]["W"]["text"].as_str().unwrap())));
    assert_eq!(json["reports"][0]["crossings"], 3);
}

#[test]
fn scramble_with_no_moves_echoes_the_code() {
    let out = vknot(&["scramble", "--inline", "closed: O5+ O7+ U5+ U7+", "--moves", "0"]);
    assert_eq!(stdout(&out), "closed: O1+ O2+ U1+ U2+\n");
}

#[test]
fn scrambled_output_keeps_invariants() {
    let scrambled = stdout(&vknot(&["scramble", "--corpus", "virtual-trefoil", "--moves", "60", "--seed", "4"]));
    let code = scrambled.trim();
    let out = stdout(&vknot(&["invariants", "--inline", code, "--odd-writhe"]));
    assert!(out.ends_with("J = 2\n"), "{out}");
}

#[test]
fn check_invariance_passes_on_corpus_knots() {
    for name in ["virtual-trefoil", "kishino", "long-flat-F", "long-L"] {
        let out = vknot(&["check-invariance", "--corpus", name, "--trials", "20"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
        assert!(stdout(&out).starts_with("pass: 20 trials"));
    }
}

#[test]
fn corpus_commands() {
    let list = stdout(&vknot(&["corpus", "list"]));
    for name in ["unknot", "virtual-trefoil", "kishino", "ks", "vk5-129", "vk5-267", "long-flat-F"] {
        assert!(list.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    let show = stdout(&vknot(&["corpus", "show", "kishino"]));
    let mut lines = show.lines();
    assert_eq!(lines.next(), Some("closed: O1- O2+ U3- U2+ O3- O4+ U1- U4+"));
    assert!(show.contains("# provenance: derived-from-figure"));
    // the shown text is itself valid input
    let dir = std::env::temp_dir().join(format!("vknot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("kishino.gauss");
    std::fs::write(&file, &show).unwrap();
    let out = stdout(&vknot(&["invariants", file.to_str().unwrap(), "--f"]));
    assert!(out.contains("f = 1\n"), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();

    let json: Value = serde_json::from_slice(&vknot(&["corpus", "show", "ks", "--json"]).stdout).unwrap();
    assert_eq!(json["provenance"], "derived-from-figure");
}
