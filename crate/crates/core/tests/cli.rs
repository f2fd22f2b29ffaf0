use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hourglass::descriptor::{parse_descriptor, parse_descriptor_str, to_string};
use hourglass::generate::{gen_instance, GenKind, GenParams};
use hourglass::linalg::spectral_radius;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn hourglass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hourglass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn extremal_minimum_of_diagonal_pair() {
    let out = hourglass(&[
        "extremal",
        "-i",
        fixture("pair_b.json").to_str().unwrap(),
        "--direction",
        "min",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_report(&out);
    assert!((r["results"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(r["command"], "extremal");
    assert_eq!(r["input_digests"][0].as_str().unwrap().len(), 64);
}

#[test]
fn finiteness_exit_codes() {
    let out = hourglass(&["finiteness", "-i", fixture("pair_a.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json_report(&out);
    assert_eq!(r["status"], "FAIL");
    let failure = &r["results"]["failure"];
    assert_eq!(failure["n"], 2);
    let mut word: Vec<u64> = failure["word"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    word.sort();
    assert_eq!(word, vec![0, 1]);
    for key in ["tol", "seed", "n_max", "guard", "sandwich_samples"] {
        assert!(
            r["parameters"].get(key).is_some(),
            "missing parameter {key}"
        );
    }

    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("iru.json");
    let out = hourglass(&[
        "gen",
        "--kind",
        "iru",
        "--n",
        "3",
        "--seed",
        "11",
        "-o",
        gen.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = hourglass(&[
        "finiteness",
        "-i",
        gen.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("finiteness: PASS"));
}

#[test]
fn descriptor_error_classes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("malformed.json", "{\"schema_version\": 1, ", 1),
        (
            "schema.json",
            r#"{"schema_version": 1, "type": "iru", "rows": []}"#,
            3,
        ),
        (
            "version.json",
            r#"{"schema_version": 7, "type": "identity", "n": 2}"#,
            3,
        ),
        (
            "dimension.json",
            r#"{"schema_version": 1, "type": "explicit", "matrices": [[[1, 0], [0, 1]], [[1]]]}"#,
            4,
        ),
    ];
    for (name, text, code) in cases {
        let path = write(dir.path(), name, text);
        let out = hourglass(&["radius", "-i", &path]);
        assert_eq!(
            out.status.code(),
            Some(code),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
    }
    let out = hourglass(&["radius", "-i", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hourglass(&["radius", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hourglass(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dimension_error_reports_json_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "d.json",
        r#"{"schema_version": 1, "type": "product", "children": [
            {"type": "identity", "n": 2},
            {"type": "scale", "factor": 2, "children": [{"type": "identity", "n": 3}]}]}"#,
    );
    let out = hourglass(&["radius", "-i", &path]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.children[1]"));
}

#[test]
fn plus_minus_identity_fixture() {
    let path = fixture("plus_minus_identity.json");
    let out = hourglass(&["radius", "-i", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_report(&out);
    for m in r["results"]["members"].as_array().unwrap() {
        assert!((m["rho_gelfand"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
    let hourglass::SetExpr::Leaf(hourglass::sets::SetLeaf::Explicit(s)) =
        parse_descriptor(&path).unwrap()
    else {
        panic!("explicit fixture")
    };
    let mid = s.convex_combination(&[0.5, 0.5]).unwrap();
    assert_eq!(mid, hourglass::Matrix::zeros(2, 2));
    assert_eq!(spectral_radius(&mid).unwrap(), 0.0);
}

#[test]
fn gen_is_byte_identical_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["iru", "chain", "expr"] {
        let a = dir.path().join(format!("{kind}-a.json"));
        let b = dir.path().join(format!("{kind}-b.json"));
        for p in [&a, &b] {
            let out = hourglass(&[
                "gen",
                "--kind",
                kind,
                "--seed",
                "99",
                "--depth",
                "3",
                "-o",
                p.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0));
        }
        let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(ta, tb);
        let stdout = hourglass(&["gen", "--kind", kind, "--seed", "99", "--depth", "3"]).stdout;
        assert_eq!(stdout, ta);
        parse_descriptor(&a).unwrap();
    }
    let out = hourglass(&["gen", "--lo", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hourglass(&["gen", "--lo", "0", "--allow-boundary"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn generated_descriptors_round_trip() {
    for seed in 0..60 {
        for kind in [GenKind::Iru, GenKind::Chain, GenKind::Expr] {
            let p = GenParams {
                kind,
                seed,
                depth: 3,
                ..GenParams::default()
            };
            let e = gen_instance(&p).unwrap();
            let text = to_string(&e);
            assert_eq!(
                parse_descriptor_str(&text).unwrap(),
                e,
                "seed {seed} {kind:?}"
            );
            assert_eq!(to_string(&parse_descriptor_str(&text).unwrap()), text);
        }
    }
}

#[test]
fn reports_are_reproducible_and_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("e.json");
    hourglass(&[
        "gen",
        "--kind",
        "expr",
        "--seed",
        "3",
        "--max-size",
        "60",
        "-o",
        gen.to_str().unwrap(),
    ]);
    let input = gen.to_str().unwrap();
    let run = |threads: Option<&str>, cmd: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hourglass"));
        c.args([cmd, "-i", input, "--n-max", "2"]);
        if let Some(t) = threads {
            c.env("HOURGLASS_THREADS", t);
        }
        let out = c.output().unwrap();
        let mut r: Value = serde_json::from_slice(&out.stdout).unwrap();
        r.as_object_mut().unwrap().remove("wall_time_s");
        (out.status.code(), r)
    };
    for cmd in ["finiteness", "jsr"] {
        let a = run(None, cmd);
        let b = run(Some("1"), cmd);
        let c = run(Some("3"), cmd);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
    let out = Command::new(env!("CARGO_BIN_EXE_hourglass"))
        .args(["jsr", "-i", input])
        .env("HOURGLASS_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_and_text_formats() {
    let path = fixture("pair_a.json");
    let out = hourglass(&[
        "jsr",
        "-i",
        path.to_str().unwrap(),
        "--n-max",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,rho_hat_n,rho_check_n,norm_upper_n,norm_lower_n")
    );
    let row2: Vec<f64> = lines
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(row2[0], 2.0);
    assert!((row2[1] - 2.0).abs() < 1e-12);
    let out = hourglass(&["lsr", "-i", path.to_str().unwrap(), "--format", "text"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("lsr: OK"));
}

#[test]
fn remaining_commands() {
    let a = fixture("pair_a.json");
    let b = fixture("pair_b.json");
    let out = hourglass(&[
        "hausdorff",
        "-i",
        a.to_str().unwrap(),
        "--other",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_report(&out)["results"]["distance"].as_f64(), Some(2.0));
    assert_eq!(
        json_report(&out)["input_digests"].as_array().unwrap().len(),
        2
    );

    let out = hourglass(&["conv-check", "-i", b.to_str().unwrap(), "--n-max", "1"]);
    assert_eq!(out.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let iru = dir.path().join("iru.json");
    hourglass(&[
        "gen",
        "--n",
        "3",
        "--seed",
        "5",
        "-o",
        iru.to_str().unwrap(),
    ]);
    for args in [
        vec!["simplex", "-i", iru.to_str().unwrap(), "--direction", "min"],
        vec!["hset-probe", "-i", iru.to_str().unwrap(), "--trials", "100"],
    ] {
        let out = hourglass(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
    // simplex refuses boundary sets unless lifted
    let boundary = write(
        dir.path(),
        "b.json",
        r#"{"schema_version": 1, "type": "iru", "row_sets": [[[1, 0], [0, 1]], [[1, 1]]]}"#,
    );
    assert_eq!(
        hourglass(&["simplex", "-i", &boundary]).status.code(),
        Some(1)
    );
    let out = hourglass(&["simplex", "-i", &boundary, "--epsilon", "1e-4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json_report(&out)["parameters"]["epsilon"].as_f64(),
        Some(1e-4)
    );

    let pair = write(
        dir.path(),
        "pair.json",
        r#"{"schema_version": 1, "type": "explicit",
            "matrices": [[[2, 0.1], [0.1, 0.1]], [[0.1, 0.1], [0.1, 2]]]}"#,
    );
    let out = hourglass(&["hset-probe", "-i", &pair, "--trials", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_report(&out)["status"], "VIOLATION");
}
