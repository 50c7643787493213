use std::path::{Path, PathBuf};

use lqhopf::cli::run;
use serde_json::Value;
use tempfile::TempDir;

fn instances() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances")
}

fn lq(args: &[&str]) -> i32 {
    run(std::iter::once("lqhopf").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &TempDir, instance: &str, extra: &[&str]) -> PathBuf {
    let out = dir.path().join(format!("{instance}.bundle.json"));
    let input = instances().join(format!("{instance}.json"));
    let mut args = vec!["build", "--input", path_str(&input), "--out", path_str(&out)];
    args.extend_from_slice(extra);
    assert_eq!(lq(&args), 0, "build {instance}");
    out
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn d_dim(bundle: &Value) -> usize {
    bundle["d"]["labels"].as_array().unwrap().iter().map(|l| l.as_array().unwrap().len()).sum()
}

fn section<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["sections"].as_array().unwrap().iter().find(|s| s["name"] == name).unwrap_or_else(|| panic!("no section {name}"))
}

fn verify(dir: &TempDir, input: &Path, what: &str, extra: &[&str]) -> (i32, Value) {
    let out = dir.path().join(format!("verify-{what}.json"));
    let mut args = vec!["verify", "--what", what, "--input", path_str(input), "--out", path_str(&out)];
    args.extend_from_slice(extra);
    let code = lq(&args);
    let rep = if out.exists() { read(&out) } else { Value::Null };
    (code, rep)
}

#[test]
fn z2_bundle_has_136_dimensional_double() {
    let dir = TempDir::new().unwrap();
    let b = read(&build(&dir, "z2-three-loops", &[]));
    assert_eq!(d_dim(&b), 136);
    assert_eq!(b["format"], "lqhopf-bundle/1");
    let topics: Vec<&str> = b["ledger"].as_array().unwrap().iter().map(|e| e["topic"].as_str().unwrap()).collect();
    for t in ["construction", "r-unit-variant", "characters", "basis-order", "r-unit-arbitration"] {
        assert!(topics.contains(&t), "ledger lacks {t}");
    }
}

#[test]
fn one_loop_trivial_group_has_dimension_ten() {
    let dir = TempDir::new().unwrap();
    assert_eq!(d_dim(&read(&build(&dir, "one-loop", &[]))), 10);
}

#[test]
fn malformed_table_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    let input = instances().join("bad-table.json");
    assert_eq!(lq(&["build", "--input", path_str(&input), "--out", path_str(&out)]), 2);
    assert!(!out.exists());
    let bad = dir.path().join("syntax.json");
    std::fs::write(&bad, "{\n  \"group\": \"Z2\",\n  \"level\": oops\n}\n").unwrap();
    assert_eq!(lq(&["build", "--input", path_str(&bad), "--out", path_str(&out)]), 2);
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"group": "Z7x"}"#).unwrap();
    assert_eq!(lq(&["build", "--input", path_str(&unknown), "--out", path_str(&out)]), 2);
    let missing = dir.path().join("absent.json");
    assert_eq!(lq(&["build", "--input", path_str(&missing), "--out", path_str(&out)]), 2);
}

#[test]
fn char_two_is_rejected_for_the_z2_example() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    let input = instances().join("z2-three-loops.json");
    assert_eq!(lq(&["build", "--input", path_str(&input), "--field", "2", "--out", path_str(&out)]), 2);
    assert_eq!(lq(&["build", "--input", path_str(&input), "--field", "5", "--out", path_str(&out)]), 0);
}

#[test]
fn every_verifier_passes_on_the_z2_bundle() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "z2-three-loops", &[]);
    for what in ["hopf", "pairing", "copairing", "lqt", "duality"] {
        let (code, rep) = verify(&dir, &b, what, &[]);
        assert_eq!(code, 0, "{what}: {rep:#}");
        assert_eq!(rep["passed"], true);
        assert_eq!(section(&rep, "bundle")["checks"].as_array().unwrap().len(), 4);
    }
    let (_, rep) = verify(&dir, &b, "lqt", &["--level", "1"]);
    let lqt = section(&rep, "lqt:1");
    for axiom in ["CP1", "LQT1", "LQT2", "LQT3", "ACO1", "ACO2", "R-CP3", "R-CP4", "LQT4'"] {
        assert!(lqt["checks"].as_array().unwrap().iter().any(|c| c["name"] == axiom && c["status"] == "pass"), "{axiom}");
    }
}

#[test]
fn budget_preflight_refuses_instead_of_under_verifying() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "z2-three-loops", &[]);
    let (code, _) = verify(&dir, &b, "lqt", &["--level", "2"]);
    assert_eq!(code, 2);
    let out = dir.path().join("ybe.json");
    assert_eq!(lq(&["ybe-defect", "--input", path_str(&b), "--level", "1", "--out", path_str(&out)]), 2);
    assert_eq!(lq(&["ybe-defect", "--input", path_str(&b), "--level", "0", "--out", path_str(&out)]), 0);
    let (code, _) = verify(&dir, &b, "hopf", &["--max-degree", "3"]);
    assert_eq!(code, 2, "bundle flags that would change the algebra are refused");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = std::fs::read(build(&dir, "z2-three-loops", &[])).unwrap();
    let other = TempDir::new().unwrap();
    let b = std::fs::read(build(&other, "z2-three-loops", &["--threads", "3"])).unwrap();
    assert_eq!(a, b);
    let bundle = dir.path().join("z2-three-loops.bundle.json");
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    assert_eq!(lq(&["report", "--input", path_str(&bundle), "--out", path_str(&r1)]), 0);
    assert_eq!(lq(&["report", "--input", path_str(&bundle), "--threads", "2", "--out", path_str(&r2)]), 0);
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());
}

#[test]
fn bundle_roundtrip_reproduces_the_instance_report() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "z2-three-loops", &[]);
    let input = instances().join("z2-three-loops.json");
    let (_, from_instance) = verify(&dir, &input, "lqt", &[]);
    let (_, from_bundle) = verify(&dir, &b, "lqt", &[]);
    let strip = |r: &Value| {
        let mut r = r.clone();
        r["sections"].as_array_mut().unwrap().retain(|s| s["name"] != "bundle");
        r
    };
    assert_eq!(strip(&from_instance), strip(&from_bundle));
    assert_eq!(from_instance["instance"], read(&b)["instance"]);
}

fn tampered(dir: &TempDir, bundle: &Path, name: &str, f: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v = read(bundle);
    f(&mut v);
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    p
}

fn failing_checks(rep: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for s in rep["sections"].as_array().unwrap() {
        for c in s["checks"].as_array().unwrap() {
            if c["status"] == "fail" {
                out.push((c["name"].as_str().unwrap().into(), c["witness"].as_str().unwrap_or("").into()));
            }
        }
    }
    out
}

#[test]
fn tampered_bundles_fail_with_witnesses() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "z2-three-loops", &[]);

    let p = tampered(&dir, &b, "p.json", |v| {
        v["levels"][1]["p"].as_array_mut().unwrap().pop();
    });
    let (code, rep) = verify(&dir, &p, "hopf", &[]);
    assert_eq!(code, 1);
    let fails = failing_checks(&rep);
    assert!(fails.iter().any(|(n, w)| n == "truncation-coherence" && w.contains("P_1")), "{fails:?}");

    let d = tampered(&dir, &b, "d.json", |v| {
        let mul = v["d"]["mul"].as_array_mut().unwrap();
        let last = mul.last_mut().unwrap();
        last[2][0][1] = Value::String("7".into());
    });
    let (code, rep) = verify(&dir, &d, "pairing", &[]);
    assert_eq!(code, 1);
    let fails = failing_checks(&rep);
    assert!(fails.iter().any(|(n, w)| n == "double-cross-product-table" && !w.is_empty()), "{fails:?}");

    let t = tampered(&dir, &b, "t.json", |v| {
        v["tau_inv"][0][2] = Value::String("2".into());
    });
    let (code, rep) = verify(&dir, &t, "copairing", &[]);
    assert_eq!(code, 1);
    assert!(failing_checks(&rep).iter().any(|(n, _)| n == "tau-inverse"));

    let garbage = tampered(&dir, &b, "g.json", |v| {
        v["levels"][0]["r"][0][0] = Value::String("9:9".into());
    });
    assert_eq!(verify(&dir, &garbage, "hopf", &[]).0, 2);
}

fn braid(dir: &TempDir, input: &Path, modules: &[&str], extra: &[&str]) -> (i32, Value) {
    let out = dir.path().join("braid.json");
    let mut args = vec!["braid", "--input", path_str(input), "--out", path_str(&out)];
    for m in modules {
        args.extend(["--module", m]);
    }
    args.extend_from_slice(extra);
    let code = lq(&args);
    let rep = if out.exists() { read(&out) } else { Value::Null };
    (code, rep)
}

fn matrix(rep: &Value, name: &str) -> Vec<Vec<String>> {
    serde_json::from_value(section(rep, name)["data"]["matrix"].clone()).unwrap()
}

#[test]
fn s3_class_braiding_is_the_conjugation_permutation() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "s3-level0", &[]);
    let (code, rep) = braid(&dir, &b, &["builtin:class:213", "builtin:trivial"], &["--yd"]);
    assert_eq!(code, 0, "{rep:#}");
    let m = matrix(&rep, "braiding:class of 213|class of 213");
    assert_eq!((m.len(), m[0].len()), (9, 9));
    let basis = ["213", "321", "132"];
    let g = lqhopf::quivers::FiniteGroup::symmetric(3);
    let idx = |l: &str| g.elements().find(|x| g.label(*x) == l).unwrap();
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            // (x, y) ↦ (x y x⁻¹, x)
            let xyx = g.label(g.conj(idx(x), idx(y))).to_string();
            let k = basis.iter().position(|b| *b == xyx).unwrap();
            let row = k * 3 + i;
            for r in 0..9 {
                let want = if r == row { "1" } else { "0" };
                assert!(m[r][i * 3 + j].starts_with(want), "C({x}⊗{y}) row {r}");
            }
        }
    }
    assert_eq!(section(&rep, "hexagon:class of 213|class of 213|class of 213")["checks"][2]["name"], "braid-relation");
    let t = matrix(&rep, "braiding:trivial|trivial");
    assert_eq!(t, vec![vec!["1/1".to_string()]]);
}

#[test]
fn braidings_need_not_be_symmetric_but_are_invertible() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "s3-level0", &[]);
    let (code, rep) = braid(&dir, &b, &["builtin:class:213", "builtin:conjugation"], &[]);
    assert_eq!(code, 0);
    let uv = matrix(&rep, "braiding:class of 213|conjugation");
    let vu = matrix(&rep, "braiding:conjugation|class of 213");
    let f = lqhopf::exactlin::Field::Rational;
    let uv = lqhopf::exactlin::SparseMatrix::from_strings(f, &uv).unwrap();
    let vu = lqhopf::exactlin::SparseMatrix::from_strings(f, &vu).unwrap();
    assert!(!vu.mul(&uv).unwrap().is_identity());
    assert!(uv.inverse().is_some() && vu.inverse().is_some());
}

#[test]
fn module_certificates_load_and_bad_ones_fail() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "s3-level0", &[]);
    let cert = serde_json::json!({
        "name": "sign",
        "basis": ["v"],
        "degree_zero_only": true,
        "grading": [0],
        "actions": {}
    });
    let good = dir.path().join("sign.json");
    std::fs::write(&good, cert.to_string()).unwrap();
    let (code, rep) = braid(&dir, &b, &[path_str(&good)], &[]);
    assert_eq!(code, 1, "an all-zero action is not unital: {rep:#}");
    assert!(failing_checks(&rep).iter().any(|(n, _)| n == "unit"));

    let wrong_shape = dir.path().join("shape.json");
    let mut c = cert.clone();
    c["actions"]["p_123|123"] = serde_json::json!([["1", "0"]]);
    std::fs::write(&wrong_shape, c.to_string()).unwrap();
    assert_eq!(braid(&dir, &b, &[path_str(&wrong_shape)], &[]).0, 2);

    assert_eq!(braid(&dir, &b, &["builtin:nonsense"], &[]).0, 2);
}

#[test]
fn z2_example_character_lines_braid_and_coact() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "z2-three-loops", &[]);
    let (code, rep) = braid(&dir, &b, &["builtin:character:e:1,-1", "builtin:trivial"], &["--yd"]);
    assert_eq!(code, 0, "{rep:#}");
    assert_eq!(matrix(&rep, "braiding:character in degree e|character in degree e"), vec![vec!["1/1".to_string()]]);
    assert_eq!(section(&rep, "yd:character in degree e")["data"]["convention_mismatch"], false);
}

#[test]
fn emit_r_lists_labelled_terms() {
    let dir = TempDir::new().unwrap();
    let b = build(&dir, "z2-three-loops", &[]);
    let out = dir.path().join("r.json");
    assert_eq!(lq(&["emit-r", "--input", path_str(&b), "--out", path_str(&out)]), 0);
    let rep = read(&out);
    let levels = section(&rep, "r")["data"]["levels"].as_array().unwrap().clone();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[0]["p"].as_array().unwrap().len(), 2);
    assert_eq!(levels[1]["p"].as_array().unwrap().len(), 8);
    assert!(levels[1]["r"][0][0].as_str().unwrap().contains('|'));
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(lq(&["--help"]), 0);
    assert_eq!(lq(&["frobnicate"]), 2);
    assert_eq!(lq(&["verify", "--what", "everything", "--input", "x"]), 2);
}
