use std::io::Write;
use std::process::{Command, Output, Stdio};

use bernlab_core::inequalities::{check, CheckParams};
use bernlab_core::operators::apply;
use bernlab_core::{Complex64, InequalityId, NormExponent, Poly, Verdict};
use serde_json::Value;

const TWO_Z5_PLUS_1: &str = r#"{"n":5,"coeffs":[[1,0],[0,0],[0,0],[0,0],[0,0],[2,0]]}"#;

fn bernlab(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bernlab"))
        .args(args)
        .env_remove("BERNLAB_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn bernlab");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

#[test]
fn check_boundary_alpha_holds() {
    let o = bernlab(&["check", "--ineq", "thm1-first", "--alpha", "2.5,0", "--p", "2"], TWO_Z5_PLUS_1);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert!((v["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["verdict"], "HOLDS");
    assert_eq!(v["manifest"]["subcommand"], "check");
    assert_eq!(v["manifest"]["params"]["ineq"], "THM1_FIRST");
}

#[test]
fn exit_codes_follow_verdicts() {
    let p = Poly::from_json_str(TWO_Z5_PLUS_1).unwrap();
    let z2 = r#"{"n":2,"coeffs":[[1,0],[0,0],[1,0]]}"#;
    let z2p = Poly::from_json_str(z2).unwrap();
    let cases: [(&str, &Poly, &str, Option<&str>, &str, &str); 6] = [
        (TWO_Z5_PLUS_1, &p, "thm1-first", Some("3,0"), "2", "VIOLATED"),
        (TWO_Z5_PLUS_1, &p, "thm1-first", Some("-1,4"), "inf", "HOLDS"),
        (TWO_Z5_PLUS_1, &p, "thm2-first", Some("1,1"), "2", "INCONCLUSIVE"),
        (z2, &z2p, "thm2-second", Some("1,0"), "2", "VIOLATED"),
        (z2, &z2p, "thm3-first", Some("1,0"), "1", "HOLDS"),
        (TWO_Z5_PLUS_1, &p, "jain-sup", Some("2.5,0"), "inf", "HOLDS"),
    ];
    for (text, poly, ineq, alpha, pstr, verdict) in cases {
        let mut args = vec!["check", "--ineq", ineq, "--p", pstr];
        let needs_gamma = ineq.ends_with("second");
        if let Some(a) = alpha {
            args.extend(["--alpha", a]);
            if needs_gamma {
                args.extend(["--gamma", a]);
            }
        }
        let o = bernlab(&args, text);
        let v = json_out(&o);
        assert_eq!(v["verdict"], verdict, "{args:?}");

        let id: InequalityId = ineq.parse().unwrap();
        let a = alpha.map(|s| bernlab_core::explore::parse_complex(s).unwrap());
        let g = if needs_gamma { a } else { None };
        let e: NormExponent = pstr.parse().unwrap();
        let lib = check(id, poly, &CheckParams::new(a, g, e)).unwrap();
        let code = match lib.verdict {
            Verdict::Holds => 0,
            Verdict::Violated => 2,
            Verdict::Inconclusive => 3,
        };
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert_eq!(v["ratio"].as_f64().unwrap(), lib.ratio);
    }
}

#[test]
fn norm_mahler_of_binomial() {
    let o = bernlab(&["norm", "--p", "0"], TWO_Z5_PLUS_1);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(v["achieved_tol"].is_number());
    assert!(v["warnings"].is_array());
}

#[test]
fn roots_output_shape() {
    let o = bernlab(&["roots"], TWO_Z5_PLUS_1);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["roots"].as_array().unwrap().len(), 5);
    assert_eq!(v["residuals"].as_array().unwrap().len(), 5);
    assert!((v["min_modulus"].as_f64().unwrap() - 0.5f64.powf(0.2)).abs() < 1e-12);
    assert_eq!(v["converged"], true);
}

#[test]
fn op_output_round_trips() {
    let o = bernlab(&["op", "--alpha", "-1,2", "--gamma", "0.5,0"], TWO_Z5_PLUS_1);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let q = Poly::from_json_str(&text).unwrap();
    let p = Poly::from_json_str(TWO_Z5_PLUS_1).unwrap();
    let expect = apply(&p, Complex64::new(-1.0, 2.0), Some(Complex64::new(0.5, 0.0)));
    assert_eq!(q, expect);
    // printing the parsed polynomial again gives the same canonical form
    let again = serde_json::to_string(&q).unwrap();
    assert_eq!(Poly::from_json_str(&again).unwrap(), q);
}

#[test]
fn malformed_poly_is_usage_error_with_path() {
    for (input, path) in [
        (r#"{"n":2,"coeffs":[[1,0],[0,0]]}"#, "$.coeffs"),
        (r#"{"n":1,"coeffs":[[1,0],[1]]}"#, "$.coeffs[1]"),
        (r#"{"coeffs":[[1,0]]}"#, "$.n"),
        (r#"{"n":1,"coeffs":[[1,0],[0,0]]}"#, "$.coeffs[1]"),
        ("not json", "$"),
    ] {
        let o = bernlab(&["norm", "--p", "2"], input);
        assert_eq!(o.status.code(), Some(64), "{input}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(path), "{input}: {err}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(bernlab(&["fuzz", "--config", "missing.json"], "").status.code(), Some(64));
    assert_eq!(bernlab(&["frobnicate"], "").status.code(), Some(64));
    assert_eq!(bernlab(&["norm", "--p", "-1"], TWO_Z5_PLUS_1).status.code(), Some(64));
    assert_eq!(
        bernlab(&["check", "--ineq", "thm9", "--p", "2"], TWO_Z5_PLUS_1).status.code(),
        Some(64)
    );
    assert_eq!(
        bernlab(&["check", "--ineq", "thm1-first", "--p", "2"], TWO_Z5_PLUS_1).status.code(),
        Some(64)
    );
    assert_eq!(bernlab(&["--help"], "").status.code(), Some(0));
}

#[test]
fn degenerate_rhs_is_inconclusive() {
    let o = bernlab(
        &["check", "--ineq", "thm1-second", "--alpha", "5,0", "--gamma", "5,0", "--p", "2"],
        TWO_Z5_PLUS_1,
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fuzz_config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"inequality_id":"THM1_FIRST","count":30,"degree_range":[1,6],"seed":9,"p_grid":["2","inf"]}"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let cfg_s = cfg.to_str().unwrap();
    let out_s = out.to_str().unwrap();
    let o = bernlab(&["fuzz", "--config", cfg_s, "--out", out_s, "--threads", "2"], "");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["evaluations"], 60);
    assert_eq!(v["counts"]["violated"], 0);
    assert_eq!(v["manifest"]["seed"], 9);
    assert_eq!(v["manifest"]["threads"], 2);
    assert!(v["max_ratio"]["poly"]["coeffs"].is_array());

    // same config, different thread count: identical report body
    let o2 = bernlab(&["fuzz", "--config", cfg_s, "--threads", "1"], "");
    let mut v2 = json_out(&o2);
    let mut v1 = v.clone();
    v1.as_object_mut().unwrap().remove("manifest");
    v2.as_object_mut().unwrap().remove("manifest");
    assert_eq!(v1, v2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"inequality_id":"THM1_FIRST","count":0}"#).unwrap();
    assert_eq!(bernlab(&["fuzz", "--config", bad.to_str().unwrap()], "").status.code(), Some(64));
}

#[test]
fn fuzz_full_plane_reports_violations() {
    let o = bernlab(
        &[
            "fuzz", "--ineq", "thm1-first", "--count", "40", "--degrees", "2,6", "--p-grid", "2",
            "--alpha-policy", "full-plane", "--generator", "binomial:2,0:1,0", "--seed", "4",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(2));
    let v = json_out(&o);
    let violations = v["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    for w in violations {
        let poly = Poly::from_json_value(&w["poly"]).unwrap();
        let re = w["alpha"][0].as_f64().unwrap();
        assert!(re > poly.degree() as f64 / 2.0);
    }
}

#[test]
fn alpha_map_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("map.csv");
    let family = format!("[{TWO_Z5_PLUS_1}]");
    let o = bernlab(
        &["alpha-map", "--re", "0,5", "--im", "-1,1", "--steps", "21,3", "--p", "2", "--out", out.to_str().unwrap()],
        &family,
    );
    assert_eq!(o.status.code(), Some(2));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re_alpha,im_alpha,max_ratio,verdict"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 63);
    for r in &rows {
        let re: f64 = r[0].parse().unwrap();
        let expected = if re == 5.0 && r[1] == "0" {
            "INCONCLUSIVE"
        } else if re <= 2.5 {
            "HOLDS"
        } else {
            "VIOLATED"
        };
        assert_eq!(r[3], expected, "{r:?}");
    }
    let side: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("map.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(side["manifest"]["subcommand"], "alpha-map");
    assert_eq!(side["boundary_estimate"], 2.75);

    let bad = r#"[{"n":0,"coeffs":[[1,0]]},{"n":1,"coeffs":[[1,0]]}]"#;
    let o = bernlab(&["alpha-map", "--re", "0,1", "--steps", "2,1"], bad);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$[1].coeffs"));
}

#[test]
fn extremal_reports_witness() {
    let o = bernlab(
        &["extremal", "--ineq", "thm1-first", "--n", "3", "--alpha", "2.5,0", "--restarts", "2", "--seed", "1"],
        "",
    );
    assert_eq!(o.status.code(), Some(2));
    let v = json_out(&o);
    let witness = Poly::from_json_value(&v["witness"]).unwrap();
    let r = check(
        InequalityId::Thm1First,
        &witness,
        &CheckParams::new(Some(Complex64::new(2.5, 0.0)), None, NormExponent::Finite(2.0)),
    )
    .unwrap();
    assert_eq!(r.ratio, v["ratio_best"].as_f64().unwrap());
    assert!(r.ratio > 1.0);
    assert_eq!(v["manifest"]["seed"], 1);
}

#[test]
fn threads_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_bernlab"))
        .args(["fuzz", "--ineq", "bernstein", "--count", "5", "--p-grid", "inf"])
        .env("BERNLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["manifest"]["threads"], 3);
}

#[test]
fn pretty_is_human_text() {
    let o = bernlab(&["check", "--ineq", "thm1-first", "--alpha", "3,0", "--p", "2", "--pretty"], TWO_Z5_PLUS_1);
    assert_eq!(o.status.code(), Some(2));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("ratio=1.118"));
    assert!(serde_json::from_str::<Value>(&s).is_err());
}
