use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

use flagcalc_cli::document::eval;
use flagcalc_cli::syntax::parse_expr;
use flagcalc_core::catalog::{full_report, su2_family, SU2FamilyParams};
use flagcalc_core::Scalar;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn flagcalc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flagcalc")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out, _) = flagcalc(&all);
    (code, serde_json::from_str(&out).unwrap())
}

fn temp_input(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".flag").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn su2() -> String {
    fixture("su2.flag").display().to_string()
}

#[test]
fn su2_curvature_json_matches_golden() {
    let (code, out, _) = flagcalc(&["--json", "curvature", &su2()]);
    assert_eq!(code, 0);
    let golden = include_str!("golden/su2_curvature.json");
    assert_eq!(out, golden);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["invariants"]["Q1"], "-3/2*x*y*a^2");
    assert_eq!(v["invariants"]["Q2"], "3/2*x*z*a^-2");
    assert_eq!(v["integrand"]["transcendental_factor"], "1/(8*pi^2)");
    assert_eq!(v["status"], "pass");
}

#[test]
fn abelian_check_passes_with_zero_residuals() {
    let path = fixture("abelian.flag").display().to_string();
    let (code, out, _) = flagcalc(&["check", &path]);
    assert_eq!(code, 0);
    assert_eq!(out, include_str!("golden/abelian_check.txt"));
    let (_, v) = json(&["check", &path]);
    for section in ["structure"] {
        for (k, r) in v[section].as_object().unwrap() {
            assert_eq!(r, "0", "{section}.{k}");
        }
    }
    for (k, r) in v["frame"]["residuals"].as_object().unwrap() {
        assert_eq!(r, "0", "{k}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = flagcalc(&["--json", "curvature", &su2()]).1;
    let b = flagcalc(&["--json", "curvature", &su2()]).1;
    assert_eq!(a, b);
    let t1 = flagcalc(&["gauge", &su2()]).1;
    let t2 = flagcalc(&["gauge", &su2()]).1;
    assert_eq!(t1, t2);
}

#[test]
fn kill_fiber_integrand() {
    let (code, v) = json(&["invariant", &su2(), "--kill-fiber"]);
    assert_eq!(code, 0);
    let i = &v["integrand"];
    assert_eq!(i["volume_form"], "theta^theta1^theta2");
    assert_eq!(i["transcendental_factor"], "1/(8*pi^2)");
    // -(2yz + x^2/2) modulo x^2 + yz + 1 = 0.
    let p = su2_family(&SU2FamilyParams::symbolic_xyz()).unwrap();
    let frame = p.frame().clone();
    let got = eval(&parse_expr(i["coefficient"].as_str().unwrap(), 1, 1).unwrap(), &frame).unwrap();
    let want = eval(&parse_expr("-(2*y*z + 1/2*x^2)", 1, 1).unwrap(), &frame).unwrap();
    let (flagcalc_cli::document::Value::Scalar(got), flagcalc_cli::document::Value::Scalar(want)) = (got, want) else {
        panic!("scalars expected");
    };
    assert!((&got - &want).is_zero(frame.relations()).unwrap());
    assert!(i["base_form"].as_str().unwrap().ends_with("*theta^theta1^theta2"));
}

#[test]
fn volume_multiplies_the_coefficient() {
    let (code, v) = json(&["invariant", &su2(), "--volume=16"]);
    assert_eq!(code, 0);
    assert_eq!(v["integrand"]["volume"], "16");
    assert_eq!(v["integrand"]["integral"], "-24*y*z + 8");
    let (code, _) = json(&["invariant", &su2(), "--volume=q"]);
    assert_eq!(code, 2);
}

/// Every emitted scalar and form parses back to the value the library
/// computes, and reprints identically.
#[test]
fn report_strings_round_trip() {
    let (_, v) = json(&["curvature", &su2()]);
    let report = full_report(&su2_family(&SU2FamilyParams::symbolic_xyz()).unwrap()).unwrap();
    let frame = report.reduction.frame.clone();
    let mut checked = 0;
    for section in ["reduction", "curvature", "embedding", "structure", "invariants", "bianchi"] {
        for (k, s) in v[section].as_object().unwrap() {
            let s = s.as_str().unwrap();
            let e = parse_expr(s, 1, 1).unwrap_or_else(|e| panic!("{section}.{k} = {s}: {e}"));
            let printed = match eval(&e, &frame).unwrap() {
                flagcalc_cli::document::Value::Scalar(x) => x.to_string(),
                flagcalc_cli::document::Value::Form(f) => f.to_string(),
            };
            assert_eq!(printed, s, "{section}.{k}");
            checked += 1;
        }
    }
    assert!(checked > 50);
    for (name, value) in report.coefficients.named() {
        let s = v["curvature"][name].as_str().unwrap();
        let flagcalc_cli::document::Value::Scalar(x) = eval(&parse_expr(s, 1, 1).unwrap(), &frame).unwrap() else {
            panic!("{name} is not a scalar");
        };
        let diff: Scalar = &x - value;
        assert!(diff.is_zero(frame.relations()).unwrap(), "{name}");
    }
}

#[test]
fn flat_member_is_flat() {
    let (code, v) = json(&["curvature", &fixture("su2_x0.flag").display().to_string()]);
    assert_eq!(code, 0);
    assert_eq!(v["flat"], true);
    assert_eq!(v["invariants"]["Q1"], "0");
}

#[test]
fn gauge_command_verifies_symbolic_element() {
    let (code, v) = json(&["gauge", &su2()]);
    assert_eq!(code, 0);
    let g = &v["gauge"];
    assert_eq!(g["passed"], true);
    assert_eq!(g["transformed"]["Q1"], "-3/2*x*y*a^2*alpha*beta^5");
    assert_eq!(g["transformed"]["Q2"], "3/2*x*z*a^-2*alpha^-5*beta^-1");
}

#[test]
fn gauge_block_with_aliases() {
    let text = std::fs::read_to_string(fixture("su2.flag")).unwrap()
        + "\n[gauge]\na = 2\nb = s\nc = 1/3\ne = x\n";
    let text = text.replace("x y z\n", "x y z s\n");
    let f = temp_input(&text);
    let (code, v) = json(&["gauge", f.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["gauge"]["element"]["alpha"], "2");
    assert_eq!(v["gauge"]["element"]["beta"], "s");
    assert_eq!(v["gauge"]["element"]["delta"], "0");
    assert_eq!(v["gauge"]["transformed"]["Q1"], "-3*x*y*s^5*a^2");

    let singular = temp_input(&(std::fs::read_to_string(fixture("su2.flag")).unwrap() + "\n[gauge]\nalpha = 0\n"));
    let (code, v) = json(&["gauge", singular.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "NonInvertible");
}

#[test]
fn cr_command() {
    let (code, v) = json(&["cr", &su2()]);
    assert_eq!(code, 0);
    assert_eq!(v["cr"]["passed"], true);
    for (k, r) in v["cr"]["conditions"].as_object().unwrap() {
        assert_eq!(r, "0", "{k}");
    }

    // ybar = -z is not compatible with d.
    let text = std::fs::read_to_string(fixture("su2.flag")).unwrap().replace("y = z\nz = y\n", "y = -z\nz = -y\n");
    let f = temp_input(&text);
    let (code, v) = json(&["cr", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    assert!(!v["cr"]["d_incompatible"].as_array().unwrap().is_empty());

    // No [conjugation] section.
    let (code, v) = json(&["cr", &fixture("abelian.flag").display().to_string()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "MissingInput");
}

#[test]
fn verification_failures_exit_1_and_name_the_equation() {
    let (code, v) = json(&["check", &fixture("bad_jacobi.flag").display().to_string()]);
    assert_eq!(code, 1);
    assert_eq!(v["frame"]["consistent"], false);
    assert_eq!(v["frame"]["residuals"]["d(d theta)"], "theta^Z1^Z2");
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains("d(d theta)") && msg.contains("theta^Z1^Z2"), "{msg}");

    // d theta is not Z1^Z2.
    let text = std::fs::read_to_string(fixture("abelian.flag")).unwrap().replace("d theta = Z1 ^ Z2", "d theta = 2*Z1 ^ Z2");
    let f = temp_input(&text);
    let (code, v) = json(&["reduce", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "NotAPseudoFlag");

    // Degenerate contact form.
    let text = std::fs::read_to_string(fixture("abelian.flag")).unwrap().replace("d theta = Z1 ^ Z2", "d theta = 0");
    let f = temp_input(&text);
    let (code, v) = json(&["reduce", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "DegenerateContact");
}

#[test]
fn input_errors_exit_2_with_positions() {
    let f = temp_input("[frame]\ntheta Z1\n[differentials]\nd theta = q * Z1 ^ Z2\nd Z1 = 0\n");
    let (code, v) = json(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "UndeclaredName");
    assert!(v["error"]["message"].as_str().unwrap().starts_with("4:11:"));

    let f = temp_input("[frame]\ntheta theta\n");
    let (code, v) = json(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "DuplicateDeclaration");

    let f = temp_input("[frame]\ne1\n[differentials]\nd e1 = (e1\n");
    let (code, v) = json(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ParseError");

    // Reduction commands need a [pseudoflag] section.
    let f = temp_input("[frame]\ne1\n[differentials]\nd e1 = 0\n");
    let (code, _) = json(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, v) = json(&["curvature", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "MissingInput");

    let (code, _, err) = flagcalc(&["check", "/definitely/not/here.flag"]);
    assert_eq!(code, 2);
    assert!(err.contains("not/here.flag"));
    let (code, _, _) = flagcalc(&["frobnicate"]);
    assert_eq!(code, 2);
}
