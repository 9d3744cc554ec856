use std::path::PathBuf;
use std::process::{Command, Output};

use tpsurf::{detect_linear_syzygy, BiDeg, XPoly};
use tpsurf_cli::{cmd_betti, cmd_random, cmd_verify, CliError, Limits, RandomMode, SurfaceInput};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tpsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpsurf")).args(args).output().unwrap()
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn example() -> SurfaceInput {
    SurfaceInput::parse(&std::fs::read_to_string(data("worked_example.txt")).unwrap()).unwrap()
}

#[test]
fn analyze_example_golden() {
    let path = data("worked_example.txt");
    let out = tpsurf(&["analyze", path.to_str().unwrap(), "--json", "--no-timings"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("worked_example.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout.clone()).unwrap(), golden);

    let v = json(&out);
    let f: XPoly = v["implicit"]["equation"].as_str().unwrap().parse().unwrap();
    assert_eq!(f, "x0^3*x2 + x1^3*x3 - x0^2*x1^2".parse().unwrap());
    assert_eq!(v["implicit"]["k"], 2);
    assert_eq!(v["singular_line"]["forms"], serde_json::json!(["x0", "x1"]));
    assert_eq!(v["strand"]["rows"], 8);
    assert!(v["error"].is_null());
}

#[test]
fn text_report_mentions_equation() {
    let path = data("worked_example.txt");
    let out = tpsurf(&["analyze", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("implicit equation (degree 4): x0^3*x2 - x0^2*x1^2 + x1^3*x3"));
    assert!(text.contains("det = 1 * F^2"));
}

#[test]
fn timings_are_separate() {
    let path = data("worked_example.txt");
    let out = tpsurf(&["analyze", path.to_str().unwrap(), "--json"]);
    let v = json(&out);
    assert!(v["timings"].as_object().unwrap().contains_key("implicitize"));
}

#[test]
fn seeded_random_instance_is_reproducible() {
    let a = tpsurf(&["random", "2", "2", "--seed", "17"]);
    let b = tpsurf(&["random", "2", "2", "--seed", "17"]);
    assert_eq!(a.stdout, b.stdout);
    let path = write_tmp("seed17.txt", std::str::from_utf8(&a.stdout).unwrap());
    let p = path.to_str().unwrap();
    let r1 = tpsurf(&["analyze", p, "--json", "--no-timings"]);
    let r2 = tpsurf(&["analyze", p, "--json", "--no-timings"]);
    assert_eq!(r1.status.code(), Some(0));
    assert_eq!(r1.stdout, r2.stdout);
    assert_eq!(json(&r1)["linear_syzygy"]["bidegree"], serde_json::json!([0, 1]));
}

#[test]
fn dependent_generators_rejected() {
    let p = write_tmp("dep.txt", "bidegree: 1 1\np0: s*u\np1: s*u\np2: t*u\np3: t*v\n");
    let out = tpsurf(&["analyze", p.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["code"], "DEPENDENT_GENERATORS");
    assert_eq!(v["error"]["message"], "generators not independent");
}

#[test]
fn parse_errors_are_located() {
    let p = write_tmp("bad.txt", "bidegree: 2 2\np0: s^2*u^2\np1: s^2*u*v + t^2*?\np2: t^2*v^2\np3: s*t*u*v\n");
    let out = tpsurf(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3, column 19"), "{err}");

    let e = SurfaceInput::parse("bidegree: 2 2\np0: s^3*u^2\n").unwrap_err();
    assert!(matches!(e, CliError::Core(tpsurf::Error::Parse { line: 2, .. })), "{e}");
    let e = SurfaceInput::parse("p0: s*u\n").unwrap_err();
    assert!(e.to_string().contains("missing `bidegree"));
    let e = SurfaceInput::parse("bidegree: 1 1\ncolour: red\n").unwrap_err();
    assert!(e.to_string().contains("line 2"));
}

#[test]
fn render_parses_back() {
    for seed in 0..5 {
        let r = cmd_random(2, 3, RandomMode::Dense, seed).unwrap();
        assert_eq!(SurfaceInput::parse(&r.render()).unwrap(), r);
    }
    let mut e = example();
    e.betti_box = Some(BiDeg::new(6, 3));
    assert_eq!(SurfaceInput::parse(&e.render()).unwrap(), e);
}

#[test]
fn basepoints_give_exit_3() {
    let p = write_tmp(
        "bp.txt",
        "bidegree: 2 2\np0: s^2*u^2 + s*t*u*v\np1: s^2*u*v + s*t*v^2\np2: t^2*u^2 - s*t*u^2\np3: t^2*u*v - s*t*u*v\n",
    );
    let out = tpsurf(&["analyze", p.to_str().unwrap(), "--json", "--no-timings"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["error"]["code"], "BASEPOINTS");
    assert_eq!(v["basepoints"]["free"], false);
    assert_eq!(v["basepoints"]["certificate"]["kind"], "witness");

    let out = tpsurf(&["analyze", p.to_str().unwrap(), "--json", "--allow-basepoints"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["code"], "MULTIPLE_LINEAR_SYZYGIES");
}

#[test]
fn work_limit_gives_exit_4() {
    let path = data("worked_example.txt");
    let out = tpsurf(&["analyze", path.to_str().unwrap(), "--json", "--max-det", "6"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["error"]["code"], "WORK_LIMIT");
    let out = tpsurf(&["betti", path.to_str().unwrap(), "--box", "40", "40"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn betti_of_example() {
    let r = cmd_betti(&example(), BiDeg::new(6, 3), &Limits::default()).unwrap();
    let mut shifts = r.shifts.clone();
    shifts.sort();
    let mut want = vec![[-2, -3], [-4, -3], [-4, -3], [-2, -5], [-4, -4], [-6, -3], [-8, -2]];
    want.sort();
    assert_eq!(shifts, want);
    assert!(cmd_betti(&example(), BiDeg::new(0, 0), &Limits::default()).unwrap().generators.is_empty());

    let path = data("worked_example.txt");
    let out = tpsurf(&["betti", path.to_str().unwrap(), "--box", "6", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["display"], "(-2,-3), (-2,-5), (-4,-3)^2, (-4,-4), (-6,-3), (-8,-2)");
}

#[test]
fn betti_of_generic_p() {
    let p: tpsurf::BiPoly = "s^2*u + t^2*v".parse().unwrap();
    let mut input = cmd_random(2, 2, RandomMode::WithLinearSyzygy, 3).unwrap();
    input.generators[0] = &p * &tpsurf::BiPoly::u();
    input.generators[1] = &p * &tpsurf::BiPoly::v();
    let r = cmd_betti(&input, BiDeg::new(6, 3), &Limits::default()).unwrap();
    let mut shifts = r.shifts.clone();
    shifts.sort();
    let mut want = vec![[-2, -3], [-4, -3], [-4, -3], [-4, -4], [-3, -5], [-3, -5], [-6, -3], [-8, -2]];
    want.sort();
    assert_eq!(shifts, want);
}

#[test]
fn random_modes() {
    let s = cmd_random(2, 2, RandomMode::WithLinearSyzygy, 9).unwrap().surface().unwrap();
    assert!(detect_linear_syzygy(&s).unwrap().is_some());
    let found = (0..100)
        .filter(|&seed| {
            let s = cmd_random(2, 2, RandomMode::Dense, seed).unwrap().surface().unwrap();
            detect_linear_syzygy(&s).unwrap().is_some()
        })
        .count();
    assert_eq!(found, 0);
    assert!(cmd_random(0, 2, RandomMode::Dense, 0).is_err());
}

#[test]
fn verify_equations() {
    let e = example();
    assert!(cmd_verify(&e, "x0^3*x2 + x1^3*x3 - x0^2*x1^2").unwrap().vanishes);
    let r = cmd_verify(&e, "x0").unwrap();
    assert!(!r.vanishes && r.degree_divides);
    let segre = SurfaceInput::parse(&std::fs::read_to_string(data("segre.txt")).unwrap()).unwrap();
    assert!(cmd_verify(&segre, "x0*x3 - x1*x2").unwrap().vanishes);
    assert!(matches!(cmd_verify(&e, "x0 + x1^2"), Err(CliError::Core(tpsurf::Error::Parse { .. }))));

    let path = data("worked_example.txt");
    let out = tpsurf(&["verify", path.to_str().unwrap(), "x0^3*x2 + x1^3*x3 - x0^2*x1^2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["vanishes"], true);
}
