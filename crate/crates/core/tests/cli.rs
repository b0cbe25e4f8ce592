use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use curvn::cli::{parse_spec, Document};
use curvn::curve::{CurveSpec, FourierLoop};
use curvn::minkowski::WorldLine;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn curvn(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_curvn"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("CURVN_THREADS", t);
    }
    cmd.output().unwrap()
}

fn run_to_file(args: &[&str], threads: Option<&str>) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_owned();
    full.extend(["--out", &out_str]);
    let o = curvn(&full, threads);
    (o.status.code().unwrap(), fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn table_report_is_byte_stable() {
    let (code, report) = run_to_file(&["table"], None);
    assert_eq!(code, 0);
    assert_eq!(report, golden("table.json"));
}

#[test]
fn eval_report_is_byte_stable() {
    let input = data("circle.json");
    let (code, report) = run_to_file(&["eval", input.to_str().unwrap()], None);
    assert_eq!(code, 0);
    assert_eq!(report, golden("eval_circle.json"));
}

#[test]
fn anomaly_report_is_byte_stable() {
    let input = data("anomaly_circle.json");
    let (code, report) = run_to_file(&["anomaly", input.to_str().unwrap()], None);
    assert_eq!(code, 0);
    assert_eq!(report, golden("anomaly_circle.json"));
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    for args in [vec!["eval", "ellipse.json"], vec!["eval-open", "bump.json"], vec!["photon", "wiggle.json"]] {
        let input = data(args[1]);
        let args = [args[0], input.to_str().unwrap()];
        let (_, one) = run_to_file(&args, Some("1"));
        let (_, three) = run_to_file(&args, Some("3"));
        assert!(!one.is_empty());
        assert_eq!(one, three);
    }
}

#[test]
fn exit_statuses() {
    let ok = curvn(&["eval", data("circle.json").to_str().unwrap()], None);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("19.739208802"));

    let bad = curvn(&["eval", data("bad_ecc.json").to_str().unwrap()], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("`ecc`"));

    let unknown = curvn(&["eval", data("unknown_field.json").to_str().unwrap()], None);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("colour"));

    let open_as_closed = curvn(&["eval", data("bump.json").to_str().unwrap()], None);
    assert_eq!(open_as_closed.status.code(), Some(2));

    let starved = curvn(&["eval", data("ellipse.json").to_str().unwrap(), "--max-grid", "16"], None);
    assert_eq!(starved.status.code(), Some(3));

    let missing = curvn(&["eval", data("no_such_file.json").to_str().unwrap()], None);
    assert_eq!(missing.status.code(), Some(4));

    let unwritable = curvn(
        &["eval", data("circle.json").to_str().unwrap(), "--out", "/nonexistent-dir/x.json"],
        None,
    );
    assert_eq!(unwritable.status.code(), Some(4));

    let neither = curvn(&[], None);
    assert_eq!(neither.status.code(), Some(2));
}

#[test]
fn job_documents_resolve_paths_next_to_themselves() {
    let o = curvn(&["--job", data("job_eval.json").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("19.739208802"));
}

#[test]
fn other_commands_run() {
    for (cmd, file) in [
        ("invert", "invert_ellipse.json"),
        ("photon", "wiggle.json"),
        ("boost", "boost.json"),
        ("eval-open", "bump.json"),
    ] {
        let (code, report) = run_to_file(&[cmd, data(file).to_str().unwrap()], None);
        assert_eq!(code, 0, "{cmd}");
        let v: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(v["command"], cmd);
    }
}

#[test]
fn csv_and_svg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spectrum.csv");
    let o = curvn(&["photon", data("wiggle.json").to_str().unwrap(), "--out", csv.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("omega,dE_domega,dN_domega\n"));
    assert!(!text.contains('\r'));

    let svg = dir.path().join("circle.svg");
    let o = curvn(&["export", data("circle.json").to_str().unwrap(), "--out", svg.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.contains("version=\"1.1\"") && text.contains("n = 19.7392"));

    let kernel = dir.path().join("kernel.csv");
    let o = curvn(
        &["eval", data("ellipse.json").to_str().unwrap(), "--out", kernel.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&kernel).unwrap();
    assert_eq!(text.lines().next(), Some("s,u,K"));
    assert_eq!(text.lines().count(), 1 + 64 * 64);
}

#[test]
fn minimize_writes_trace_and_final_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("result.json");
    let trace = dir.path().join("trace.csv");
    let o = curvn(
        &[
            "minimize",
            data("loop.json").to_str().unwrap(),
            "--max-iter",
            "40",
            "--out",
            out.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ],
        None,
    );
    assert!(matches!(o.status.code(), Some(0) | Some(3)));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["final_curve"]["kind"], "fourier-loop");
    assert_eq!(report["trace"]["conjecture_violation"], false);
    let final_curve = serde_json::to_string(&report["final_curve"]).unwrap();
    assert!(matches!(parse_spec(&final_curve).unwrap(), Document::Curve(CurveSpec::FourierLoop(_))));
    let csv = fs::read_to_string(&trace).unwrap();
    assert_eq!(csv.lines().next(), Some("iteration,n,gradient_norm"));
}

#[test]
fn specs_round_trip_through_json() {
    let curves = [
        CurveSpec::circle_at([1.0, 2.0], 3.0),
        CurveSpec::ellipse(2.0, 0.3).rotated(0.4).translated([1.0, 1.0]),
        CurveSpec::open_bump(0.5, 2.0).warped(0.1),
        CurveSpec::FourierLoop(FourierLoop::ellipse(2, 1.0, 0.2)).reversed().scaled(2.0),
    ];
    for c in curves {
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(parse_spec(&text).unwrap(), Document::Curve(c));
    }
    let worldlines = [
        WorldLine::wiggle(0.01, 1.0, 5.0).boosted([0.2, 0.0, 0.0]),
        WorldLine::kick(0.01, 1.0).shifted(1.0, [0.0, 1.0, 0.0]),
    ];
    for w in worldlines {
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(parse_spec(&text).unwrap(), Document::WorldLine(w));
    }
}

#[test]
fn schema_kinds_are_the_parser_kinds() {
    let schema_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema");
    for file in ["curve.schema.json", "worldline.schema.json"] {
        let schema: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(schema_dir.join(file)).unwrap()).unwrap();
        let defs = schema["$defs"].as_object().unwrap();
        let kinds: Vec<&str> = defs
            .values()
            .filter_map(|d| d["properties"]["kind"]["const"].as_str())
            .collect();
        assert_eq!(kinds.len(), schema["oneOf"].as_array().unwrap().len());
        for kind in kinds {
            let err = parse_spec(&format!(r#"{{"kind":"{kind}"}}"#)).unwrap_err().to_string();
            assert!(err.contains("missing field"), "{kind}: {err}");
        }
    }
    let bogus = parse_spec(r#"{"kind":"hexagon"}"#).unwrap_err().to_string();
    assert!(bogus.contains("unknown variant"), "{bogus}");
}
