use std::path::PathBuf;

use robust_dea::cli::run_cli;
use robust_dea::io::{parse_dataset, serialize_dataset, DataKind};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("robust-dea").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Vec<Value> {
    serde_json::from_str::<Value>(text).unwrap().as_array().unwrap().clone()
}

#[test]
fn hospitals_as_json() {
    let (code, out, err) = run(&["rank", "--input", &data("hospitals.csv"), "--model", "robust-lp", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let records = json(&out);
    assert_eq!(records.len(), 12);
    let expected = [1.1696, 1.0843, 0.9377, 1.0079, 0.8659, 0.9100, 0.9485, 0.8866, 0.9798, 0.9309, 0.9770, 0.9787];
    for (rec, want) in records.iter().zip(expected) {
        let r = rec["r"].as_f64().unwrap();
        assert!((r - want).abs() <= 5e-4, "{rec}");
        assert_eq!(rec["model"], "robust-lp");
        for key in ["id", "delta_star", "classical", "efficient"] {
            assert!(rec.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(records[0]["id"], "A");
    assert_eq!(records[0]["efficient"], true);
    assert_eq!(records[4]["efficient"], false);
}

#[test]
fn fixing_inputs_on_the_triple() {
    let (code, out, _) = run(&[
        "rank", "--input", &data("abc.csv"), "--model", "robust-lp", "--fix", "inputs", "--fix", "peers-inputs",
        "--format", "json",
    ]);
    assert_eq!(code, 0);
    let r: Vec<f64> = json(&out).iter().map(|v| v["r"].as_f64().unwrap()).collect();
    for (got, want) in r.iter().zip([9.0 / 7.0, 1.0, 9.0 / 7.0]) {
        assert!((got - want).abs() < 1e-8, "{got}");
    }
}

#[test]
fn table_output_is_right_aligned_at_the_requested_precision() {
    let (code, out, _) = run(&["rank", "--input", &data("abc.csv"), "--precision", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].split_whitespace().eq(["id", "classical", "delta_star", "r", "efficient", "rank"]));
    assert!(lines[1].contains("1.143"));
    assert!(lines.iter().all(|l| l.len() == lines[0].len()));
}

#[test]
fn interval_ranges_as_json() {
    let (code, out, err) = run(&["rank", "--input", &data("intervals.csv"), "--interval", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let records = json(&out);
    assert_eq!(records.len(), 10);
    assert_eq!(records[0]["id"], "A");
    assert!((records[0]["r_lower"].as_f64().unwrap() - 1.0169).abs() <= 5e-4);
    assert!((records[0]["r_upper"].as_f64().unwrap() - 1.1148).abs() <= 5e-4);
    assert_eq!(records[0]["always_efficient"], true);
    assert_eq!(records[1]["never_efficient"], true);
}

#[test]
fn interval_flag_must_match_the_data() {
    let (code, _, err) = run(&["rank", "--input", &data("intervals.csv")]);
    assert_eq!(code, 1);
    assert!(err.contains("--interval"));
    let (code, _, _) = run(&["rank", "--input", &data("hospitals.csv"), "--interval"]);
    assert_eq!(code, 1);
}

#[test]
fn bcc_models_from_the_command_line() {
    let (code, out, _) = run(&["rank", "--input", &data("bcc.csv"), "--model", "bcc-robust-lp", "--format", "json"]);
    assert_eq!(code, 0);
    let r: Vec<f64> = json(&out).iter().map(|v| v["r"].as_f64().unwrap()).collect();
    assert!((r[1] - 20.0 / 19.0).abs() < 1e-9);
    let (code, out, _) = run(&["rank", "--input", &data("bcc.csv"), "--model", "bcc", "--format", "json"]);
    assert_eq!(code, 0);
    assert!((json(&out)[3]["r"].as_f64().unwrap() - 0.75).abs() < 1e-9);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for model in ["robust-lp", "robust-exact", "bcc-robust-exact"] {
        let args = ["rank", "--input", &data("hospitals.csv"), "--model", model, "--format", "json"];
        let (_, a, _) = run(&args);
        let (_, b, _) = run(&args);
        assert_eq!(a, b);
    }
}

#[test]
fn perturb_below_the_radius_retains_everything() {
    let (code, out, err) = run(&[
        "perturb", "--input", &data("hospitals.csv"), "--dmu", "A", "--delta", "0.08", "--trials", "1000", "--seed", "7",
        "--format", "json",
    ]);
    assert_eq!(code, 0, "{err}");
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["retained"], 1000);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn perturb_radius_mode() {
    let (code, out, err) = run(&[
        "perturb", "--input", &data("hospitals.csv"), "--dmu", "A", "--radius-step", "0.005", "--radius-max", "0.12",
        "--sampling", "vertices", "--trials", "500", "--seed", "1", "--format", "json",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let radius = v["empirical_radius"].as_f64().unwrap();
    assert!((0.080..=0.090).contains(&radius), "{radius}");
}

#[test]
fn verify_runs_the_property_suites() {
    let (code, out, err) = run(&["verify", "--datasets", "10", "--seed", "5", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let suites = json(&out);
    assert!(suites.len() >= 8);
    assert!(suites.iter().all(|s| s["violations"] == 0));
}

#[test]
fn input_errors_exit_with_one() {
    let (code, _, err) = run(&["rank", "--input", "/nonexistent/file.csv"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot read"));

    let (code, _, _) = run(&["rank", "--input", &data("abc.csv"), "--bogus"]);
    assert_eq!(code, 1);

    let (code, _, _) = run(&["rank", "--input", &data("abc.csv"), "--precision", "0"]);
    assert_eq!(code, 1);

    let (code, _, err) = run(&["perturb", "--input", &data("hospitals.csv"), "--dmu", "Z", "--delta", "0.1"]);
    assert_eq!(code, 1);
    assert!(err.contains("'Z'"));

    let bad = scratch("negative.csv", "id,i:x,o:y\nA,1,2\nB,-1,3\n");
    let (code, _, err) = run(&["rank", "--input", &bad]);
    assert_eq!(code, 1);
    assert!(err.contains("row 3") && err.contains("column 2"), "{err}");

    let zero = scratch("zero.csv", "id,i:x,o:y1,o:y2\nA,1,2,1\nB,1,0,0\n");
    let (code, _, err) = run(&["rank", "--input", &zero]);
    assert_eq!(code, 1);
    assert!(err.contains("'B'"), "{err}");
}

#[test]
fn ill_conditioned_data_exits_with_two() {
    let path = scratch("huge.csv", "id,i:x,o:y\nA,1e-300,1e300\nB,1e300,1e-300\nC,1,1\n");
    let (code, out, err) = run(&["rank", "--input", &path, "--model", "robust-exact", "--format", "json"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("numeric failure"));
    // units that did solve are still reported
    assert!(json(&out).len() < 3);
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("rank") && out.contains("verify") && out.contains("perturb"));
}

#[test]
fn csv_round_trip_is_exact() {
    for name in ["hospitals.csv", "abc.csv", "bcc.csv"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let first = parse_dataset(&text).unwrap();
        let again = parse_dataset(&serialize_dataset(&first)).unwrap();
        match (&first.data, &again.data) {
            (DataKind::Point(a), DataKind::Point(b)) => assert_eq!(a, b),
            _ => panic!("{name} should be point data"),
        }
        assert_eq!(first.input_names, again.input_names);
        assert_eq!(first.output_names, again.output_names);
    }
    let odd = "id,i:x,o:y\nA,0.1,3.0000000000000004\nB,1e-7,123456789.123456789\n";
    let first = parse_dataset(odd).unwrap();
    assert_eq!(serialize_dataset(&parse_dataset(&serialize_dataset(&first)).unwrap()), serialize_dataset(&first));
    let DataKind::Point(ds) = parse_dataset(&serialize_dataset(&first)).unwrap().data else { panic!() };
    assert_eq!(ds.dmu(0).outputs[0].to_bits(), 3.0000000000000004f64.to_bits());
}
