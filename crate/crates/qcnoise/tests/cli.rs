//! End-to-end tests of the `qcnoise` binary: flag handling, exit codes,
//! output schemas, and determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn qcnoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcnoise"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn validator(schema_text: &str) -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(schema_text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(schema_text: &str, instance: &Value) {
    let validator = validator(schema_text);
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| format!("{e}"))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

const ANALYSIS_SCHEMA: &str = include_str!("../schemas/analysis_report.schema.json");
const SANDWICH_SCHEMA: &str = include_str!("../schemas/sandwich_report.schema.json");
const LAMBDA_SCHEMA: &str = include_str!("../schemas/lambda_profile.schema.json");
const PAIR_SCHEMA: &str = include_str!("../schemas/pair_report.schema.json");
const WEIGHT_SCHEMA: &str = include_str!("../schemas/weight_report.schema.json");

#[test]
fn exact_reports_the_kl_identity() {
    let out = qcnoise(&["exact", "--n", "7", "--t", "0,1,2", "--omega", "3"]);
    let report = json_stdout(&out);
    assert_valid(ANALYSIS_SCHEMA, &report);
    let kl_exact = report["kl_exact"].as_f64().unwrap();
    let kl_closed = report["kl_closed_form"].as_f64().unwrap();
    assert!((kl_exact - kl_closed).abs() <= 1e-10);
    assert_eq!(report["preconditions"]["spanning"], Value::Bool(true));
}

#[test]
fn exact_tau_one_gives_zero_kl() {
    let out = qcnoise(&["exact", "--n", "7", "--t", "0", "--omega", "3"]);
    let report = json_stdout(&out);
    assert_eq!(report["kl_exact"].as_f64().unwrap(), 0.0);
    assert_eq!(report["tv_exact"].as_f64().unwrap(), 0.0);
}

#[test]
fn exact_over_cap_exits_2() {
    let out = qcnoise(&["exact", "--n", "25", "--t", "0,1,2", "--omega", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcnoise(&[
        "exact", "--n", "25", "--t", "0,1,2", "--omega", "3", "--cap-n", "25",
    ]);
    assert_eq!(out.status.code(), Some(0), "raised cap admits n=25");
}

#[test]
fn parse_errors_exit_1() {
    for args in [
        &["exact", "--n", "7", "--t", "0,1,2", "--omega", "-3"][..],
        &["exact", "--n", "7", "--t", "0,9", "--omega", "3"],
        &["exact", "--n", "7", "--t", "3,3", "--omega", "3"],
        &["exact", "--n", "7", "--t", "abc", "--omega", "3"],
        &["exact", "--n", "7", "--omega", "3"],
        &[
            "exact", "--n", "7", "--t", "0,1", "--s", "2", "--omega", "3",
        ],
        &[
            "pair", "--n", "7", "--t", "0,1,2", "--omega", "3", "--i", "2", "--j", "2",
        ],
        &["bounds", "--n", "11", "--omega", "2"],
        &[
            "bounds", "--n", "11", "--tau", "4", "--omega", "2", "--a", "2",
        ],
        &["bounds", "--n", "10", "--tau", "4", "--omega", "2", "--ap"],
        &[
            "bounds", "--n", "9", "--tau", "4", "--omega", "2", "--ap", "--a", "3",
        ],
        &[
            "bounds", "--n", "11", "--tau", "4", "--t", "0,1", "--omega", "2",
        ],
        &[
            "weights", "--n", "7", "--t", "0,1", "--omega", "2", "--trials", "0",
        ],
    ] {
        let out = qcnoise(args);
        assert_eq!(out.status.code(), Some(1), "args: {args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(qcnoise(&["--help"]).status.code(), Some(0));
    assert_eq!(qcnoise(&["--version"]).status.code(), Some(0));
    assert_eq!(qcnoise(&["exact", "--help"]).status.code(), Some(0));
}

#[test]
fn bounds_scales_to_hqc_parameters() {
    let out = qcnoise(&["bounds", "--n", "17669", "--tau", "150", "--omega", "8"]);
    let report = json_stdout(&out);
    assert_valid(ANALYSIS_SCHEMA, &report);
    assert!(report["kl_closed_form"].as_f64().unwrap() > 0.0);
    assert!(report["pinsker_upper"].as_f64().unwrap() > 0.0);
    assert_eq!(report["kl_exact"], Value::Null);
    assert_eq!(report["preconditions"]["spanning"], Value::Null);
}

#[test]
fn bounds_tau_one_is_exactly_zero() {
    let out = qcnoise(&["bounds", "--n", "1000", "--tau", "1", "--omega", "5"]);
    let report = json_stdout(&out);
    assert_eq!(report["kl_closed_form"].as_f64().unwrap(), 0.0);
}

#[test]
fn bounds_ap_at_tau_equals_2s_is_vacuous() {
    let out = qcnoise(&[
        "bounds", "--n", "11", "--tau", "4", "--s", "2", "--omega", "2", "--ap",
    ]);
    let report = json_stdout(&out);
    assert_valid(ANALYSIS_SCHEMA, &report);
    assert_eq!(report["ap"]["lower_bound"].as_f64().unwrap(), 0.0);
    assert_eq!(report["ap"]["vacuous"], Value::Bool(true));
    assert_eq!(report["ap"]["n_prime"], Value::Bool(true));
    let flags = report["vacuous_flags"].as_array().unwrap();
    assert!(flags.iter().any(|f| f == "ap_lower_bound_vacuous"));
}

#[test]
fn bounds_ap_with_polynomials_checks_supports() {
    let out = qcnoise(&[
        "bounds", "--n", "11", "--t", "0,1,2", "--t", "4,5,6", "--omega", "2", "--ap",
    ]);
    let report = json_stdout(&out);
    assert_eq!(report["tau"].as_u64().unwrap(), 6);
    assert_eq!(report["ap"]["vacuous"], Value::Bool(false));
    assert!(report["ap"]["lower_bound"].as_f64().unwrap() > 0.0);

    let out = qcnoise(&[
        "bounds", "--n", "11", "--t", "0,1,3", "--omega", "2", "--ap",
    ]);
    assert_eq!(out.status.code(), Some(1), "non-AP support rejected");
}

#[test]
fn lambda_profiles() {
    let out = qcnoise(&["lambda", "--n", "9", "--t", "0"]);
    let report = json_stdout(&out);
    assert_valid(LAMBDA_SCHEMA, &report);
    let lambda: Vec<u64> = report["lambda"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(lambda, vec![1, 0, 0, 0, 0, 0, 0, 0, 0]);

    let out = qcnoise(&["lambda", "--n", "11", "--t", "0,1,2,3"]);
    let report = json_stdout(&out);
    let lambda: Vec<u64> = report["lambda"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(lambda[0], 4);
    assert_eq!(lambda[1], 3);
    for d in 1..11 {
        assert_eq!(lambda[d], lambda[11 - d], "symmetry at d={d}");
    }
}

#[test]
fn lambda_csv_layout() {
    let out = qcnoise(&["lambda", "--n", "5", "--t", "0,1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,lambda");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0,2");
}

#[test]
fn pair_closed_form_matches_marginalized_table() {
    let out = qcnoise(&[
        "pair", "--n", "7", "--t", "0,1,2", "--omega", "3", "--i", "0", "--j", "1",
    ]);
    let report = json_stdout(&out);
    assert_valid(PAIR_SCHEMA, &report);
    assert!(report["residual"].as_f64().unwrap() < 1e-12);
    // marginals equal Ber(τω) in every emitted table
    let p = report["marginal"].as_f64().unwrap();
    let p10 = report["table"]["p10"].as_f64().unwrap();
    let p11 = report["table"]["p11"].as_f64().unwrap();
    assert!((p10 + p11 - p).abs() <= 1e-15);
    let p01 = report["table"]["p01"].as_f64().unwrap();
    assert_eq!(p01, p10, "off-diagonal symmetry");
}

#[test]
fn pair_above_cap_omits_residual() {
    let out = qcnoise(&[
        "pair", "--n", "30", "--t", "0,1,2", "--omega", "5", "--i", "0", "--j", "1",
    ]);
    let report = json_stdout(&out);
    assert_valid(PAIR_SCHEMA, &report);
    assert_eq!(report["residual"], Value::Null);
}

#[test]
fn weights_run_is_byte_identical() {
    let args = [
        "weights",
        "--n",
        "101",
        "--t",
        "0,7,20,41,77",
        "--t",
        "3,11,40,60,90",
        "--omega",
        "2",
        "--trials",
        "20000",
        "--seed",
        "42",
    ];
    let a = qcnoise(&args);
    let b = qcnoise(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed, same bytes");

    let report = json_stdout(&a);
    assert_valid(WEIGHT_SCHEMA, &report);
    assert!(report["z_score"].as_f64().unwrap().abs() <= 4.0);

    // thread count changes nothing
    let mut single = args.to_vec();
    single.extend(["--threads", "1"]);
    let mut quad = args.to_vec();
    quad.extend(["--threads", "4"]);
    assert_eq!(qcnoise(&single).stdout, qcnoise(&quad).stdout);
}

#[test]
fn weights_zero_bias_is_degenerate() {
    let out = qcnoise(&["weights", "--n", "11", "--t", "0,1", "--omega", "0"]);
    let report = json_stdout(&out);
    assert_eq!(report["mean"].as_f64().unwrap(), 0.0);
    assert_eq!(report["z_score"].as_f64().unwrap(), 0.0);
    assert_eq!(report["histogram"][0][0].as_u64().unwrap(), 0);
    assert_eq!(report["histogram"][0][1].as_u64().unwrap(), 10000);
}

#[test]
fn weights_csv_layout() {
    let out = qcnoise(&[
        "weights", "--n", "9", "--t", "0,1", "--omega", "2", "--trials", "500", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# trials=500\n"));
    assert!(text.contains("\nweight,count\n"));
}

#[test]
fn sandwich_passes_on_spanning_spec() {
    let out = qcnoise(&["sandwich", "--n", "7", "--t", "0,1,2", "--omega", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_valid(SANDWICH_SCHEMA, &report);
    assert_eq!(report["sandwich"]["checked"], Value::Bool(true));
    assert_eq!(report["sandwich"]["pass"], Value::Bool(true));
}

#[test]
fn sandwich_gates_on_preconditions() {
    // ω = 1 < log₂ 7: informational run, no assertion, exit 0.
    let out = qcnoise(&["sandwich", "--n", "7", "--t", "0,1,2", "--omega", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["sandwich"]["checked"], Value::Bool(false));
    assert_eq!(report["sandwich"]["pass"], Value::Null);
    assert_eq!(
        report["preconditions"]["omega_ge_log2n"],
        Value::Bool(false)
    );

    // non-spanning pair: spanning=false reported, assertion skipped
    let out = qcnoise(&[
        "sandwich", "--n", "6", "--t", "0,1", "--t", "1,2", "--omega", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["preconditions"]["spanning"], Value::Bool(false));
    assert_eq!(report["sandwich"]["pass"], Value::Null);

    // 1 + X + X² is a zero divisor of P₃ (it kills X + 1), so the same
    // support that spans P₇ fails the spanning gate at n = 3.
    let out = qcnoise(&["sandwich", "--n", "3", "--t", "0,1,2", "--omega", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["preconditions"]["omega_ge_log2n"], Value::Bool(true));
    assert_eq!(report["preconditions"]["spanning"], Value::Bool(false));
    assert_eq!(report["sandwich"]["checked"], Value::Bool(false));
    assert_eq!(report["sandwich"]["pass"], Value::Null);
}

#[test]
fn sandwich_tau_one_passes_trivially() {
    let out = qcnoise(&["sandwich", "--n", "7", "--t", "4", "--omega", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["sandwich"]["pass"], Value::Bool(true));
    assert_eq!(report["kl_exact"].as_f64().unwrap(), 0.0);
}

#[test]
fn dist_table_exports_roundtrip() {
    let dir = std::env::temp_dir().join(format!("qcnoise-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("table.csv");
    let bin_path = dir.join("table.bin");

    let out = qcnoise(&[
        "exact",
        "--n",
        "7",
        "--t",
        "0,1,2",
        "--omega",
        "3",
        "--dist-out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = qcnoise(&[
        "exact",
        "--n",
        "7",
        "--t",
        "0,1,2",
        "--omega",
        "3",
        "--dist-out",
        bin_path.to_str().unwrap(),
        "--dist-format",
        "bin",
    ]);
    assert!(out.status.success());

    let from_csv = qcnoise::io::read_dist_csv(std::io::BufReader::new(
        std::fs::File::open(&csv_path).unwrap(),
    ))
    .unwrap();
    let from_bin = qcnoise::io::read_dist_bin(std::fs::File::open(&bin_path).unwrap()).unwrap();
    assert_eq!(from_csv, from_bin);
    assert_eq!(from_csv.n(), 7);
    from_csv.validate().unwrap();

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("qcnoise-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = qcnoise(&[
        "exact",
        "--n",
        "5",
        "--t",
        "0,1",
        "--omega",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_reader(std::fs::File::open(&path).unwrap()).unwrap();
    assert_valid(ANALYSIS_SCHEMA, &report);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn env_vars_mirror_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_qcnoise"))
        .args([
            "weights", "--n", "9", "--t", "0,1", "--omega", "2", "--trials", "100",
        ])
        .env("QCNOISE_SEED", "777")
        .output()
        .unwrap();
    let report = json_stdout(&out);
    assert_eq!(report["seed"].as_u64().unwrap(), 777);

    let out = Command::new(env!("CARGO_BIN_EXE_qcnoise"))
        .args(["exact", "--n", "25", "--t", "0,1,2", "--omega", "3"])
        .env("QCNOISE_CAP_N", "25")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "env raises the cap");
}

#[test]
fn csv_report_is_flat_key_value() {
    let out = qcnoise(&[
        "exact", "--n", "7", "--t", "0,1,2", "--omega", "3", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "key,value");
    assert!(lines.iter().any(|l| l.starts_with("kl_exact,")));
    assert!(
        lines
            .iter()
            .any(|l| l.starts_with("preconditions.spanning,"))
    );
    assert!(lines.iter().any(|l| l.starts_with("t[0],\"0,1,2\"")));
}

#[test]
fn dense_hex_input() {
    // 0x07 = 1 + X + X², same spec as the support form
    let dense = qcnoise(&["exact", "--n", "7", "--t", "07", "--dense", "--omega", "3"]);
    let sparse = qcnoise(&["exact", "--n", "7", "--t", "0,1,2", "--omega", "3"]);
    assert_eq!(json_stdout(&dense), json_stdout(&sparse));
    let bad = qcnoise(&["exact", "--n", "7", "--t", "80", "--dense", "--omega", "3"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn uniform_bias_on_a_zero_divisor() {
    // t = 1 + X is a zero divisor of P₅; at ω = inf the noise is uniform on
    // the 2⁴-element ideal ⟨1+X⟩. All the report values are exact dyadics.
    let out = qcnoise(&["exact", "--n", "5", "--t", "0,1", "--omega", "inf"]);
    let report = json_stdout(&out);
    assert_valid(ANALYSIS_SCHEMA, &report);
    assert_eq!(report["omega"], Value::String("inf".into()));
    assert_eq!(report["entropy_exact"].as_f64().unwrap(), 4.0);
    assert_eq!(report["entropy_ideal"].as_f64().unwrap(), 5.0);
    assert_eq!(report["kl_exact"].as_f64().unwrap(), 1.0);
    assert_eq!(report["tv_exact"].as_f64().unwrap(), 0.5);
    assert_eq!(report["kl_closed_form"].as_f64().unwrap(), 0.0);
    assert_eq!(report["preconditions"]["spanning"], Value::Bool(false));
}

#[test]
fn kl_infinity_serializes_as_string() {
    // A non-spanning pair confines the noise; the report still renders and
    // kl_exact is finite, but the reversed model direction is +∞ — covered
    // in the library. Here: the exact command on a non-invertible single t
    // keeps kl_exact finite and spanning=false.
    let out = qcnoise(&["exact", "--n", "7", "--t", "0,1,3", "--omega", "3"]);
    let report = json_stdout(&out);
    assert_valid(ANALYSIS_SCHEMA, &report);
    assert_eq!(report["preconditions"]["spanning"], Value::Bool(false));
    assert!(report["kl_exact"].as_f64().is_some());
}
