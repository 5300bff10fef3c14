use proptest::prelude::*;
use qc_core::cli::*;
use qc_core::QcError;

fn config(suite: Suite, points: usize) -> RunConfig {
    ConfigFile {
        suite: Some(suite),
        points: Some(points),
        ..Default::default()
    }
    .resolve()
    .unwrap()
}

#[test]
fn config_file_fields_are_overridden_by_flags() {
    let file = ConfigFile::parse(r#"{"suite": "perturb", "seed": 3, "points": 10, "tol": 0.5}"#).unwrap();
    let flags = ConfigFile {
        suite: Some(Suite::Bianchi),
        points: Some(4),
        ..Default::default()
    };
    let cfg = file.overridden_by(flags).resolve().unwrap();
    assert_eq!(cfg.suite, Suite::Bianchi);
    assert_eq!(cfg.seed, 3);
    assert_eq!(cfg.points, 4);
    assert_eq!(cfg.tol, 0.5);
    assert_eq!(cfg.fd_step, 1e-5);
}

#[test]
fn defaults_depend_on_suite_and_path() {
    assert_eq!(RunConfig::new(Suite::CheckCanonical).tol, 1e-8);
    assert_eq!(RunConfig::new(Suite::CheckGalicki).tol, 1e-6);
    assert_eq!(RunConfig::new(Suite::Symbols).points, 200);
    let fd = ConfigFile {
        suite: Some(Suite::CheckCanonical),
        jacobians: Some(Jacobians::FiniteDifference),
        ..Default::default()
    };
    assert_eq!(fd.resolve().unwrap().tol, 1e-4);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        r#"{"suite": "check-canonical", "points": 0}"#,
        r#"{"suite": "check-canonical", "fd_step": 0.5}"#,
        r#"{"suite": "check-canonical", "fd_step": 0}"#,
        r#"{"suite": "check-canonical", "tol": -1}"#,
        r#"{"suite": "nonsense"}"#,
        r#"{"suite": "perturb", "unknown": 1}"#,
        r#"{"seed": 1}"#,
        r#"{"suite": "perturb", "perturbation": {"magnitude": 0.1, "basis": [], "coefficients": [1.0]}}"#,
        r#"{"suite": "perturb", "perturbation": {"magnitude": 0.1, "coefficients": [1.0], "basis": [{"forms": [[{"component": 9, "exponent": [0,0,0,0,0,0,0,0], "coefficient": 1}], [], []]}]}}"#,
        r#"{"suite": "perturb", "perturbation": {"magnitude": 0.1, "coefficients": [1.0], "basis": [{"forms": [[{"component": 0, "exponent": [4,0,0,0,0,0,0,0], "coefficient": 1}], [], []]}]}}"#,
    ];
    for text in bad {
        let r = ConfigFile::parse(text).and_then(ConfigFile::resolve);
        assert!(matches!(r, Err(QcError::Config(_))), "{text}");
    }
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("check-everything".parse::<Suite>().is_err());
}

#[test]
fn d_parameters_parse() {
    let d = parse_d_params("0.1, 0, 0 0 0.2 0 -0.1 0 0 5e-2").unwrap();
    assert_eq!(d[0], 0.1);
    assert_eq!(d[6], -0.1);
    assert_eq!(d[9], 0.05);
    assert!(parse_d_params("1 2 3").is_err());
    assert!(parse_d_params("1 2 3 4 5 6 7 8 9 x").is_err());
    assert!(parse_d_params("1 2 3 4 5 6 7 8 9 NaN").is_err());
}

#[test]
fn canonical_suite_passes_and_is_deterministic() {
    let cfg = config(Suite::CheckCanonical, 8);
    let a = emit_report(&run_suite(&cfg).unwrap(), Format::Json);
    let b = emit_report(&run_suite(&cfg).unwrap(), Format::Json);
    assert_eq!(a, b);
    let report = Report::parse(std::str::from_utf8(&a).unwrap()).unwrap();
    assert!(report.aggregate.pass);
    assert!(report.aggregate.max.unwrap() < 1e-8);
}

#[test]
fn galicki_with_zero_d_reproduces_canonical() {
    let mut g = config(Suite::CheckGalicki, 8);
    g.d = Some([0.0; 10]);
    let g = run_suite(&g).unwrap();
    let c = run_suite(&config(Suite::CheckCanonical, 8)).unwrap();
    for (a, b) in g.points.iter().zip(&c.points) {
        assert!((a.residual.unwrap() - b.residual.unwrap()).abs() < 1e-10);
    }
}

#[test]
fn report_round_trips_exactly() {
    let mut report = run_suite(&config(Suite::Bianchi, 2)).unwrap();
    report.wall_time = None;
    let text = String::from_utf8(emit_report(&report, Format::Json)).unwrap();
    assert_eq!(Report::parse(&text).unwrap(), report);
}

#[test]
fn empty_report_passes_with_null_max() {
    let mut report = run_suite(&config(Suite::Symbols, 1)).unwrap();
    report.points.clear();
    report.aggregate = Aggregate::from_records(&report.points, suite_passes(report.suite, &report.points));
    let text = String::from_utf8(emit_report(&report, Format::Json)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["aggregate"]["pass"], serde_json::Value::Bool(true));
    assert!(v["aggregate"]["max"].is_null());
}

#[test]
fn ledger_constants_are_reported() {
    let report = run_suite(&config(Suite::Symbols, 3)).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&emit_report(&report, Format::Json)).unwrap();
    let c = &v["constants"];
    assert_eq!(c["H0"], 10);
    assert_eq!(c["H1"], 35);
    assert_eq!(c["H2"], 0);
    assert_eq!(c["H3"], 0);
    assert_eq!(c["index"], 35);
    assert_eq!(c["recompute"], false);
    for key in ["suite", "config", "points", "aggregate", "constants"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn tight_tolerance_fails() {
    let mut cfg = config(Suite::CheckCanonical, 4);
    cfg.tol = 1e-20;
    assert!(!run_suite(&cfg).unwrap().aggregate.pass);
}

#[test]
fn text_report_has_summary() {
    let report = run_suite(&config(Suite::Perturb, 4)).unwrap();
    let text = String::from_utf8(emit_report(&report, Format::Text)).unwrap();
    assert!(text.contains("aggregate"));
    assert!(text.contains("recompute=false"));
    assert!(text.contains("wall time"));
}

#[test]
fn perturbation_spec_survives_json() {
    let spec = PerturbationSpec::random(4, 2, 1e-2);
    let text = String::from_utf8(to_json(&spec)).unwrap();
    let back: PerturbationSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, spec);
}

proptest! {
    #[test]
    fn floats_are_written_with_seventeen_digits(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let text = String::from_utf8(to_json(&x)).unwrap();
        let mantissa = text.trim().trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        prop_assert_eq!(mantissa.len(), 17);
        let back: f64 = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}
