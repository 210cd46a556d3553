use std::fs;
use std::path::PathBuf;

use rqte::scenario::{emit_golden, ParamValue, ScenarioConfig, ScenarioKind};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check(cfg: ScenarioConfig) {
    let tmp = tempfile::tempdir().unwrap();
    let produced = emit_golden(&cfg, tmp.path()).unwrap();
    let name = produced.file_name().unwrap();
    let expected = fs::read_to_string(golden_dir().join(name)).unwrap();
    let got = fs::read_to_string(&produced).unwrap();
    assert_eq!(got, expected, "{} drifted from its golden file", cfg.scenario);
}

#[test]
fn box_golden() {
    check(
        ScenarioConfig::new(ScenarioKind::Box)
            .with_param("l", ParamValue::Float(1.0))
            .with_param("m", ParamValue::Float(1.0))
            .with_param("n-max", ParamValue::Int(10)),
    );
}

#[test]
fn string_golden() {
    check(ScenarioConfig::new(ScenarioKind::String).with_param("l-s", ParamValue::List(vec![0.5, 1.0, 2.0])));
}

#[test]
fn flowtest_golden() {
    check(ScenarioConfig::new(ScenarioKind::Flowtest).with_param("dt", ParamValue::List(vec![1e-2, 1e-3, 1e-4])));
}

#[test]
fn box_golden_matches_closed_form() {
    let text = fs::read_to_string(golden_dir().join("box.golden.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,lambda,ratio_to_ground"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let n: f64 = cols[0].parse().unwrap();
        let lambda: f64 = cols[1].parse().unwrap();
        let want = std::f64::consts::PI.powi(2) * n * n / 2.0;
        assert!((lambda - want).abs() < 1e-12 * want, "n={n}");
    }
}

#[test]
fn golden_is_byte_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig::new(ScenarioKind::Flowtest);
    let a = fs::read(emit_golden(&cfg, tmp.path()).unwrap()).unwrap();
    let b = fs::read(emit_golden(&cfg, tmp.path()).unwrap()).unwrap();
    assert_eq!(a, b);
}
