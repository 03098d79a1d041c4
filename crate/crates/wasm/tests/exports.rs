use zitterlab_browser::{spin_current_slice, trajectory_samples, verify_report, SLICE_STRIDE, TRAJECTORY_STRIDE};

#[test]
fn rest_trajectory_stays_on_the_circle() {
    let v = trajectory_samples(r#"{"spin": {"theta": 0.3}, "span": {"periods": 1}}"#, 42).unwrap();
    assert_eq!(v.len() % TRAJECTORY_STRIDE, 0);
    assert_eq!(v.len() / TRAJECTORY_STRIDE, 65);
    for s in v.chunks(TRAJECTORY_STRIDE) {
        let r: f64 = (0..3).map(|k| (s[2 + k] - s[5 + k]).powi(2)).sum::<f64>().sqrt();
        assert!((r - 0.5).abs() < 1e-12);
    }
}

#[test]
fn field_run_keeps_its_monitors_small() {
    let json = r#"{"spin": {"theta": 1.0}, "field": {"kind": "uniform", "b": [0, 0, 0.05]}, "span": {"periods": 5}}"#;
    let v = trajectory_samples(json, 1).unwrap();
    assert!(v.chunks(TRAJECTORY_STRIDE).all(|s| s[8].abs() < 1e-8 && s[9].abs() < 1e-8));
}

#[test]
fn bad_scenarios_report_the_field() {
    let err = trajectory_samples(r#"{"spin": {"theta": 0}, "span": {"periods": 1}, "velocity": [1.5, 0, 0]}"#, 0)
        .unwrap_err();
    assert!(err.contains("velocity"), "{err}");
    assert!(trajectory_samples("{", 0).is_err());
}

#[test]
fn rest_slice_has_uniform_density() {
    let n = 21;
    let v = spin_current_slice(0.0, 0.0, 0.0, 0.0, 0.7, 1.0, n).unwrap();
    assert_eq!(v.len(), n * n * SLICE_STRIDE);
    for p in v.chunks(SLICE_STRIDE) {
        assert!((p[4] + 1.0).abs() < 1e-12, "charge density {}", p[4]);
    }
    // spin along z: the spin current is the luminal zitter velocity, the same at every point
    let first = &v[..SLICE_STRIDE];
    assert!((first[2].hypot(first[3]) - 1.0).abs() < 1e-12);
    for p in v.chunks(SLICE_STRIDE) {
        assert!((p[2] - first[2]).abs() < 1e-12 && (p[3] - first[3]).abs() < 1e-12);
    }
    assert!(spin_current_slice(0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 3).is_err());
}

#[test]
fn verify_passes() {
    let text = verify_report(20, 42).unwrap();
    assert!(text.contains("overall: PASS (seed 42)"), "{text}");
}
