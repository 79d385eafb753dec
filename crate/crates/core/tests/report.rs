use serde_json::Value;

use trigonal::lattice::LatticeData;
use trigonal::report::{run_all, ReportConfig, Residual, Section, Status};

fn fast() -> ReportConfig {
    ReportConfig {
        sections: vec![Section::Periods, Section::Lattice, Section::Curve, Section::Obstruction],
        timings: false,
        ..ReportConfig::default()
    }
}

#[test]
fn items_follow_the_schema() {
    let r = run_all(&fast()).unwrap();
    let v: Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["toolkit_version", "constants", "items"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for it in v["items"].as_array().unwrap() {
        for key in ["name", "anchor", "status", "residual", "tolerance", "detail"] {
            assert!(it.get(key).is_some(), "{key} missing in {it}");
        }
        let kind = it["residual"]["kind"].as_str().unwrap();
        match kind {
            "exact" => assert!(it["tolerance"].is_null() && it["residual"]["zero"].is_boolean()),
            "numeric" => assert!(it["tolerance"].is_number() && it["residual"]["value"].is_number()),
            _ => panic!("{kind}"),
        }
    }
}

#[test]
fn constants_snapshot_is_frozen() {
    let r = run_all(&ReportConfig::empty()).unwrap();
    assert!((r.constants.alpha - 0.8833193751427250).abs() < 1e-14);
    assert!((r.constants.beta - 1.2143253239437908).abs() < 1e-14);
    assert!((r.constants.gamma - 0.7010910526627271).abs() < 1e-12);
}

#[test]
fn mutated_real_lattice_matrix_fails_exactly_one_item() {
    let mut data = LatticeData::bundled();
    let g = data.matrix_mut("G_R_1").unwrap();
    g.set(1, 2, g.get(1, 2) - 1);
    let cfg = ReportConfig {
        lattice_data: data,
        ..fast()
    };
    let r = run_all(&cfg).unwrap();
    assert_eq!(r.failed(), vec!["lattice.real.forward"]);
    let it = r.item("lattice.real.forward").unwrap();
    assert_eq!(it.residual, Some(Residual::Exact { zero: false }));
    assert_eq!(it.status, Status::Fail);
}

#[test]
fn unreachable_tolerance_is_recorded_not_raised() {
    let cfg = ReportConfig {
        tolerance: Some(1e-15),
        only: Some("periods.*".into()),
        ..fast()
    };
    let r = run_all(&cfg).unwrap();
    assert!(!r.all_passed());
    assert!(r
        .items
        .iter()
        .any(|i| i.error.as_deref().is_some_and(|e| e.contains("tolerance not met"))));
}

#[test]
fn repeated_runs_serialize_identically() {
    assert_eq!(run_all(&fast()).unwrap().to_json(), run_all(&fast()).unwrap().to_json());
}
