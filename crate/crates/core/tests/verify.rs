use kummer::verify::{property_names, run_verify, VerifyConfig};

#[test]
fn defaults_pass() {
    let report = run_verify(&VerifyConfig::default()).unwrap();
    let failed: Vec<_> = report.failed_properties().map(|p| p.name).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(report.properties.len(), property_names().len());
    for p in &report.properties {
        assert!(p.cases > 0, "{} ran no cases", p.name);
        assert_eq!(p.cases, p.declared_cases, "{}", p.name);
    }
}

#[test]
fn property_set_is_stable() {
    let names = property_names();
    assert_eq!(names.len(), 25);
    for prefix in ["digits.", "carries.", "valuation.", "triangle.", "render."] {
        assert!(names.iter().any(|n| n.starts_with(prefix)), "{prefix}");
    }
}

#[test]
fn same_seed_same_report() {
    let config = VerifyConfig {
        max_n: 64,
        rows: 64,
        seed: 7,
        ..VerifyConfig::default()
    };
    let a = run_verify(&config).unwrap();
    let b = run_verify(&config).unwrap();
    assert_eq!(a.to_text(false), b.to_text(false));
    assert_eq!(a.to_json(false), b.to_json(false));
    assert!(a.passed());
}

#[test]
fn tiny_sweeps_still_pass() {
    let config = VerifyConfig {
        max_n: 0,
        rows: 1,
        primes: vec![2],
        ..VerifyConfig::default()
    };
    let report = run_verify(&config).unwrap();
    assert!(report.passed(), "{}", report.to_text(false));
}

#[test]
fn invalid_config_is_rejected() {
    let composite = VerifyConfig {
        primes: vec![2, 9],
        ..VerifyConfig::default()
    };
    assert!(run_verify(&composite).is_err());
    let no_primes = VerifyConfig {
        primes: vec![],
        ..VerifyConfig::default()
    };
    assert!(run_verify(&no_primes).is_err());
    let no_rows = VerifyConfig {
        rows: 0,
        ..VerifyConfig::default()
    };
    assert!(run_verify(&no_rows).is_err());
}

#[test]
fn json_report_lists_every_property() {
    let config = VerifyConfig {
        max_n: 16,
        rows: 16,
        ..VerifyConfig::default()
    };
    let json = run_verify(&config).unwrap().to_json(false);
    let listed = json["properties"].as_array().unwrap();
    assert_eq!(listed.len(), 25);
    assert!(listed.iter().all(|p| p["failure_count"] == 0));
    assert!(listed.iter().all(|p| p.get("elapsed_ms").is_none()));
}
