use std::path::PathBuf;

use zerodim_core::harness::{registry, run_all, run_check, run_default, Config, Fixture, Grid, Outcome, RunReport};
use zerodim_core::{Caps, Error, Status};

fn config(name: &str) -> Config {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    Config::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn inline(text: &str) -> Config {
    Config::from_json(text).unwrap()
}

#[test]
fn every_registered_check_is_consistent_on_its_defaults() {
    assert_eq!(registry().len(), 14);
    for check in registry() {
        let r = run_default(check.id, &Caps::default(), 7).unwrap();
        assert_eq!(r.outcome, Outcome::Consistent, "{}: {:?}", check.id, r.violations);
        assert!(r.error.is_none());
    }
}

#[test]
fn default_config_runs_clean() {
    let reports = run_all(&config("default.json")).unwrap();
    assert_eq!(reports.len(), 14);
    assert!(reports.iter().all(|r| r.outcome == Outcome::Consistent));
}

#[test]
fn mislabelled_full_shift_is_a_violation() {
    let reports = run_all(&config("negative-control.json")).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r.outcome, Outcome::Violation);
    let v = &r.violations[0];
    assert_eq!(r.predicates[v.fails].verdict.status, Status::Fails);
    assert_eq!(r.predicates[v.fails].system, "full-shift-mislabelled");
}

#[test]
fn correctly_declared_odometer_is_consistent() {
    let c = inline(
        r#"{"schema_version": 1, "systems": [{"id": "odo", "kind": "odometer", "expect": ["ap", "equicontinuity"]}],
            "checks": [{"theorem": "THM-2.6a", "systems": ["odo"]}, {"theorem": "PROP-4.9", "systems": ["odo"]}]}"#,
    );
    let reports = run_all(&c).unwrap();
    assert!(reports.iter().all(|r| r.outcome == Outcome::Consistent), "{reports:#?}");
}

#[test]
fn empty_config_gives_no_reports() {
    let reports = run_all(&inline(r#"{"schema_version": 1}"#)).unwrap();
    assert!(reports.is_empty());
    let run = RunReport::new(&Config::empty(), reports);
    assert_eq!(run.summary.checks, 0);
}

#[test]
fn unknown_theorem_or_system_is_rejected() {
    let bad = Config::from_json(r#"{"schema_version": 1, "checks": [{"theorem": "THM-9.9"}]}"#);
    assert!(matches!(bad, Err(Error::Lookup(_))), "{bad:?}");
    let bad = Config::from_json(r#"{"schema_version": 1, "checks": [{"theorem": "THM-2.6a", "systems": ["nowhere"]}]}"#);
    assert!(bad.is_err() || run_all(&bad.unwrap()).is_err());
    assert!(Config::from_json(r#"{"schema_version": 1, "bogus": 3}"#).is_err());
}

#[test]
fn short_horizons_never_produce_violations() {
    for check in registry() {
        let fixtures = check.default_systems.iter().map(|s| Fixture::named(s).unwrap()).collect();
        let grid = Grid { depths: vec![1], horizons: vec![2] };
        let Ok(r) = run_check(check.id, fixtures, Some(grid), &Caps::default(), 1) else { continue };
        assert_ne!(r.outcome, Outcome::Violation, "{}", check.id);
    }
}

#[test]
fn runs_are_deterministic() {
    let c = config("default.json");
    let a = serde_json::to_string(&RunReport::new(&c, run_all(&c).unwrap())).unwrap();
    let b = serde_json::to_string(&RunReport::new(&c, run_all(&c).unwrap())).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_changes_only_sampled_subjects() {
    let a = run_default("THM-3.3.3", &Caps::default(), 1).unwrap();
    let b = run_default("THM-3.3.3", &Caps::default(), 2).unwrap();
    assert_eq!(a.outcome, Outcome::Consistent);
    assert_eq!(b.outcome, Outcome::Consistent);
}
