use std::collections::BTreeSet;

use pointfree::lifting::Verdict;
use pointfree::suites::{find, registry, regression_set, select, SuiteConfig, GROUPS};

fn small() -> SuiteConfig {
    SuiteConfig {
        max_points: Some(2),
        max_frame_size: Some(4),
        steps: None,
        seed: 3,
    }
}

#[test]
fn registry_keys_are_unique_and_grouped() {
    let suites = registry();
    let keys: BTreeSet<_> = suites.iter().map(|s| s.key).collect();
    assert_eq!(keys.len(), suites.len());
    for s in &suites {
        assert!(GROUPS.contains(&s.group), "{} has unknown group {}", s.key, s.group);
    }
    let total: usize = GROUPS.iter().map(|g| select(g).unwrap().len()).sum();
    assert_eq!(total, suites.len());
    assert_eq!(select("all").unwrap().len(), suites.len());
    assert!(select("topology").is_none());
    assert!(find("SubspaceLemma").is_some());
    assert!(find("NoSuchLemma").is_none());
}

#[test]
fn every_suite_passes_on_a_small_corpus() {
    for suite in registry() {
        let report = suite.run(&small());
        assert!(report.cases > 0, "{} ran no cases", report.key);
        assert!(report.passed(), "{}: {:?}", report.key, report.failures);
    }
}

#[test]
fn reports_are_deterministic() {
    for key in ["NucleusGeneration", "PushProdAndPullPowerLemma", "LocPushouts"] {
        let a = find(key).unwrap().run(&small()).to_json(false);
        let b = find(key).unwrap().run(&small()).to_json(false);
        assert_eq!(a, b, "{key}");
        assert!(a.get("elapsed_ms").is_none());
    }
}

#[test]
fn timings_are_opt_in() {
    let report = find("CoproductUnit").unwrap().run(&small());
    assert!(report.to_json(true).get("elapsed_ms").is_some());
}

#[test]
fn regression_set_covers_both_verdicts() {
    let cases = regression_set();
    assert_eq!(cases.len(), 20);
    let names: BTreeSet<_> = cases.iter().map(|c| c.name).collect();
    assert_eq!(names.len(), cases.len());
    assert!(cases.iter().any(|c| c.expected == Verdict::Complete));
    assert!(cases.iter().any(|c| c.expected == Verdict::Partial));
}

#[test]
fn step_override_keeps_verdicts_honest() {
    for steps in [0, 1, 5] {
        let cfg = SuiteConfig {
            steps: Some(steps),
            ..SuiteConfig::default()
        };
        let report = find("SmallObjectArgument").unwrap().run(&cfg);
        assert!(report.passed(), "steps {steps}: {:?}", report.failures);
    }
}
