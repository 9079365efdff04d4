//! One pass/fail line per acceptance criterion. A criterion passes when its
//! suites report zero failures within the time target.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use pointfree::suites::{self, SuiteConfig, SuiteReport};

struct Outcome {
    ok: bool,
    note: String,
}

fn run_suites(keys: &[&str]) -> Outcome {
    let cfg = SuiteConfig::default();
    let reports: Vec<SuiteReport> = keys
        .iter()
        .map(|k| suites::find(k).unwrap_or_else(|| panic!("suite {k} is registered")).run(&cfg))
        .collect();
    summarize(&reports)
}

fn run_group(group: &str) -> Outcome {
    let cfg = SuiteConfig::default();
    let reports: Vec<SuiteReport> = suites::select(group)
        .expect("group is registered")
        .iter()
        .map(|s| s.run(&cfg))
        .collect();
    summarize(&reports)
}

fn summarize(reports: &[SuiteReport]) -> Outcome {
    let cases: u64 = reports.iter().map(|r| r.cases).sum();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} ({} failed, first: {:?})", r.key, r.failed, r.failures.first().map(|f| &f.case)))
        .collect();
    let note = if failed.is_empty() {
        format!("{cases} cases, 0 failures")
    } else {
        format!("{cases} cases; failing: {}", failed.join("; "))
    };
    Outcome { ok: failed.is_empty(), note }
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pointfree"))
            .args(["check", "all", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && a.status.code() == b.status.code();
    Outcome {
        ok: same && a.status.success() && !a.stdout.is_empty(),
        note: format!(
            "two runs of `check all --seed 7`: {} bytes, exit {:?}, identical: {same}",
            a.stdout.len(),
            a.status.code()
        ),
    }
}

type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("frame coproduct universal property", 60, Box::new(|| run_suites(&["CoproductUniversal"]))),
        ("unit law 2 ⊗ L ≅ L", 5, Box::new(|| run_suites(&["CoproductUnit"]))),
        ("spatial products", 60, Box::new(|| run_suites(&["LocSpatialProducts"]))),
        ("product distributivity", 60, Box::new(|| run_suites(&["ProductDistributeLocale"]))),
        ("Galois connection laws", 30, Box::new(|| run_suites(&["GaloisConnection"]))),
        ("nucleus generation", 10, Box::new(|| run_suites(&["NucleusGeneration"]))),
        ("locale pushouts", 120, Box::new(|| run_suites(&["LocPushouts"]))),
        ("Ω/pt", 60, Box::new(|| run_suites(&["OmegaPt"]))),
        ("pseudotopology lemmas", 120, Box::new(|| run_group("pstop-lemmas"))),
        (
            "lifting adjunction and pushout-product laws",
            120,
            Box::new(|| run_suites(&["PushProdAndPullPowerLemma", "PushProdArrowCategory"])),
        ),
        ("bounded small object argument", 60, Box::new(|| run_suites(&["SmallObjectArgument"]))),
        ("deterministic reports", 600, Box::new(determinism)),
    ];
    let mut all = true;
    for (n, (name, target, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*target);
        let ok = outcome.ok && in_time;
        all &= ok;
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s / {target}s{}]",
            if ok { "PASS" } else { "FAIL" },
            n + 1,
            outcome.note,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over target" },
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
