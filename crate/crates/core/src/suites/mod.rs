//! Exhaustive and seeded property suites, keyed by the name of the statement
//! each one checks. Reports are deterministic for a fixed configuration.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;

mod colimits;
mod frames;
mod lifting;
mod pstop;
mod spatial;

pub use lifting::{regression_set, RegressionCase};

/// Witnesses kept per report; the failure count is always exact.
pub const MAX_WITNESSES: usize = 20;

pub const GROUPS: [&str; 5] = ["frames", "colimits", "spatial", "pstop-lemmas", "lifting"];

/// Corpus bounds. `None` selects each suite's own default.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub max_points: Option<usize>,
    pub max_frame_size: Option<usize>,
    pub steps: Option<usize>,
    pub seed: u64,
}

impl SuiteConfig {
    pub(crate) fn points(&self, default: usize) -> usize {
        self.max_points.unwrap_or(default)
    }

    pub(crate) fn frames(&self, default: usize) -> usize {
        self.max_frame_size.unwrap_or(default)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: String,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub group: &'static str,
    pub key: &'static str,
    pub corpus: String,
    pub cases: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
    /// Named counters such as how many instances met a hypothesis.
    pub details: BTreeMap<String, u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// The report as JSON, with wall time only when asked for.
    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if timings {
            v["elapsed_ms"] = json!(self.elapsed.as_millis() as u64);
        }
        v
    }
}

/// Accumulates cases and failures for one suite.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub cases: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
    pub details: BTreeMap<String, u64>,
}

impl Tally {
    pub fn case(&mut self, ok: bool, name: impl FnOnce() -> String, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.fail(name(), witness());
        }
    }

    pub fn fail(&mut self, case: String, witness: Value) {
        self.failed += 1;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(Failure { case, witness });
        }
    }

    /// A library error where none may occur counts as a failed case.
    pub fn error(&mut self, case: impl Into<String>, e: &Error) {
        self.cases += 1;
        self.fail(case.into(), json!({ "error": e.kind(), "message": e.to_string() }));
    }

    pub fn count(&mut self, key: &str, n: u64) {
        *self.details.entry(key.to_string()).or_default() += n;
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(f);
            }
        }
        for (k, v) in other.details {
            *self.details.entry(k).or_default() += v;
        }
    }
}

/// Runs `check` on every item in parallel and merges the tallies in item
/// order, so the result does not depend on scheduling.
pub(crate) fn par_tally<T: Sync>(items: &[T], check: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|item| {
            let mut t = Tally::default();
            check(item, &mut t);
            t
        })
        .collect();
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    total
}

pub struct Suite {
    pub group: &'static str,
    pub key: &'static str,
    run: fn(&SuiteConfig) -> (String, Tally),
}

impl Suite {
    pub fn run(&self, cfg: &SuiteConfig) -> SuiteReport {
        let start = Instant::now();
        let (corpus, tally) = (self.run)(cfg);
        SuiteReport {
            group: self.group,
            key: self.key,
            corpus,
            cases: tally.cases,
            failed: tally.failed,
            failures: tally.failures,
            details: tally.details,
            elapsed: start.elapsed(),
        }
    }
}

macro_rules! suite {
    ($group:expr, $key:expr, $f:path) => {
        Suite {
            group: $group,
            key: $key,
            run: $f,
        }
    };
}

/// Every suite, grouped and in report order.
pub fn registry() -> Vec<Suite> {
    vec![
        suite!("frames", "FrameDef", frames::frame_def),
        suite!("frames", "DownsetFunctor", frames::downset_functor),
        suite!("frames", "SoberSpaceLemma", frames::sober_space_lemma),
        suite!("frames", "Soberification", frames::soberification),
        suite!("frames", "GaloisConnection", frames::galois_connection),
        suite!("frames", "WayBelow", frames::way_below),
        suite!("frames", "NucleusGeneration", frames::nucleus_generation),
        suite!("colimits", "CoproductUniversal", colimits::coproduct_universal),
        suite!("colimits", "CoproductUnit", colimits::coproduct_unit),
        suite!("colimits", "Saturation", colimits::saturation),
        suite!("colimits", "TensorIdentities", colimits::tensor_identities),
        suite!("colimits", "ProductDistributeLocale", colimits::product_distribute),
        suite!("colimits", "LocPushouts", colimits::loc_pushouts),
        suite!("colimits", "FrameDensityLemma", colimits::frame_density),
        suite!("colimits", "lem:transfinite_comp_locales", colimits::chain_factoring),
        suite!("spatial", "OmegaPt", spatial::omega_pt),
        suite!("spatial", "LocSpatialProducts", spatial::spatial_products),
        suite!("pstop-lemmas", "SubspaceRestiction", pstop::subspace_restriction),
        suite!("pstop-lemmas", "SubspaceLemma", pstop::subspace_lemma),
        suite!("pstop-lemmas", "CompactImageCompact", pstop::compact_image),
        suite!("pstop-lemmas", "CompactSpacesBalanced", pstop::compact_balanced),
        suite!("pstop-lemmas", "PushoutsInPsTop", pstop::pushouts),
        suite!("pstop-lemmas", "TopModificationAdjunction", pstop::modification_adjunction),
        suite!("pstop-lemmas", "TopModificationMonotone", pstop::modification_monotone),
        suite!("pstop-lemmas", "PseudotopologyLattice", pstop::lattice),
        suite!("pstop-lemmas", "FiniteCompactness", pstop::finite_compactness),
        suite!("pstop-lemmas", "UltrafilterContinuity", pstop::ultrafilter_continuity),
        suite!("lifting", "PushProdAndPullPowerLemma", lifting::adjunction),
        suite!("lifting", "PushProdArrowCategory", lifting::arrow_category),
        suite!("lifting", "PushProdIdentity1", lifting::identity1),
        suite!("lifting", "ExponentialLaw", lifting::exponential_law),
        suite!("lifting", "RlpCofClosure", lifting::rlp_cof),
        suite!("lifting", "Retracts", lifting::retracts),
        suite!("lifting", "SmallObjectArgument", lifting::small_object),
    ]
}

/// Suites of one group, or of every group for `"all"`.
pub fn select(group: &str) -> Option<Vec<Suite>> {
    if group == "all" {
        return Some(registry());
    }
    if !GROUPS.contains(&group) {
        return None;
    }
    Some(registry().into_iter().filter(|s| s.group == group).collect())
}

pub fn find(key: &str) -> Option<Suite> {
    registry().into_iter().find(|s| s.key == key)
}

pub(crate) fn space_json(x: &crate::FiniteSpace) -> Value {
    crate::json::space_to_json(x).unwrap_or(Value::Null)
}

pub(crate) fn map_json(f: &crate::ContinuousMap) -> Value {
    crate::json::map_to_json(f).unwrap_or(Value::Null)
}
