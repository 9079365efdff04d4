use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{par_tally, space_json, SuiteConfig, Tally};
use crate::corpus::{frames_up_to, lattices, posets_up_to_iso, spaces_up_to};
use crate::error::Error;
use crate::frame::{enumerate_homs, infinite_distributivity_holds, is_locally_compact, way_below as wb};
use crate::frame::{FiniteFrame, WAY_BELOW_MAX_ELEMENTS};
use crate::galois::right_adjoint;
use crate::nucleus::{nucleus_from_prenucleus, random_prenucleus};
use crate::poset::{downset_image, FinitePoset, MonotoneMap};
use crate::sober::{is_sober, sober_glue_check, soberify};
use crate::spatial::find_homeomorphism;
use crate::space::ContinuousMap;
use crate::{BitSet, FiniteSpace};

/// Binary distributivity of a bounded poset, recomputing meets and joins
/// from the order alone.
fn distributive_by_brute_force(p: &FinitePoset) -> bool {
    let n = p.len();
    let meet = |a: usize, b: usize| {
        let common = p.down(a).intersection(p.down(b));
        common.iter().find(|&m| common.is_subset(p.down(m)))
    };
    let join = |a: usize, b: usize| {
        let common = p.up(a).intersection(p.up(b));
        common.iter().find(|&m| common.is_subset(p.up(m)))
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = join(b, c).and_then(|bc| meet(a, bc));
                let rhs = match (meet(a, b), meet(a, c)) {
                    (Some(x), Some(y)) => join(x, y),
                    _ => None,
                };
                if lhs.is_none() || lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

fn frame_json(l: &FiniteFrame) -> serde_json::Value {
    crate::json::frame_to_json(l)
}

pub(crate) fn frame_def(cfg: &SuiteConfig) -> (String, Tally) {
    let max_lattice = cfg.frames(6);
    let max_poset = cfg.points(5);
    let mut t = Tally::default();
    for n in 1..=max_lattice {
        for c in lattices(n) {
            let oracle = distributive_by_brute_force(&c.poset);
            t.case(
                c.frame.is_some() == oracle,
                || format!("lattice of size {n} classified as frame={}", c.frame.is_some()),
                || crate::json::poset_to_json(&c.poset),
            );
        }
    }
    for n in 0..=max_poset {
        for p in posets_up_to_iso(n) {
            let p = Arc::new(p);
            let result = p
                .downsets(1 << 20)
                .and_then(|d| FiniteFrame::from_sets(crate::Labels::numbered("d", d.len()), &d.sets));
            match result {
                Ok(_) => t.case(true, String::new, || json!(null)),
                Err(e) => t.error(format!("downsets of poset on {n} elements"), &e),
            }
        }
    }
    for l in frames_up_to(max_lattice.min(4)) {
        match infinite_distributivity_holds(&l) {
            Ok(ok) => t.case(ok, || "infinite distributivity".into(), || frame_json(&l)),
            Err(e) => t.error("infinite distributivity", &e),
        }
    }
    let corpus = format!(
        "lattices with <= {max_lattice} elements, posets with <= {max_poset} elements, \
         infinite law on frames with <= {} elements",
        max_lattice.min(4)
    );
    (corpus, t)
}

pub(crate) fn downset_functor(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let posets: Vec<Arc<FinitePoset>> = (0..=max).flat_map(posets_up_to_iso).map(Arc::new).collect();
    let downsets: Vec<Vec<BitSet>> = posets
        .iter()
        .map(|p| p.downsets(1 << 20).map(|d| d.sets).unwrap_or_default())
        .collect();
    let maps: Vec<Vec<Vec<MonotoneMap>>> = posets
        .iter()
        .map(|p| posets.iter().map(|q| MonotoneMap::enumerate(p, q)).collect())
        .collect();
    let n = posets.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .collect();
    let mut t = par_tally(&triples, |&(a, b, c), t| {
        for f in &maps[a][b] {
            for g in &maps[b][c] {
                let gf = match f.then(g) {
                    Ok(h) => h,
                    Err(e) => return t.error("composite", &e),
                };
                for &u in &downsets[a] {
                    let direct = downset_image(&gf, u);
                    let staged = downset_image(f, u).and_then(|v| downset_image(g, v));
                    t.case(
                        direct.is_ok() && direct == staged,
                        || "image of a downset under a composite".into(),
                        || json!({ "f": f.as_slice(), "g": g.as_slice(), "downset": u.iter().collect::<Vec<_>>() }),
                    );
                }
            }
        }
    });
    for (a, p) in posets.iter().enumerate() {
        let id = MonotoneMap::identity(Arc::clone(p));
        for &u in &downsets[a] {
            t.case(
                downset_image(&id, u) == Ok(u),
                || "identity acts trivially".into(),
                || json!({ "downset": u.iter().collect::<Vec<_>>() }),
            );
        }
    }
    (format!("monotone maps between posets with <= {max} elements"), t)
}

pub(crate) fn sober_space_lemma(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(4);
    let spaces = spaces_up_to(max);
    let t = par_tally(&spaces, |x, t| {
        match is_sober(x) {
            Ok(s) => t.case(
                s == x.is_t0(),
                || "sober exactly when T0".into(),
                || space_json(x),
            ),
            Err(e) => t.error("sobriety", &e),
        }
        for a in x.all().subsets() {
            let b = x.all().difference(a);
            match sober_glue_check(x, a, b) {
                Ok(v) => {
                    if v.hypotheses_hold() {
                        t.count("hypotheses held", 1);
                    }
                    t.case(
                        v.consistent(),
                        || "gluing a sober closed part with a Hausdorff part".into(),
                        || {
                            json!({
                                "space": space_json(x),
                                "a": crate::json::set_to_json(x.labels(), a),
                            })
                        },
                    );
                }
                Err(Error::Hypothesis(_)) => t.count("decompositions skipped", 1),
                Err(e) => t.error("gluing check", &e),
            }
        }
    });
    (format!("decompositions of spaces with <= {max} points"), t)
}

pub(crate) fn soberification(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(4);
    let spaces = spaces_up_to(max);
    let small = max.min(3);
    let sober_targets: Vec<Arc<FiniteSpace>> = spaces_up_to(small)
        .into_iter()
        .filter(|s| s.is_t0())
        .collect();
    let t = par_tally(&spaces, |x, t| {
        let s = match soberify(x) {
            Ok(s) => s,
            Err(e) => return t.error("soberify", &e),
        };
        let iso = find_homeomorphism(&s.space, x).is_some();
        t.case(
            iso == x.is_t0(),
            || "reflection is an isomorphism exactly on T0 spaces".into(),
            || space_json(x),
        );
        if x.len() > small {
            return;
        }
        let q = &s.quotient;
        for target in &sober_targets {
            let through = ContinuousMap::enumerate(&s.space, target);
            for phi in ContinuousMap::enumerate(x, target) {
                let factors = through
                    .iter()
                    .filter(|psi| (0..x.len()).all(|p| psi.apply(q.apply(p)) == phi.apply(p)))
                    .count();
                t.case(
                    factors == 1,
                    || format!("map into a sober space factors {factors} times"),
                    || json!({ "space": space_json(x), "map": phi.as_slice() }),
                );
            }
        }
    });
    (
        format!("spaces with <= {max} points; universal property for <= {small} points"),
        t,
    )
}

pub(crate) fn galois_connection(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(5);
    let frames = frames_up_to(max);
    let pairs: Vec<(usize, usize)> = (0..frames.len())
        .flat_map(|a| (0..frames.len()).map(move |b| (a, b)))
        .collect();
    let t = par_tally(&pairs, |&(a, b), t| {
        let (l, m) = (&frames[a], &frames[b]);
        for f in enumerate_homs(l, m) {
            let gc = match right_adjoint(&f) {
                Ok(gc) => gc,
                Err(e) => return t.error("right adjoint", &e),
            };
            let witness = || crate::json::hom_to_json(&f);
            // g(y) recomputed as the largest x with f(x) <= y
            let oracle_ok = m.elements().all(|y| {
                let below: Vec<usize> = l.elements().filter(|&x| m.leq(f.apply(x), y)).collect();
                let g = gc.right(y);
                below.contains(&g) && below.iter().all(|&x| l.leq(x, g))
            });
            t.case(oracle_ok, || "right adjoint matches brute-force maximum".into(), witness);
            t.case(gc.check().is_ok(), || "adjunction laws".into(), witness);
            let fgf = l.elements().all(|x| f.apply(gc.right(f.apply(x))) == f.apply(x));
            let gfg = m.elements().all(|y| gc.right(f.apply(gc.right(y))) == gc.right(y));
            t.case(fgf && gfg, || "fgf = f and gfg = g".into(), witness);
            t.case(gc.dualities_hold(), || "injective/surjective dualities".into(), witness);
        }
    });
    (format!("homs between frames with <= {max} elements"), t)
}

pub(crate) fn way_below(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(6).min(WAY_BELOW_MAX_ELEMENTS);
    let frames = frames_up_to(max);
    let t = par_tally(&frames, |l, t| {
        for a in l.elements() {
            for b in l.elements() {
                match wb(l, a, b) {
                    Ok(v) => t.case(
                        v == l.leq(a, b),
                        || format!("way below at ({}, {})", l.label(a), l.label(b)),
                        || frame_json(l),
                    ),
                    Err(e) => t.error("way below", &e),
                }
            }
        }
        match is_locally_compact(l) {
            Ok(v) => t.case(v, || "local compactness".into(), || frame_json(l)),
            Err(e) => t.error("local compactness", &e),
        }
    });
    (format!("frames with <= {max} elements"), t)
}

pub const NUCLEUS_SAMPLES: usize = 1000;

pub(crate) fn nucleus_generation(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(6);
    let frames = frames_up_to(max);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::with_capacity(NUCLEUS_SAMPLES);
    let mut rejected = 0u64;
    while samples.len() < NUCLEUS_SAMPLES && rejected < 1_000_000 {
        let l = &frames[rng.gen_range(0..frames.len())];
        match random_prenucleus(l, &mut rng, 1) {
            Some(p) => samples.push(p),
            None => rejected += 1,
        }
    }
    let mut t = par_tally(&samples, |k0, t| {
        let l = k0.frame();
        let witness = || json!({ "frame": frame_json(l), "prenucleus": k0.as_slice() });
        let k = match nucleus_from_prenucleus(k0) {
            Ok(k) => k,
            Err(e) => return t.error("nucleus generation", &e),
        };
        let map = k.as_slice();
        let laws = l.elements().all(|x| {
            l.leq(x, map[x])
                && map[map[x]] == map[x]
                && l.elements().all(|y| {
                    (!l.leq(x, y) || l.leq(map[x], map[y])) && map[l.meet(x, y)] == l.meet(map[x], map[y])
                })
        });
        t.case(laws, || "nucleus laws".into(), witness);
        t.case(
            k.fixed_points() == k0.fixed_points(),
            || "fixed points preserved".into(),
            witness,
        );
        t.case(k0.iterate() == map, || "agrees with iterating the prenucleus".into(), witness);
    });
    t.count("rejected draws", rejected);
    if samples.len() < NUCLEUS_SAMPLES {
        t.fail(
            "sampling".into(),
            json!({ "accepted": samples.len(), "wanted": NUCLEUS_SAMPLES }),
        );
    }
    (
        format!("{NUCLEUS_SAMPLES} random prenuclei on frames with <= {max} elements"),
        t,
    )
}
