use std::sync::Arc;

use serde_json::json;

use super::{map_json, par_tally, space_json, SuiteConfig, Tally};
use crate::corpus::spaces_up_to;
use crate::json::psspace_to_json;
use crate::lifting::pushout;
use crate::pstop::{
    all_filters, all_point_maps, all_psspaces, continuity_witness, final_structure, initial_structure,
    is_continuous, psspaces_up_to_iso, Filter, PsSpace,
};
use crate::space::ContinuousMap;
use crate::BitSet;

fn corpus(max: usize) -> Vec<PsSpace> {
    (0..=max).flat_map(psspaces_up_to_iso).collect()
}

fn image(f: &[usize], a: BitSet) -> BitSet {
    a.iter().map(|x| f[x]).collect()
}

fn pair_json(xi: &PsSpace, zeta: &PsSpace, f: &[usize]) -> serde_json::Value {
    json!({ "source": psspace_to_json(xi), "target": psspace_to_json(zeta), "map": f })
}

/// Index pairs `(i, j)` over a corpus, as parallel work items.
fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub(crate) fn subspace_restriction(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = corpus(max);
    let t = par_tally(&index_pairs(spaces.len()), |&(i, j), t| {
        let (xi, zeta) = (&spaces[i], &spaces[j]);
        for f in all_point_maps(xi.len(), zeta.len()) {
            if !is_continuous(&f, xi, zeta) {
                continue;
            }
            for a in xi.all().subsets().filter(|a| !a.is_empty()) {
                let (sub_a, members_a) = xi.subspace(a).expect("nonempty");
                for b in zeta.all().subsets().filter(|&b| image(&f, a).is_subset(b)) {
                    let (sub_b, members_b) = zeta.subspace(b).expect("nonempty");
                    let restricted: Vec<usize> = members_a
                        .iter()
                        .map(|&x| members_b.iter().position(|&y| y == f[x]).expect("image inside B"))
                        .collect();
                    t.case(
                        is_continuous(&restricted, &sub_a, &sub_b),
                        || "restriction of a continuous map".into(),
                        || json!({ "map": pair_json(xi, zeta, &f), "a": a.iter().collect::<Vec<_>>(), "b": b.iter().collect::<Vec<_>>() }),
                    );
                }
            }
        }
    });
    (format!("pseudotopologies on <= {max} points up to isomorphism"), t)
}

pub(crate) fn subspace_lemma(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = corpus(max);
    let t = par_tally(&spaces, |xi, t| {
        let tau = xi.top_modification();
        for a in xi.all().subsets().filter(|a| !a.is_empty()) {
            let (sub, _) = xi.subspace(a).expect("nonempty");
            let finer = Arc::new(sub.top_modification());
            let coarser = Arc::new(tau.subspace(a).0);
            let witness = || json!({ "space": psspace_to_json(xi), "a": a.iter().collect::<Vec<_>>() });
            t.case(
                ContinuousMap::new(Arc::clone(&finer), Arc::clone(&coarser), identity(a.len())).is_ok(),
                || "τ(ξ|A) is finer than (τξ)|A".into(),
                witness,
            );
            let literal = sub.open_sets_literal();
            let mut opens = finer.opens(1 << 16).unwrap_or_default();
            opens.sort_by(BitSet::canonical_cmp);
            t.case(
                literal.as_ref().is_ok_and(|l| *l == opens),
                || "open sets of τ(ξ|A) agree with the literal criterion".into(),
                witness,
            );
        }
    });
    (format!("subsets of pseudotopologies on <= {max} points"), t)
}

/// `table[a][b]`: `A` is compact at `B`, subsets indexed by their bits.
fn compactness_table(xi: &PsSpace) -> Vec<Vec<bool>> {
    let subsets: Vec<BitSet> = xi.all().subsets().collect();
    let size = 1usize << xi.len();
    let mut table = vec![vec![false; size]; size];
    for &a in &subsets {
        for &b in &subsets {
            table[bits(a)][bits(b)] = xi.compact_at(a, b).expect("small carrier");
        }
    }
    table
}

fn bits(s: BitSet) -> usize {
    s.iter().map(|i| 1usize << i).sum()
}

pub(crate) fn compact_image(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = corpus(max);
    let tables: Vec<Vec<Vec<bool>>> = spaces.iter().map(compactness_table).collect();
    let t = par_tally(&index_pairs(spaces.len()), |&(i, j), t| {
        let (xi, zeta) = (&spaces[i], &spaces[j]);
        for f in all_point_maps(xi.len(), zeta.len()) {
            if !is_continuous(&f, xi, zeta) {
                continue;
            }
            for a in xi.all().subsets() {
                for b in xi.all().subsets() {
                    if !tables[i][bits(a)][bits(b)] {
                        continue;
                    }
                    t.case(
                        tables[j][bits(image(&f, a))][bits(image(&f, b))],
                        || "image of a compact set is compact".into(),
                        || json!({ "map": pair_json(xi, zeta, &f), "a": a.iter().collect::<Vec<_>>(), "b": b.iter().collect::<Vec<_>>() }),
                    );
                }
            }
        }
    });
    (format!("continuous maps between pseudotopologies on <= {max} points"), t)
}

fn is_bijection(f: &[usize]) -> bool {
    let mut seen = vec![false; f.len()];
    f.iter().all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
}

pub(crate) fn compact_balanced(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = corpus(max);
    // Hausdorff topological targets, found by filtering every labelled space
    let targets: Vec<PsSpace> = (0..=max)
        .flat_map(all_psspaces)
        .filter(|y| y.is_topological() && y.is_hausdorff())
        .collect();
    let t = par_tally(&spaces, |xi, t| {
        let compact = xi.is_compact().unwrap_or(false);
        for y in targets.iter().filter(|y| y.len() == xi.len()) {
            for f in all_point_maps(xi.len(), y.len()) {
                if !is_bijection(&f) || !is_continuous(&f, xi, y) {
                    continue;
                }
                if !compact {
                    continue;
                }
                t.count("hypotheses held", 1);
                let mut inverse = vec![0; f.len()];
                for (x, &fx) in f.iter().enumerate() {
                    inverse[fx] = x;
                }
                let homeo = is_continuous(&inverse, y, xi);
                t.case(homeo, || "continuous bijection is a homeomorphism".into(), || pair_json(xi, y, &f));
                t.case(
                    homeo == xi.is_hausdorff(),
                    || "homeomorphism onto a discrete space exactly when limits are singletons".into(),
                    || pair_json(xi, y, &f),
                );
            }
        }
    });
    (
        format!("pseudotopologies on <= {max} points against Hausdorff topological targets"),
        t,
    )
}

pub(crate) fn pushouts(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = spaces_up_to(max);
    let mut spans: Vec<(ContinuousMap, ContinuousMap)> = Vec::new();
    for a in &spaces {
        let outs: Vec<ContinuousMap> = spaces.iter().flat_map(|b| ContinuousMap::enumerate(a, b)).collect();
        for f in &outs {
            for g in &outs {
                spans.push((f.clone(), g.clone()));
            }
        }
    }
    let t = par_tally(&spans, |(f, g), t| {
        let po = match pushout(f, g) {
            Ok(po) => po,
            Err(e) => return t.error("Top pushout", &e),
        };
        let (b, c) = (PsSpace::from_topology(f.target()), PsSpace::from_topology(g.target()));
        let ps = match final_structure(
            po.apex.labels().clone(),
            &[(&b, po.left.as_slice()), (&c, po.right.as_slice())],
        ) {
            Ok(ps) => ps,
            Err(e) => return t.error("final structure", &e),
        };
        let witness = || json!({ "f": map_json(f), "g": map_json(g) });
        t.case(
            ps.top_modification() == *po.apex,
            || "topological modification of the PsTop pushout is the Top pushout".into(),
            witness,
        );
        let hypotheses = b.is_compact().unwrap_or(false) && c.is_compact().unwrap_or(false) && po.apex.is_hausdorff();
        if hypotheses {
            t.count("hypotheses held", 1);
            t.case(
                ps == PsSpace::from_topology(&po.apex),
                || "Top pushout is the PsTop pushout".into(),
                witness,
            );
        }
    });
    (format!("spans of topological spaces with <= {max} points"), t)
}

pub(crate) fn modification_adjunction(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = corpus(max);
    let tops = spaces_up_to(max);
    let t = par_tally(&spaces, |xi, t| {
        let tau = Arc::new(xi.top_modification());
        let itau = PsSpace::from_topology(&tau);
        t.case(
            is_continuous(&identity(xi.len()), xi, &itau),
            || "unit ξ → ιτξ is continuous".into(),
            || psspace_to_json(xi),
        );
        let mut opens = tau.opens(1 << 16).unwrap_or_default();
        opens.sort_by(BitSet::canonical_cmp);
        t.case(
            xi.open_sets_literal().is_ok_and(|l| l == opens),
            || "open sets agree with the literal criterion".into(),
            || psspace_to_json(xi),
        );
        for y in &tops {
            let iy = PsSpace::from_topology(y);
            for f in all_point_maps(xi.len(), y.len()) {
                let ps_side = is_continuous(&f, xi, &iy);
                let top_side = ContinuousMap::new(Arc::clone(&tau), Arc::clone(y), f.clone()).is_ok();
                t.case(
                    ps_side == top_side,
                    || "ξ → ιY continuous exactly when τξ → Y is".into(),
                    || json!({ "space": psspace_to_json(xi), "target": space_json(y), "map": f }),
                );
            }
        }
    });
    (format!("pseudotopologies and topologies on <= {max} points"), t)
}

pub(crate) fn modification_monotone(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let mut t = Tally::default();
    for n in 0..=max {
        let spaces = all_psspaces(n);
        let taus: Vec<PsSpace> = spaces
            .iter()
            .map(|s| PsSpace::from_topology(&s.top_modification()))
            .collect();
        t.merge(par_tally(&index_pairs(spaces.len()), |&(i, j), t| {
            if spaces[i].finer_than(&spaces[j]) {
                t.case(
                    taus[i].finer_than(&taus[j]),
                    || "τ preserves the finer-than order".into(),
                    || json!({ "finer": psspace_to_json(&spaces[i]), "coarser": psspace_to_json(&spaces[j]) }),
                );
            }
        }));
    }
    (format!("labelled pseudotopologies on <= {max} points"), t)
}

pub(crate) fn lattice(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let mut t = Tally::default();
    for n in 0..=max {
        let spaces = all_psspaces(n);
        let id = identity(n);
        // ξ → ζ is continuous through the identity exactly when ξ is finer
        let finer = |a: &PsSpace, b: &PsSpace| is_continuous(&id, a, b);
        t.merge(par_tally(&index_pairs(spaces.len()), |&(i, j), t| {
            let (xi, zeta) = (&spaces[i], &spaces[j]);
            let (Ok(meet), Ok(join)) = (xi.meet(zeta), xi.join(zeta)) else {
                return t.fail("lattice operations".into(), json!(null));
            };
            let witness = || json!({ "xi": psspace_to_json(xi), "zeta": psspace_to_json(zeta) });
            t.case(
                finer(xi, &meet) && finer(zeta, &meet) && finer(&join, xi) && finer(&join, zeta),
                || "meet is below and join above both".into(),
                witness,
            );
            for eta in &spaces {
                if finer(xi, eta) && finer(zeta, eta) {
                    t.case(finer(&meet, eta), || "meet is the greatest lower bound".into(), witness);
                }
                if finer(eta, xi) && finer(eta, zeta) {
                    t.case(finer(eta, &join), || "join is the least upper bound".into(), witness);
                }
            }
        }));
    }

    // initial and final structures against every structure on the carrier
    let sources = corpus(max);
    let small = corpus(max.min(2));
    let pool: Vec<&PsSpace> = sources.iter().chain(small.iter()).collect();
    let labelled: Vec<Vec<PsSpace>> = (0..=max).map(all_psspaces).collect();
    // (carrier size, [(corpus index, map)]) with maps into the carrier when
    // `incoming`, out of it otherwise
    let families = |incoming: bool| {
        let maps = |a: usize, b: usize| if incoming { all_point_maps(a, b) } else { all_point_maps(b, a) };
        let mut out = Vec::new();
        for m in 0..=max {
            for (k, xi) in sources.iter().enumerate() {
                for f in maps(xi.len(), m) {
                    out.push((m, vec![(k, f.clone())]));
                    for (k2, xi2) in small.iter().enumerate() {
                        for f2 in maps(xi2.len(), m) {
                            out.push((m, vec![(k, f.clone()), (sources.len() + k2, f2)]));
                        }
                    }
                }
            }
        }
        out
    };
    t.merge(par_tally(&families(true), |(m, fam), t| {
        let carrier = &labelled[*m];
        let id = identity(*m);
        let into: Vec<(&PsSpace, &[usize])> = fam.iter().map(|(k, f)| (pool[*k], f.as_slice())).collect();
        let fin = match final_structure(carrier[0].labels().clone(), &into) {
            Ok(s) => s,
            Err(e) => return t.error("final structure", &e),
        };
        for eta in carrier {
            let all_maps = into.iter().all(|(xi, f)| is_continuous(f, xi, eta));
            t.case(
                all_maps == is_continuous(&id, &fin, eta),
                || "final structure universal property".into(),
                || json!({ "target": psspace_to_json(eta), "final": psspace_to_json(&fin) }),
            );
        }
    }));
    t.merge(par_tally(&families(false), |(m, fam), t| {
        let carrier = &labelled[*m];
        let id = identity(*m);
        let outs: Vec<(&[usize], &PsSpace)> = fam.iter().map(|(k, g)| (g.as_slice(), pool[*k])).collect();
        let init = match initial_structure(carrier[0].labels().clone(), &outs) {
            Ok(s) => s,
            Err(e) => return t.error("initial structure", &e),
        };
        for eta in carrier {
            let all_maps = outs.iter().all(|(g, zeta)| is_continuous(g, eta, zeta));
            t.case(
                all_maps == is_continuous(&id, eta, &init),
                || "initial structure universal property".into(),
                || json!({ "source": psspace_to_json(eta), "initial": psspace_to_json(&init) }),
            );
        }
    }));
    (
        format!(
            "labelled pseudotopologies on <= {max} points; initial and final structures of \
             one or two maps"
        ),
        t,
    )
}

pub(crate) fn finite_compactness(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = corpus(max);
    let t = par_tally(&spaces, |xi, t| {
        t.case(
            xi.compact_at(xi.all(), xi.all()) == Ok(true),
            || "finite space is compact".into(),
            || psspace_to_json(xi),
        );
    });
    (format!("pseudotopologies on <= {max} points up to isomorphism"), t)
}

/// Pairs `(y, z)` that must lie in `lim_ζ(y•)` for `f` to be continuous,
/// collected from the given filters.
fn requirements(f: &[usize], xi: &PsSpace, m: usize, filters: impl Iterator<Item = Filter>) -> Vec<BitSet> {
    let mut req: Vec<BitSet> = (0..m).map(BitSet::singleton).collect();
    for flt in filters {
        let needed = image(f, xi.lim_filter(flt));
        match flt.push(f) {
            Filter::Principal(base) => {
                for y in base.iter() {
                    req[y] = req[y].union(needed);
                }
            }
            // the improper filter converges everywhere in the target too
            Filter::Improper => {}
        }
    }
    req
}

pub(crate) fn ultrafilter_continuity(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(4);
    let literal_max = max.min(3);
    let spaces = corpus(max);
    let small = corpus(literal_max);

    // every (ξ, f, ζ) with both carriers of at most 4 points: continuity is
    // `requirements ⊆ lim_ζ`, so the two tests agree for every ζ exactly
    // when the requirement tables agree
    let mut t = par_tally(&spaces, |xi, t| {
        for m in 0..=max {
            for f in all_point_maps(xi.len(), m) {
                let ultra = requirements(&f, xi, m, (0..xi.len()).map(Filter::ultra));
                let all = requirements(&f, xi, m, all_filters(xi.len()));
                t.case(
                    ultra == all,
                    || "ultrafilters impose every filter requirement".into(),
                    || json!({ "space": psspace_to_json(xi), "map": f, "target_points": m }),
                );
            }
        }
    });

    // direct comparison on every triple with one side of at most 3 points
    let mut jobs = Vec::new();
    for (i, xi) in spaces.iter().enumerate() {
        for j in 0..small.len() {
            jobs.push((true, i, j));
            if xi.len() > literal_max {
                jobs.push((false, i, j));
            }
        }
    }
    t.merge(par_tally(&jobs, |&(forward, i, j), t| {
        let (xi, zeta) = if forward { (&spaces[i], &small[j]) } else { (&small[j], &spaces[i]) };
        for f in all_point_maps(xi.len(), zeta.len()) {
            let fast = is_continuous(&f, xi, zeta);
            let slow = continuity_witness(&f, xi, zeta);
            t.case(
                slow.as_ref().is_ok_and(|w| w.is_none() == fast),
                || "ultrafilter continuity equals filter continuity".into(),
                || pair_json(xi, zeta, &f),
            );
        }
    }));
    (
        format!(
            "pseudotopologies on <= {max} points up to isomorphism, literal triples with a side \
             of <= {literal_max} points"
        ),
        t,
    )
}
