use std::collections::HashMap;
use std::sync::Arc;

use serde_json::json;

use super::{par_tally, SuiteConfig, Tally};
use crate::colimits::{
    chain_factoring as factoring, density_check, distribute_iso, pushout_loc, pushout_universal_check,
    InjectiveChain,
};
use crate::corpus::frames_up_to;
use crate::error::Error;
use crate::frame::{enumerate_homs, find_iso, FiniteFrame, FrameHom};
use crate::galois::right_adjoint;
use crate::json::{frame_to_json, hom_to_json};
use crate::tensor::{coproduct, saturated_downsets_by_filtering, copair, PairCarrier, TensorFrame};
use crate::BitSet;

fn pairs_of<T: Clone>(xs: &[T]) -> Vec<(T, T)> {
    xs.iter()
        .flat_map(|a| xs.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

fn frames_json(l: &FiniteFrame, m: &FiniteFrame) -> serde_json::Value {
    json!({ "left": frame_to_json(l), "right": frame_to_json(m) })
}

pub(crate) fn coproduct_universal(cfg: &SuiteConfig) -> (String, Tally) {
    let factor_max = cfg.frames(4);
    let cocone_max = factor_max + 1;
    let factors = frames_up_to(factor_max);
    let targets = frames_up_to(cocone_max);
    let mut jobs = Vec::new();
    for (l, m) in pairs_of(&factors) {
        for n in &targets {
            jobs.push((Arc::clone(&l), Arc::clone(&m), Arc::clone(n)));
        }
    }
    let t = par_tally(&jobs, |(l, m, n), t| {
        let tf = match coproduct(l, m) {
            Ok(tf) => tf,
            Err(e) => return t.error("coproduct", &e),
        };
        // every hom out of the coproduct, keyed by its restriction to the factors
        let mut by_cocone: HashMap<(Vec<usize>, Vec<usize>), Vec<FrameHom>> = HashMap::new();
        for h in enumerate_homs(tf.frame(), n) {
            let key = match (tf.iota1().then(&h), tf.iota2().then(&h)) {
                (Ok(a), Ok(b)) => (a.as_slice().to_vec(), b.as_slice().to_vec()),
                (Err(e), _) | (_, Err(e)) => return t.error("restriction", &e),
            };
            by_cocone.entry(key).or_default().push(h);
        }
        let gs = enumerate_homs(m, n);
        for f in enumerate_homs(l, n) {
            for g in &gs {
                let witness = || {
                    json!({
                        "factors": frames_json(l, m),
                        "target": frame_to_json(n),
                        "f": f.as_slice(),
                        "g": g.as_slice(),
                    })
                };
                let key = (f.as_slice().to_vec(), g.as_slice().to_vec());
                let found = by_cocone.get(&key).map(Vec::as_slice).unwrap_or(&[]);
                match copair(&tf, &f, g) {
                    Ok(h) => t.case(
                        found.len() == 1 && found[0].as_slice() == h.as_slice(),
                        || format!("cocone has {} mediating maps", found.len()),
                        witness,
                    ),
                    Err(e) => t.error("copair", &e),
                }
            }
        }
    });
    (
        format!("factors with <= {factor_max} elements, cocones into frames with <= {cocone_max} elements"),
        t,
    )
}

pub(crate) fn coproduct_unit(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(6);
    let frames = frames_up_to(max);
    let two = Arc::new(FiniteFrame::two());
    let t = par_tally(&frames, |l, t| {
        let witness = || frame_to_json(l);
        match coproduct(&two, l) {
            Ok(tf) => {
                t.case(tf.iota2().is_iso(), || "2 ⊗ L: ι₂ is an isomorphism".into(), witness);
                t.case(find_iso(tf.frame(), l).is_some(), || "2 ⊗ L ≅ L".into(), witness);
            }
            Err(e) => t.error("2 ⊗ L", &e),
        }
        match coproduct(l, &two) {
            Ok(tf) => t.case(tf.iota1().is_iso(), || "L ⊗ 2: ι₁ is an isomorphism".into(), witness),
            Err(e) => t.error("L ⊗ 2", &e),
        }
    });
    (format!("frames with <= {max} elements"), t)
}

fn set_json(s: BitSet) -> serde_json::Value {
    json!(s.iter().collect::<Vec<_>>())
}

pub(crate) fn saturation(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(4);
    let jobs = pairs_of(&frames_up_to(max));
    let t = par_tally(&jobs, |(l, m), t| {
        let carrier = match PairCarrier::new(Arc::clone(l), Arc::clone(m)) {
            Ok(c) => c,
            Err(e) => return t.error("pair carrier", &e),
        };
        let witness = |d: BitSet| move || json!({ "factors": frames_json(l, m), "downset": set_json(d) });
        let downsets: Vec<BitSet> = carrier
            .all()
            .subsets()
            .filter(|&d| carrier.is_downset(d))
            .collect();
        for &d in &downsets {
            let s = carrier.saturate(d);
            t.case(
                d.is_subset(s) && carrier.saturate(s) == s && carrier.is_saturated(s),
                || "saturation is inflationary and idempotent".into(),
                witness(d),
            );
            for p in carrier.all().difference(d).iter() {
                let bigger = carrier.downclose(d.with(p));
                t.case(
                    s.is_subset(carrier.saturate(bigger)),
                    || "saturation is monotone".into(),
                    witness(d),
                );
            }
            if !d.is_empty() {
                t.case(
                    carrier.sigma0(d) == Ok(d),
                    || "σ₀ is the identity on nonempty downsets".into(),
                    witness(d),
                );
            }
            t.case(
                carrier.saturate_literal(d) == Ok(s),
                || "fast saturation agrees with the literal prenucleus iteration".into(),
                witness(d),
            );
        }
        match (saturated_downsets_by_filtering(&carrier), coproduct(l, m)) {
            (Ok(slow), Ok(tf)) => t.case(
                slow == tf.elements(),
                || "generated elements agree with filtering all downsets".into(),
                || frames_json(l, m),
            ),
            (Err(e), _) | (_, Err(e)) => t.error("coproduct enumeration", &e),
        }
    });
    (format!("downsets of L × M for frames with <= {max} elements"), t)
}

fn tensor_checks(tf: &TensorFrame, t: &mut Tally) {
    let (l, m, p) = (tf.left(), tf.right(), tf.frame());
    let witness = || frames_json(l, m);
    for y in m.elements() {
        for xs in BitSet::full(l.len()).subsets() {
            let lhs = p.join_all(xs.iter().map(|x| tf.tensor(x, y)));
            let rhs = tf.tensor(l.join_all(xs.iter()), y);
            t.case(lhs == rhs, || "⋁(x_α ⊗ y) = (⋁x_α) ⊗ y".into(), witness);
        }
    }
    for x in l.elements() {
        for ys in BitSet::full(m.len()).subsets() {
            let lhs = p.join_all(ys.iter().map(|y| tf.tensor(x, y)));
            let rhs = tf.tensor(x, m.join_all(ys.iter()));
            t.case(lhs == rhs, || "⋁(x ⊗ y_α) = x ⊗ (⋁y_α)".into(), witness);
        }
    }
    for y in m.elements() {
        t.case(tf.tensor(l.bottom(), y) == p.bottom(), || "⊥ ⊗ y is n̄".into(), witness);
    }
    for i in 0..tf.len() {
        let rebuilt = p.join_all(tf.pairs_below(i).map(|(a, b)| tf.tensor(a, b)));
        t.case(rebuilt == i, || "element is the join of the tensors below it".into(), witness);
    }
    for x in l.elements() {
        t.case(
            tf.tensor(x, m.bottom()) == p.bottom(),
            || "x ⊗ ⊥ is n̄".into(),
            witness,
        );
        for y in m.elements() {
            t.case(
                p.meet(tf.iota1().apply(x), tf.iota2().apply(y)) == tf.tensor(x, y),
                || "ι₁(x) ∧ ι₂(y) = x ⊗ y".into(),
                witness,
            );
        }
    }
}

pub(crate) fn tensor_identities(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(4);
    let jobs = pairs_of(&frames_up_to(max));
    let t = par_tally(&jobs, |(l, m), t| match coproduct(l, m) {
        Ok(tf) => tensor_checks(&tf, t),
        Err(e) => t.error("coproduct", &e),
    });
    (format!("coproducts of frames with <= {max} elements"), t)
}

pub(crate) fn product_distribute(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(4);
    let frames = frames_up_to(max);
    let mut jobs: Vec<(Arc<FiniteFrame>, Vec<Arc<FiniteFrame>>)> = Vec::new();
    for l in &frames {
        jobs.push((Arc::clone(l), Vec::new()));
        for m in &frames {
            jobs.push((Arc::clone(l), vec![Arc::clone(m)]));
        }
        for (m1, m2) in pairs_of(&frames) {
            jobs.push((Arc::clone(l), vec![m1, m2]));
        }
    }
    let t = par_tally(&jobs, |(l, ms), t| match distribute_iso(l, ms) {
        Ok(d) => t.case(
            d.iso.is_iso(),
            || "comparison is bijective".into(),
            || json!({ "left": frame_to_json(l), "family": ms.iter().map(|m| frame_to_json(m)).collect::<Vec<_>>() }),
        ),
        Err(e) => t.error(format!("distribution over {} factors", ms.len()), &e),
    });
    (
        format!("L ⊗ (M₁ × … × M_k) for k <= 2 and frames with <= {max} elements"),
        t,
    )
}

pub(crate) fn loc_pushouts(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(4);
    let frames = frames_up_to(max);
    let mut spans = Vec::new();
    for a in &frames {
        for b in &frames {
            for c in &frames {
                for f in enumerate_homs(b, a) {
                    for g in enumerate_homs(c, a) {
                        spans.push((f.clone(), g));
                    }
                }
            }
        }
    }
    let t = par_tally(&spans, |(f, g), t| {
        let witness = || json!({ "f": hom_to_json(f), "g": hom_to_json(g) });
        let po = match pushout_loc(f, g) {
            Ok(po) => po,
            Err(e) => return t.error("pushout", &e),
        };
        let commutes = match (po.proj_b.then(f), po.proj_c.then(g)) {
            (Ok(x), Ok(y)) => x.as_slice() == y.as_slice(),
            _ => false,
        };
        t.case(commutes, || "square commutes".into(), witness);
        let adjoint_legs = match (right_adjoint(&po.proj_b), right_adjoint(&po.proj_c)) {
            (Ok(x), Ok(y)) => x.right_map() == po.leg_b.right_map() && y.right_map() == po.leg_c.right_map(),
            _ => false,
        };
        t.case(adjoint_legs, || "legs are the adjoints of the projections".into(), witness);
        for q in &frames {
            match pushout_universal_check(&po, f, g, q) {
                Ok(u) => {
                    t.count("cones", u.cones as u64);
                    t.case(u.failures == 0, || "mediating map exists uniquely".into(), witness);
                }
                Err(e) => t.error("universal property", &e),
            }
        }
        if g.is_surjective() {
            t.count("injective legs attached", 1);
            t.case(
                po.proj_b.is_surjective() && po.leg_b.right_is_injective(),
                || "pushout of an injective localic map is injective".into(),
                witness,
            );
        }
        if f.is_surjective() {
            t.case(
                po.proj_c.is_surjective() && po.leg_c.right_is_injective(),
                || "pushout of an injective localic map is injective".into(),
                witness,
            );
        }
    });
    (format!("spans of frames with <= {max} elements"), t)
}

pub(crate) fn frame_density(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(5);
    let jobs = pairs_of(&frames_up_to(max));
    let t = par_tally(&jobs, |(l, m), t| {
        for f in enumerate_homs(l, m) {
            let mut hit = vec![false; m.len()];
            for &y in f.as_slice() {
                hit[y] = true;
            }
            let surjective = hit.iter().all(|&h| h);
            for fam in BitSet::full(m.len()).subsets() {
                let family: Vec<usize> = fam.iter().collect();
                let v = density_check(&f, &family);
                // every element is the join of the family members below it
                let generates = m
                    .elements()
                    .all(|y| m.join_all(family.iter().copied().filter(|&k| m.leq(k, y))) == y);
                let in_image = family.iter().all(|&k| hit[k]);
                t.case(
                    v.surjective == surjective && v.generates == generates && v.in_image == in_image,
                    || "verdict agrees with brute force".into(),
                    || json!({ "hom": hom_to_json(&f), "family": family }),
                );
                t.case(
                    !(generates && in_image) || surjective,
                    || "generating family in the image forces surjectivity".into(),
                    || json!({ "hom": hom_to_json(&f), "family": family }),
                );
            }
        }
    });
    (format!("homs and families on frames with <= {max} elements"), t)
}

/// Largest stage kept while growing chains.
const CHAIN_STAGE_CAP: usize = 16;
const CHAIN_DEPTH: usize = 3;
/// Largest frame used as a chain start or attachment; the frame bound can
/// only lower it.
const CHAIN_BASE_MAX: usize = 3;

pub(crate) fn chain_factoring(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.frames(CHAIN_BASE_MAX).min(CHAIN_BASE_MAX);
    let depth = CHAIN_DEPTH;
    let frames = frames_up_to(max);
    let attachments: Vec<FrameHom> = frames
        .iter()
        .flat_map(|c| frames.iter().flat_map(move |a| enumerate_homs(c, a)))
        .filter(|j| j.is_surjective())
        .collect();
    let mut chains: Vec<InjectiveChain> = frames.iter().map(|f| InjectiveChain::new(Arc::clone(f))).collect();
    let mut frontier = chains.clone();
    let mut skipped = 0u64;
    for _ in 0..depth {
        let mut next = Vec::new();
        for chain in &frontier {
            let last = chain.stages.last().unwrap();
            for j in &attachments {
                for g in enumerate_homs(last, j.target()) {
                    let mut grown = chain.clone();
                    match grown.extend(&g, j) {
                        Ok(()) if grown.stages.last().unwrap().len() <= CHAIN_STAGE_CAP => next.push(grown),
                        Ok(()) => skipped += 1,
                        Err(Error::Hypothesis(_)) => skipped += 1,
                        Err(_) => skipped += 1,
                    }
                }
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    let mut t = par_tally(&chains, |chain, t| {
        let last = chain.stages.last().unwrap();
        for target in &frames {
            for h in enumerate_homs(last, target) {
                for k in 0..chain.stages.len() {
                    match factoring(chain, k, &h) {
                        Ok((factors, contained)) => {
                            if factors {
                                t.count("factoring instances", 1);
                            }
                            t.case(
                                factors == contained,
                                || format!("factoring through stage {k}"),
                                || {
                                    json!({
                                        "stages": chain.stages.iter().map(|s| frame_to_json(s)).collect::<Vec<_>>(),
                                        "map": hom_to_json(&h),
                                    })
                                },
                            );
                        }
                        Err(e) => t.error("factoring", &e),
                    }
                }
            }
        }
    });
    t.count("extensions skipped", skipped);
    (
        format!(
            "chains of up to {depth} pushout steps from frames with <= {max} elements, \
             stages with <= {CHAIN_STAGE_CAP} elements"
        ),
        t,
    )
}
