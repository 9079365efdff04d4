use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{map_json, par_tally, SuiteConfig, Tally};
use crate::corpus::spaces_up_to;
use crate::error::{Error, Result};
use crate::lifting::{
    bounded_factorize, cobase_change, coproduct_map, exponential, find_arrow_iso, lifts_against,
    lifts_against_brute, product_map, pullback_power, pushout_product, retract_check, rlp, Verdict,
};
use crate::poset::FinitePoset;
use crate::space::ContinuousMap;
use crate::{FiniteSpace, Labels};

/// Number of seeded random triples drawn on top of the exhaustive corpus.
pub const RANDOM_TRIPLES: usize = 500;

fn all_maps(spaces: &[Arc<FiniteSpace>]) -> Vec<ContinuousMap> {
    spaces
        .iter()
        .flat_map(|a| spaces.iter().flat_map(move |b| ContinuousMap::enumerate(a, b)))
        .collect()
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .collect()
}

fn triple_json(f: &ContinuousMap, g: &ContinuousMap, h: &ContinuousMap) -> serde_json::Value {
    json!([map_json(f), map_json(g), map_json(h)])
}

/// Maps among spaces of at most three points that touch a three-point space.
fn three_point_maps() -> Vec<ContinuousMap> {
    all_maps(&spaces_up_to(3))
        .into_iter()
        .filter(|m| m.source().len() == 3 || m.target().len() == 3)
        .collect()
}

/// Runs `check` on seeded random triples until `RANDOM_TRIPLES` of them
/// finish without hitting the size cap. Draws are sequential and results
/// merged in draw order, so the tally depends only on the seed.
fn random_triples(
    seed: u64,
    pool: &[ContinuousMap],
    check: impl Fn(&ContinuousMap, &ContinuousMap, &ContinuousMap, &mut Tally) -> Result<()> + Sync,
) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = Tally::default();
    let mut done = 0;
    let mut capped = 0u64;
    while done < RANDOM_TRIPLES {
        let batch: Vec<[usize; 3]> = (0..RANDOM_TRIPLES - done)
            .map(|_| std::array::from_fn(|_| rng.gen_range(0..pool.len())))
            .collect();
        let results: Vec<Option<Tally>> = {
            use rayon::prelude::*;
            batch
                .par_iter()
                .map(|&[a, b, c]| {
                    let mut t = Tally::default();
                    match check(&pool[a], &pool[b], &pool[c], &mut t) {
                        Err(Error::Size { .. }) => None,
                        Err(e) => {
                            t.error("random triple", &e);
                            Some(t)
                        }
                        Ok(()) => Some(t),
                    }
                })
                .collect()
        };
        for r in results {
            match r {
                Some(t) => {
                    total.merge(t);
                    done += 1;
                }
                None => capped += 1,
            }
        }
    }
    total.count("random triples", RANDOM_TRIPLES as u64);
    total.count("random draws over the size cap", capped);
    total
}

fn adjunction_instance(f: &ContinuousMap, i: &ContinuousMap, g: &ContinuousMap, t: &mut Tally) -> Result<()> {
    let pp = pushout_product(f, i)?;
    let pb = pullback_power(g, i)?;
    let left = lifts_against(&pp.map, g);
    let right = lifts_against(f, &pb.map);
    if left {
        t.count("lifting instances", 1);
    }
    t.case(
        left == right,
        || format!("(f ×̂ i) ⧄ g is {left} but f ⧄ (g ▷ i) is {right}"),
        || triple_json(f, i, g),
    );
    Ok(())
}

pub(crate) fn adjunction(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(2);
    let maps = all_maps(&spaces_up_to(max));
    let mut t = par_tally(&triples(maps.len()), |&(a, b, c), t| {
        if let Err(e) = adjunction_instance(&maps[a], &maps[b], &maps[c], t) {
            t.error("adjunction instance", &e);
        }
    });
    t.merge(random_triples(cfg.seed, &three_point_maps(), adjunction_instance));
    (
        format!(
            "all triples of maps among spaces with <= {max} points, plus {RANDOM_TRIPLES} seeded \
             triples touching three-point spaces"
        ),
        t,
    )
}

fn symmetric_instance(f: &ContinuousMap, g: &ContinuousMap, t: &mut Tally) -> Result<()> {
    let fg = pushout_product(f, g)?;
    let gf = pushout_product(g, f)?;
    t.case(
        find_arrow_iso(&fg.map, &gf.map).is_some(),
        || "f ×̂ g ≅ g ×̂ f".into(),
        || json!([map_json(f), map_json(g)]),
    );
    Ok(())
}

fn associative_instance(f: &ContinuousMap, g: &ContinuousMap, h: &ContinuousMap, t: &mut Tally) -> Result<()> {
    let left = pushout_product(&pushout_product(f, g)?.map, h)?;
    let right = pushout_product(f, &pushout_product(g, h)?.map)?;
    t.case(
        find_arrow_iso(&left.map, &right.map).is_some(),
        || "(f ×̂ g) ×̂ h ≅ f ×̂ (g ×̂ h)".into(),
        || triple_json(f, g, h),
    );
    Ok(())
}

pub(crate) fn arrow_category(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(2);
    let maps = all_maps(&spaces_up_to(max));
    let n = maps.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let mut t = par_tally(&pairs, |&(a, b), t| {
        if let Err(e) = symmetric_instance(&maps[a], &maps[b], t) {
            t.error("symmetry", &e);
        }
    });
    t.merge(par_tally(&triples(n), |&(a, b, c), t| {
        if let Err(e) = associative_instance(&maps[a], &maps[b], &maps[c], t) {
            t.error("associativity", &e);
        }
    }));

    // invariance: arrow-isomorphic inputs give arrow-isomorphic outputs
    let iso_pairs: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(a, b)| find_arrow_iso(&maps[a], &maps[b]).is_some())
        .collect();
    let quads: Vec<((usize, usize), (usize, usize))> = iso_pairs
        .iter()
        .flat_map(|&p| iso_pairs.iter().map(move |&q| (p, q)))
        .collect();
    t.merge(par_tally(&quads, |&((f, f2), (g, g2)), t| {
        match (pushout_product(&maps[f], &maps[g]), pushout_product(&maps[f2], &maps[g2])) {
            (Ok(x), Ok(y)) => t.case(
                find_arrow_iso(&x.map, &y.map).is_some(),
                || "pushout product respects arrow isomorphisms".into(),
                || json!([map_json(&maps[f]), map_json(&maps[f2]), map_json(&maps[g]), map_json(&maps[g2])]),
            ),
            (Err(e), _) | (_, Err(e)) => t.error("pushout product", &e),
        }
    }));

    t.merge(random_triples(cfg.seed ^ 0x5eed, &three_point_maps(), |f, g, h, t| {
        symmetric_instance(f, g, t)?;
        associative_instance(f, g, h, t)
    }));
    (
        format!(
            "all pairs and triples of maps among spaces with <= {max} points, plus \
             {RANDOM_TRIPLES} seeded triples touching three-point spaces"
        ),
        t,
    )
}

pub(crate) fn identity1(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(2);
    let spaces = spaces_up_to(max);
    let maps = all_maps(&spaces);
    let empty = Arc::new(FiniteSpace::empty());
    let jobs: Vec<(usize, usize)> = (0..spaces.len())
        .flat_map(|a| (0..maps.len()).map(move |f| (a, f)))
        .collect();
    let t = par_tally(&jobs, |&(a, f), t| {
        let a = &spaces[a];
        let f = &maps[f];
        let result = (|| {
            let bang = ContinuousMap::new(Arc::clone(&empty), Arc::clone(a), Vec::new())?;
            let pp = pushout_product(&bang, f)?;
            let ax = Arc::new(a.product(f.source())?);
            let ay = Arc::new(a.product(f.target())?);
            let id_f = product_map(&ContinuousMap::identity(Arc::clone(a)), f, &ax, &ay)?;
            Ok::<_, Error>(find_arrow_iso(&pp.map, &id_f).is_some())
        })();
        match result {
            Ok(ok) => t.case(ok, || "!_A ×̂ f ≅ id_A × f".into(), || map_json(f)),
            Err(e) => t.error("identity instance", &e),
        }
    });
    (format!("spaces and maps with <= {max} points"), t)
}

pub(crate) fn exponential_law(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(2);
    let spaces = spaces_up_to(max);
    let t = par_tally(&triples(spaces.len()), |&(z, a, x), t| {
        let (z, a, x) = (&spaces[z], &spaces[a], &spaces[x]);
        let result = (|| {
            let exp = exponential(x, a)?;
            let za = Arc::new(z.product(a)?);
            let ea = Arc::new(exp.space.product(a)?);
            let eval = exp.eval(&ea)?;
            let id_a = ContinuousMap::identity(Arc::clone(a));
            let uncurried = ContinuousMap::enumerate(&za, x);
            let curried = ContinuousMap::enumerate(z, &exp.space);
            let mut images = Vec::with_capacity(uncurried.len());
            for phi in &uncurried {
                let c = exp.curry(z, phi.as_slice())?;
                let back = product_map(&c, &id_a, &za, &ea)?.then(&eval)?;
                t.case(
                    back == *phi,
                    || "uncurrying the curried map returns it".into(),
                    || map_json(phi),
                );
                images.push(c.as_slice().to_vec());
            }
            images.sort();
            images.dedup();
            let mut targets: Vec<Vec<usize>> = curried.iter().map(|m| m.as_slice().to_vec()).collect();
            targets.sort();
            t.case(
                images == targets,
                || format!("{} maps Z × A → X against {} maps Z → X^A", uncurried.len(), curried.len()),
                || json!({ "z": z.len(), "a": a.len(), "x": x.len() }),
            );
            Ok::<_, Error>(())
        })();
        if let Err(e) = result {
            t.error("exponential instance", &e);
        }
    });
    (format!("Z, A, X with <= {max} points"), t)
}

pub(crate) fn rlp_cof(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(2);
    let spaces = spaces_up_to(max);
    let maps = all_maps(&spaces);
    let n = maps.len();
    // each generator with its cobase changes along every map out of its
    // source and its doubled coproduct
    let closures: Vec<Result<Vec<ContinuousMap>>> = maps
        .iter()
        .map(|s| {
            let mut out = vec![s.clone()];
            for z in &spaces {
                for u in ContinuousMap::enumerate(s.source(), z) {
                    out.push(cobase_change(s, &u)?);
                }
            }
            out.push(coproduct_map(&[s, s])?);
            Ok(out)
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let t = par_tally(&pairs, |&(si, pi), t| {
        let (s, p) = (&maps[si], &maps[pi]);
        let closure = match &closures[si] {
            Ok(c) => c,
            Err(e) => return t.error("closure", e),
        };
        let fast = lifts_against(s, p);
        let brute = lifts_against_brute(s, p);
        t.case(
            fast == brute,
            || "pruned lifting search agrees with brute force".into(),
            || json!([map_json(s), map_json(p)]),
        );
        let closed = rlp(p, closure).is_none();
        t.case(
            fast == closed,
            || "rlp against a map equals rlp against its cobase changes and sums".into(),
            || json!([map_json(s), map_json(p)]),
        );
        if closed {
            t.count("maps with the right lifting property", 1);
        }
    });
    (format!("maps among spaces with <= {max} points"), t)
}

pub(crate) fn retracts(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(2);
    let maps = all_maps(&spaces_up_to(max));
    let n = maps.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let t = par_tally(&pairs, |&(fi, gi), t| {
        let (f, g) = (&maps[fi], &maps[gi]);
        let witness = || json!([map_json(f), map_json(g)]);
        let Some(r) = retract_check(f, g) else {
            t.case(fi != gi, || "every map is a retract of itself".into(), witness);
            return;
        };
        t.count("retract pairs", 1);
        let (a, b) = (f.source().len(), f.target().len());
        let identities = (0..a).all(|x| r.retraction_top[r.section_top[x]] == x)
            && (0..b).all(|y| r.retraction_bottom[r.section_bottom[y]] == y);
        let squares = (0..a).all(|x| g.apply(r.section_top[x]) == r.section_bottom[f.apply(x)])
            && (0..g.source().len()).all(|c| f.apply(r.retraction_top[c]) == r.retraction_bottom[g.apply(c)]);
        let continuous = ContinuousMap::new(Arc::clone(f.source()), Arc::clone(g.source()), r.section_top.clone()).is_ok()
            && ContinuousMap::new(Arc::clone(f.target()), Arc::clone(g.target()), r.section_bottom.clone()).is_ok()
            && ContinuousMap::new(Arc::clone(g.source()), Arc::clone(f.source()), r.retraction_top.clone()).is_ok()
            && ContinuousMap::new(Arc::clone(g.target()), Arc::clone(f.target()), r.retraction_bottom.clone()).is_ok();
        t.case(identities && squares && continuous, || "retraction data".into(), witness);
        for p in &maps {
            if lifts_against(g, p) {
                t.case(
                    lifts_against(f, p),
                    || "retract inherits the left lifting property".into(),
                    || json!([map_json(f), map_json(g), map_json(p)]),
                );
            }
        }
    });
    (format!("pairs of maps among spaces with <= {max} points"), t)
}

/// One factorization problem with its known verdict.
#[derive(Clone, Debug)]
pub struct RegressionCase {
    pub name: &'static str,
    pub map: ContinuousMap,
    pub generators: Vec<ContinuousMap>,
    pub steps: usize,
    pub expected: Verdict,
}

fn arc(s: FiniteSpace) -> Arc<FiniteSpace> {
    Arc::new(s)
}

fn chain(n: usize) -> Arc<FiniteSpace> {
    arc(FiniteSpace::alexandrov(&FinitePoset::chain(n)))
}

fn discrete(n: usize) -> Arc<FiniteSpace> {
    arc(FiniteSpace::discrete(Labels::numbered("d", n)))
}

fn m(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>, values: &[usize]) -> ContinuousMap {
    ContinuousMap::new(Arc::clone(a), Arc::clone(b), values.to_vec()).expect("regression map is continuous")
}

/// Twenty factorization problems: maps, generating sets and step bounds with
/// the verdict each must produce.
pub fn regression_set() -> Vec<RegressionCase> {
    let empty = arc(FiniteSpace::empty());
    let point = arc(FiniteSpace::point());
    let d2 = discrete(2);
    let d3 = discrete(3);
    let c2 = chain(2);
    let c3 = chain(3);
    let c4 = chain(4);
    let ind2 = arc(FiniteSpace::indiscrete(Labels::numbered("i", 2)));

    // ∅ → ∗: its right class is the surjections
    let cell = m(&empty, &point, &[]);
    // ∗ ⊔ ∗ → ∗: its right class is the injections
    let fold = m(&d2, &point, &[0, 0]);
    // ∗ → 2 at the top: right maps lift every point below along the map
    let below = m(&point, &c2, &[1]);
    // 2 points → 2-chain: right maps reflect the order
    let order = m(&d2, &c2, &[0, 1]);

    let case = |name, map, generators: &[&ContinuousMap], steps, expected| RegressionCase {
        name,
        map,
        generators: generators.iter().map(|g| (*g).clone()).collect(),
        steps,
        expected,
    };
    use Verdict::{Complete, Partial};
    vec![
        case("identity already has the property", ContinuousMap::identity(Arc::clone(&c2)), &[&cell], 2, Complete),
        case("surjection already has the property", m(&d2, &point, &[0, 0]), &[&cell], 2, Complete),
        case("empty into two points", m(&empty, &d2, &[]), &[&cell], 1, Complete),
        case("empty into a point without steps", m(&empty, &point, &[]), &[&cell], 0, Partial),
        case("empty into a three-chain", m(&empty, &c3, &[]), &[&cell], 1, Complete),
        case("empty into a three-chain without steps", m(&empty, &c3, &[]), &[&cell], 0, Partial),
        case("fold of two points", m(&d2, &point, &[0, 0]), &[&fold], 3, Complete),
        case("fold of three points", m(&d3, &point, &[0, 0, 0]), &[&fold], 3, Complete),
        case("fold of a two-chain", m(&c2, &point, &[0, 0]), &[&fold], 3, Complete),
        case("fold of an indiscrete pair", m(&ind2, &point, &[0, 0]), &[&fold], 3, Complete),
        case("fold without steps", m(&d2, &point, &[0, 0]), &[&fold], 0, Partial),
        case("fold into a three-chain", m(&d3, &c3, &[0, 0, 2]), &[&fold], 2, Complete),
        case("cells below the top of a three-chain, one step", m(&point, &c3, &[2]), &[&below], 1, Partial),
        case("cells below the top of a three-chain, two steps", m(&point, &c3, &[2]), &[&below], 2, Complete),
        case("cells below the top of a four-chain, two steps", m(&point, &c4, &[3]), &[&below], 2, Partial),
        case("cells below the top of a four-chain, three steps", m(&point, &c4, &[3]), &[&below], 3, Complete),
        case("points and folds into two points", m(&empty, &d2, &[]), &[&cell, &fold], 2, Complete),
        case("points and folds into a point", m(&d2, &point, &[0, 1].map(|_| 0)), &[&cell, &fold], 2, Complete),
        case("order reflection for a discrete pair", m(&d2, &point, &[0, 0]), &[&order], 1, Complete),
        case("order reflection without steps", m(&d2, &point, &[0, 0]), &[&order], 0, Partial),
    ]
}

pub(crate) fn small_object(cfg: &SuiteConfig) -> (String, Tally) {
    let cases = regression_set();
    let t = par_tally(&cases, |case, t| {
        let steps = cfg.steps.unwrap_or(case.steps);
        let trace = match bounded_factorize(&case.map, &case.generators, steps) {
            Ok(trace) => trace,
            Err(e) => return t.error(case.name, &e),
        };
        let witness = || json!({ "case": case.name, "steps": steps, "stages": trace.stages.len() });
        t.case(trace.replay().is_ok(), || format!("{}: trace replays", case.name), witness);
        // independent re-verification of the right factor
        let right_ok = case.generators.iter().all(|s| lifts_against_brute(s, &trace.right));
        match trace.verdict {
            Verdict::Complete => {
                t.count("complete", 1);
                t.case(right_ok, || format!("{}: complete factor fails rlp", case.name), witness);
            }
            Verdict::Partial => {
                t.count("partial", 1);
                t.case(
                    !right_ok && !trace.remaining.is_empty(),
                    || format!("{}: partial factor already has rlp", case.name),
                    witness,
                );
            }
        }
        if cfg.steps.is_none() {
            t.case(
                trace.verdict == case.expected,
                || format!("{}: verdict {:?}, expected {:?}", case.name, trace.verdict, case.expected),
                witness,
            );
        }
    });
    (format!("{} regression factorizations", cases.len()), t)
}
