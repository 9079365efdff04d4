use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pointfree::corpus::{frames_up_to, spaces_up_to};
use pointfree::frame::enumerate_homs;
use pointfree::galois::right_adjoint;
use pointfree::json::{psspace_from_json, psspace_to_json, space_from_json, space_to_json};
use pointfree::lifting::{lifts_against, lifts_against_brute};
use pointfree::nucleus::{nucleus_from_prenucleus, random_prenucleus};
use pointfree::pstop::{is_continuous, PsSpace};
use pointfree::tensor::{coproduct, PairCarrier};
use pointfree::{BitSet, ContinuousMap, FiniteFrame, FinitePoset, FiniteSpace, Labels};

fn small_spaces() -> &'static Vec<Arc<FiniteSpace>> {
    static S: OnceLock<Vec<Arc<FiniteSpace>>> = OnceLock::new();
    S.get_or_init(|| spaces_up_to(3))
}

fn small_frames() -> &'static Vec<Arc<FiniteFrame>> {
    static F: OnceLock<Vec<Arc<FiniteFrame>>> = OnceLock::new();
    F.get_or_init(|| frames_up_to(5))
}

fn poset_strategy() -> impl Strategy<Value = FinitePoset> {
    (0usize..=7).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| bits[i * n + j])
                .collect();
            FinitePoset::from_pairs(Labels::numbered("p", n), &pairs).unwrap()
        })
    })
}

fn space_strategy(max: usize) -> impl Strategy<Value = FiniteSpace> {
    (0usize..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let above = (0..n)
                .map(|x| (0..n).filter(|&y| bits[x * n + y]).collect())
                .collect();
            FiniteSpace::from_preorder(Labels::numbered("x", n), above).unwrap()
        })
    })
}

fn psspace_strategy() -> impl Strategy<Value = PsSpace> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(any::<u8>(), n).prop_map(move |rows| {
            let lim = rows
                .iter()
                .enumerate()
                .map(|(x, &r)| BitSet::from_bits(u128::from(r) & ((1 << n) - 1)).with(x))
                .collect();
            PsSpace::new(Labels::numbered("s", n), lim).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn downsets_match_subset_filtering(p in poset_strategy()) {
        let p = Arc::new(p);
        let family = p.downsets(1 << 10).unwrap();
        let n = p.len();
        let brute = BitSet::full(n)
            .subsets()
            .filter(|s| s.iter().all(|x| (0..n).all(|y| !p.leq(y, x) || s.contains(y))))
            .count();
        prop_assert_eq!(family.len(), brute);
    }

    #[test]
    fn downset_lattices_are_distributive(p in poset_strategy()) {
        let p = Arc::new(p);
        let family = p.downsets(1 << 10).unwrap();
        let labels = Labels::numbered("d", family.len());
        let l = FiniteFrame::from_sets(labels, &family.sets).unwrap();
        for a in l.elements() {
            for b in l.elements() {
                for c in l.elements() {
                    prop_assert_eq!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
                }
            }
        }
    }

    #[test]
    fn opens_form_a_topology(x in space_strategy(6)) {
        let opens = x.opens(1 << 12).unwrap();
        prop_assert!(opens.contains(&BitSet::empty()));
        prop_assert!(opens.contains(&x.all()));
        for &u in &opens {
            for &v in &opens {
                prop_assert!(opens.contains(&u.union(v)));
                prop_assert!(opens.contains(&u.intersection(v)));
            }
        }
        let rebuilt = FiniteSpace::from_opens(x.labels().clone(), &opens).unwrap();
        prop_assert_eq!(&rebuilt, &x);
    }

    #[test]
    fn space_json_round_trips(x in space_strategy(6)) {
        let v = space_to_json(&x).unwrap();
        let back = space_from_json(&v).unwrap();
        prop_assert_eq!(space_to_json(&back).unwrap(), v);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn continuous_maps_match_preimage_test(x in space_strategy(3), y in space_strategy(3)) {
        let (x, y) = (Arc::new(x), Arc::new(y));
        let found: Vec<Vec<usize>> = ContinuousMap::enumerate(&x, &y)
            .iter()
            .map(|f| f.as_slice().to_vec())
            .collect();
        let opens = y.opens(64).unwrap();
        let mut brute = Vec::new();
        let total = y.len().pow(x.len() as u32);
        for code in 0..total {
            let map: Vec<usize> = (0..x.len()).map(|i| code / y.len().pow(i as u32) % y.len()).collect();
            let continuous = opens.iter().all(|&u| {
                let pre: BitSet = (0..x.len()).filter(|&i| u.contains(map[i])).collect();
                x.is_open(pre)
            });
            if continuous {
                brute.push(map);
            }
        }
        let mut found = found;
        found.sort();
        brute.sort();
        prop_assert_eq!(found, brute);
    }

    #[test]
    fn psspace_json_round_trips(xi in psspace_strategy()) {
        let v = psspace_to_json(&xi);
        let back = psspace_from_json(&v).unwrap();
        prop_assert_eq!(psspace_to_json(&back), v);
    }

    #[test]
    fn meet_and_join_bracket_their_arguments(xi in psspace_strategy(), rows in proptest::collection::vec(any::<u8>(), 4)) {
        let n = xi.len();
        let lim = (0..n)
            .map(|x| BitSet::from_bits(u128::from(rows[x]) & ((1 << n) - 1)).with(x))
            .collect();
        let zeta = PsSpace::new(xi.labels().clone(), lim).unwrap();
        let meet = xi.meet(&zeta).unwrap();
        let join = xi.join(&zeta).unwrap();
        prop_assert!(xi.finer_than(&meet) && zeta.finer_than(&meet));
        prop_assert!(join.finer_than(&xi) && join.finer_than(&zeta));
    }

    #[test]
    fn identity_into_top_modification_is_continuous(xi in psspace_strategy()) {
        let tau = PsSpace::from_topology(&xi.top_modification());
        let id: Vec<usize> = (0..xi.len()).collect();
        prop_assert!(is_continuous(&id, &xi, &tau));
    }

    #[test]
    fn pruned_lifting_matches_brute_force(a in 0usize..1000, b in 0usize..1000, c in 0usize..1000, d in 0usize..1000) {
        let spaces = small_spaces();
        let pick = |s: usize, t: usize| {
            let maps = ContinuousMap::enumerate(&spaces[s % spaces.len()], &spaces[t % spaces.len()]);
            maps.get(s.wrapping_mul(31).wrapping_add(t) % maps.len().max(1)).cloned()
        };
        if let (Some(i), Some(f)) = (pick(a, b), pick(c, d)) {
            prop_assert_eq!(lifts_against(&i, &f), lifts_against_brute(&i, &f));
        }
    }

    #[test]
    fn right_adjoints_satisfy_the_galois_law(a in 0usize..100, b in 0usize..100, k in 0usize..100) {
        let frames = small_frames();
        let (l, m) = (&frames[a % frames.len()], &frames[b % frames.len()]);
        let homs = enumerate_homs(l, m);
        prop_assume!(!homs.is_empty());
        let f = &homs[k % homs.len()];
        let g = right_adjoint(f).unwrap();
        for x in l.elements() {
            for y in m.elements() {
                prop_assert_eq!(m.leq(f.apply(x), y), l.leq(x, g.right(y)));
            }
        }
    }

    #[test]
    fn saturation_is_the_least_saturated_superset(a in 0usize..100, b in 0usize..100, seed in any::<u128>()) {
        let frames: Vec<_> = small_frames().iter().filter(|f| f.len() <= 4).cloned().collect();
        let (l, m) = (&frames[a % frames.len()], &frames[b % frames.len()]);
        let carrier = PairCarrier::new(Arc::clone(l), Arc::clone(m)).unwrap();
        let tf = coproduct(l, m).unwrap();
        let d = carrier.downclose(BitSet::from_bits(seed).intersection(carrier.all()));
        let s = carrier.saturate(d);
        prop_assert!(carrier.is_saturated(s) && d.is_subset(s));
        let least = tf
            .elements()
            .iter()
            .filter(|e| d.is_subset(**e))
            .min_by_key(|e| e.len())
            .copied()
            .unwrap();
        prop_assert_eq!(s, least);
    }

    #[test]
    fn generated_nuclei_obey_the_laws(a in 0usize..100, seed in any::<u64>()) {
        let frames = small_frames();
        let l = &frames[a % frames.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(k0) = random_prenucleus(l, &mut rng, 20) else { return Ok(()) };
        let k = nucleus_from_prenucleus(&k0).unwrap();
        for x in l.elements() {
            prop_assert!(l.leq(x, k.apply(x)));
            prop_assert_eq!(k.apply(k.apply(x)), k.apply(x));
            for y in l.elements() {
                prop_assert_eq!(k.apply(l.meet(x, y)), l.meet(k.apply(x), k.apply(y)));
            }
        }
        prop_assert_eq!(k.fixed_points(), k0.fixed_points());
    }
}
