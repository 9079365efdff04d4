use std::sync::Arc;

use pointfree::frame::enumerate_homs;
use pointfree::lifting::{find_arrow_iso, lifts_against, pullback_power, rlp};
use pointfree::nucleus::{nucleus_from_prenucleus, Prenucleus};
use pointfree::pstop::{final_structure, PsSpace};
use pointfree::tensor::{coproduct, map_tensor};
use pointfree::{ContinuousMap, FiniteFrame, FinitePoset, FiniteSpace, FrameHom, Labels};

fn chain3() -> Arc<FiniteFrame> {
    Arc::new(FiniteFrame::chain_of(&["0", "m", "1"]).unwrap())
}

#[test]
fn map_tensor_of_identity_is_identity() {
    let l = chain3();
    let t = coproduct(&l, &l).unwrap();
    let h = map_tensor(&t, &t, &FrameHom::identity(Arc::clone(&l))).unwrap();
    assert!(h.as_slice().iter().enumerate().all(|(i, &j)| i == j));
}

#[test]
fn map_tensor_matches_the_mediating_map() {
    // L = 2, f: chain → 2 with m ↦ 0; the mediating map of the cocone
    // (ι₁, ι₂ ∘ f) is found by searching every hom L ⊗ M → L ⊗ N.
    let two = Arc::new(FiniteFrame::two());
    let m = chain3();
    let f = FrameHom::new(Arc::clone(&m), Arc::clone(&two), vec![0, 0, 1]).unwrap();
    let lm = coproduct(&two, &m).unwrap();
    let ln = coproduct(&two, &two).unwrap();
    let h = map_tensor(&lm, &ln, &f).unwrap();
    let leg2 = f.then(ln.iota2()).unwrap();
    let mediating: Vec<FrameHom> = enumerate_homs(lm.frame(), ln.frame())
        .into_iter()
        .filter(|k| {
            lm.iota1().then(k).unwrap().as_slice() == ln.iota1().as_slice()
                && lm.iota2().then(k).unwrap().as_slice() == leg2.as_slice()
        })
        .collect();
    assert_eq!(mediating.len(), 1);
    assert_eq!(mediating[0].as_slice(), h.as_slice());
}

#[test]
fn constant_top_generates_constant_top() {
    let l = chain3();
    let k0 = Prenucleus::new(Arc::clone(&l), vec![2, 2, 2]).unwrap();
    let k = nucleus_from_prenucleus(&k0).unwrap();
    assert_eq!(k.as_slice(), &[2, 2, 2]);
    assert_eq!(k.fixed_points(), vec![2]);
}

#[test]
fn every_map_has_rlp_against_no_generators() {
    let s = Arc::new(FiniteSpace::sierpinski());
    let f = ContinuousMap::identity(s);
    assert!(rlp(&f, &[]).is_none());
}

#[test]
fn maps_to_a_point_lift_against_the_point_iff_nonempty() {
    let empty = Arc::new(FiniteSpace::empty());
    let point = Arc::new(FiniteSpace::point());
    let cell = ContinuousMap::new(Arc::clone(&empty), Arc::clone(&point), vec![]).unwrap();
    for x in [Arc::clone(&empty), Arc::clone(&point), Arc::new(FiniteSpace::sierpinski())] {
        let f = ContinuousMap::new(Arc::clone(&x), Arc::clone(&point), vec![0; x.len()]).unwrap();
        assert_eq!(lifts_against(&cell, &f), !x.is_empty());
    }
}

#[test]
fn pullback_power_along_an_identity_is_an_iso() {
    let s = Arc::new(FiniteSpace::sierpinski());
    let d2 = Arc::new(FiniteSpace::discrete(Labels::numbered("d", 2)));
    for f in ContinuousMap::enumerate(&s, &d2) {
        let pb = pullback_power(&f, &ContinuousMap::identity(Arc::clone(&s))).unwrap();
        assert!(pb.map.is_homeomorphism());
    }
}

#[test]
fn pullback_power_along_the_point_cell_is_the_map() {
    let empty = Arc::new(FiniteSpace::empty());
    let point = Arc::new(FiniteSpace::point());
    let cell = ContinuousMap::new(empty, point, vec![]).unwrap();
    let c3 = Arc::new(FiniteSpace::alexandrov(&FinitePoset::chain(3)));
    let s = Arc::new(FiniteSpace::sierpinski());
    for f in ContinuousMap::enumerate(&c3, &s) {
        let pb = pullback_power(&f, &cell).unwrap();
        assert!(find_arrow_iso(&pb.map, &f).is_some());
    }
}

#[test]
fn final_structure_under_the_fold_is_a_point() {
    let pair = PsSpace::discrete(Labels::numbered("p", 2));
    let fold = [0usize, 0];
    let out = final_structure(Labels::numbered("q", 1), &[(&pair, &fold[..])]).unwrap();
    assert_eq!(out.lim_table(), PsSpace::discrete(Labels::numbered("q", 1)).lim_table());
}
