use std::sync::Arc;

use serde_json::json;

use super::{map_json, par_tally, space_json, SuiteConfig, Tally};
use crate::corpus::{frames_up_to, spaces_up_to};
use crate::frame::{enumerate_homs, find_iso, FiniteFrame, FrameHom};
use crate::json::{frame_to_json, hom_to_json};
use crate::poset::FinitePoset;
use crate::space::ContinuousMap;
use crate::spatial::{
    adjunction_check, find_homeomorphism, is_spatial, omega, omega_map, pt, spatial_product, transpose_hom,
    unit_map, OpenFrame, PointSpace,
};
use crate::{BitSet, FiniteSpace};

fn sober_spaces(max: usize) -> Vec<Arc<FiniteSpace>> {
    spaces_up_to(max).into_iter().filter(|x| x.is_t0()).collect()
}

/// `pt(k): pt L → pt L'` for `k: L' → L`, as point indices.
fn pt_map(k: &FrameHom, from: &PointSpace, to: &PointSpace) -> Option<Vec<usize>> {
    from.points
        .iter()
        .map(|p| {
            let composite: Vec<usize> = k.as_slice().iter().map(|&a| p.apply(a)).collect();
            to.point_of(&composite)
        })
        .collect()
}

pub(crate) fn omega_pt(cfg: &SuiteConfig) -> (String, Tally) {
    let max_points = cfg.points(4);
    let max_frame = cfg.frames(6);
    let adj_points = max_points.min(3);
    let adj_frames = max_frame.min(5);

    let spaces = sober_spaces(max_points);
    let mut t = par_tally(&spaces, |x, t| match unit_map(x) {
        Ok((_, px, unit)) => {
            t.case(
                unit.is_homeomorphism() && find_homeomorphism(&px.space, x).is_some(),
                || "pt(ΩX) ≅ X".into(),
                || space_json(x),
            );
        }
        Err(e) => t.error("unit", &e),
    });

    let frames = frames_up_to(max_frame);
    t.merge(par_tally(&frames, |l, t| match is_spatial(l) {
        Ok(w) => t.case(
            w.is_spatial() && find_iso(&w.opens.frame, l).is_some(),
            || "Ω(pt L) ≅ L".into(),
            || frame_to_json(l),
        ),
        Err(e) => t.error("spatiality", &e),
    }));

    let small_spaces = sober_spaces(adj_points);
    let small_frames = frames_up_to(adj_frames);
    let opens: Vec<OpenFrame> = small_spaces.iter().map(|x| omega(x).expect("finite space")).collect();
    let points: Vec<PointSpace> = small_frames.iter().map(|l| pt(l).expect("finite frame")).collect();
    let jobs: Vec<(usize, usize)> = (0..small_spaces.len())
        .flat_map(|i| (0..small_frames.len()).map(move |j| (i, j)))
        .collect();
    t.merge(par_tally(&jobs, |&(i, j), t| {
        let (x, l) = (&small_spaces[i], &small_frames[j]);
        let data = match adjunction_check(x, l) {
            Ok(d) => d,
            Err(e) => return t.error("hom-set bijection", &e),
        };
        t.case(true, String::new, || json!(null));
        t.count("transposed pairs", data.homs.len() as u64);
        let (ox, pl) = (&opens[i], &points[j]);
        // naturality in the frame: precompose with k: L' → L
        for (j2, l2) in small_frames.iter().enumerate() {
            let pl2 = &points[j2];
            for k in enumerate_homs(l2, l) {
                let Some(ptk) = pt_map(&k, pl, pl2) else {
                    t.fail("points pull back".into(), hom_to_json(&k));
                    continue;
                };
                for h in &data.homs {
                    let lhs = k.then(h).and_then(|hk| transpose_hom(&hk, ox, pl2));
                    let rhs = transpose_hom(h, ox, pl).map(|m| m.iter().map(|&p| ptk[p]).collect::<Vec<_>>());
                    t.case(
                        lhs.is_ok() && lhs == rhs,
                        || "transpose is natural in the frame".into(),
                        || json!({ "space": space_json(x), "k": hom_to_json(&k), "h": hom_to_json(h) }),
                    );
                }
            }
        }
        // naturality in the space: precompose with φ: X' → X
        for (i2, x2) in small_spaces.iter().enumerate() {
            let ox2 = &opens[i2];
            for phi in ContinuousMap::enumerate(x2, x) {
                let Ok(pull) = omega_map(&phi, ox2, ox) else {
                    t.fail("preimage map".into(), map_json(&phi));
                    continue;
                };
                for h in &data.homs {
                    let lhs = h.then(&pull).and_then(|hp| transpose_hom(&hp, ox2, pl));
                    let rhs = transpose_hom(h, ox, pl).map(|m| phi.as_slice().iter().map(|&p| m[p]).collect::<Vec<_>>());
                    t.case(
                        lhs.is_ok() && lhs == rhs,
                        || "transpose is natural in the space".into(),
                        || json!({ "map": map_json(&phi), "h": hom_to_json(h) }),
                    );
                }
            }
        }
    }));
    (
        format!(
            "sober spaces with <= {max_points} points, frames with <= {max_frame} elements, \
             adjunction on <= {adj_points} points and <= {adj_frames} elements"
        ),
        t,
    )
}

/// Antichains of a poset, counted by brute force over all subsets.
fn antichain_count(p: &FinitePoset) -> usize {
    BitSet::full(p.len())
        .subsets()
        .filter(|s| s.iter().all(|a| s.iter().all(|b| a == b || !p.leq(a, b))))
        .count()
}

pub const SIERPINSKI_TENSOR_SQUARE: usize = 6;

pub(crate) fn spatial_products(cfg: &SuiteConfig) -> (String, Tally) {
    let max = cfg.points(3);
    let spaces = sober_spaces(max);
    let jobs: Vec<(usize, usize)> = (0..spaces.len())
        .flat_map(|i| (0..spaces.len()).map(move |j| (i, j)))
        .collect();
    let mut t = par_tally(&jobs, |&(i, j), t| {
        let (x, y) = (&spaces[i], &spaces[j]);
        match spatial_product(x, y) {
            Ok(sp) => t.case(
                sp.is_iso() && sp.tensor_len == sp.product_opens,
                || "ΩX ⊗ ΩY → Ω(X × Y) is an isomorphism".into(),
                || json!({ "x": space_json(x), "y": space_json(y) }),
            ),
            Err(e) => t.error("spatial product", &e),
        }
    });
    let s = Arc::new(FiniteSpace::sierpinski());
    let grid = FinitePoset::chain(2).product(&FinitePoset::chain(2)).expect("small product");
    let oracle = antichain_count(&grid);
    match (spatial_product(&s, &s), omega(&s)) {
        (Ok(sp), Ok(os)) => {
            let square = crate::tensor::coproduct(&os.frame, &os.frame).map(|tf| tf.len());
            t.case(
                sp.tensor_len == oracle && oracle == SIERPINSKI_TENSOR_SQUARE && square == Ok(oracle),
                || format!("|Ω(S) ⊗ Ω(S)| = {} but the grid has {oracle} antichains", sp.tensor_len),
                || json!({ "tensor": sp.tensor_len, "antichains": oracle }),
            );
            t.case(
                find_iso(&os.frame, &Arc::new(FiniteFrame::chain(3))).is_some(),
                || "Ω(S) is the three-element chain".into(),
                || json!(null),
            );
        }
        (Err(e), _) | (_, Err(e)) => t.error("Sierpiński square", &e),
    }
    (format!("T0 spaces with <= {max} points"), t)
}
