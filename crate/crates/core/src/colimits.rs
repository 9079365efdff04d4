//! Products of frames, the distributive comparison `L ⊗ ∏M_k → ∏(L ⊗ M_k)`,
//! pushouts of locales, the density criterion for surjectivity, and
//! factoring through stages of a finite chain of injective localic maps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{enumerate_homs, FiniteFrame, FrameHom, DEFAULT_MAX_FRAME};
use crate::galois::{right_adjoint, GaloisConnection};
use crate::labels::Labels;
use crate::tensor::{coproduct, map_tensor, TensorFrame};

/// A product of frames with its projections.
#[derive(Clone, Debug)]
pub struct FrameProduct {
    pub frame: Arc<FiniteFrame>,
    pub factors: Vec<Arc<FiniteFrame>>,
    pub projections: Vec<FrameHom>,
}

impl FrameProduct {
    /// Index of the tuple `coords` (mixed radix, first factor most
    /// significant).
    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, f)| acc * f.len() + c)
    }

    pub fn coords(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            out[k] = i % f.len();
            i /= f.len();
        }
        out
    }
}

/// Componentwise order on the cartesian product; the empty family gives
/// the one-element frame.
pub fn product_frames(family: &[Arc<FiniteFrame>]) -> Result<FrameProduct> {
    product_frames_capped(family, DEFAULT_MAX_FRAME)
}

pub fn product_frames_capped(family: &[Arc<FiniteFrame>], cap: usize) -> Result<FrameProduct> {
    let size = family
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.len()).filter(|&s| s <= cap))
        .ok_or_else(|| Error::size("product frame element count", cap))?;
    let coords = |mut i: usize| {
        let mut out = vec![0; family.len()];
        for (k, f) in family.iter().enumerate().rev() {
            out[k] = i % f.len();
            i /= f.len();
        }
        out
    };
    let tuples: Vec<Vec<usize>> = (0..size).map(coords).collect();
    let names = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(family).map(|(&c, f)| f.label(c)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let frame = Arc::new(FiniteFrame::from_order_capped(
        Labels::new(names)?,
        |a, b| {
            tuples[a]
                .iter()
                .zip(&tuples[b])
                .zip(family)
                .all(|((&x, &y), f)| f.leq(x, y))
        },
        cap,
    )?);
    let projections = family
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let map = tuples.iter().map(|t| t[k]).collect();
            FrameHom::new(Arc::clone(&frame), Arc::clone(f), map)
        })
        .collect::<Result<_>>()?;
    Ok(FrameProduct {
        frame,
        factors: family.to_vec(),
        projections,
    })
}

/// Everything produced while certifying `L ⊗ (M₁ × M₂) ≅ (L ⊗ M₁) × (L ⊗ M₂)`.
#[derive(Clone, Debug)]
pub struct Distribution {
    pub source: TensorFrame,
    pub parts: Vec<TensorFrame>,
    pub target: FrameProduct,
    pub iso: FrameHom,
}

/// Builds `φ = ((id ⊗ p_k)(S))_k` and certifies it is an isomorphism.
pub fn distribute_iso(l: &Arc<FiniteFrame>, ms: &[Arc<FiniteFrame>]) -> Result<Distribution> {
    let prod = product_frames(ms)?;
    let source = coproduct(l, &prod.frame)?;
    let parts: Vec<TensorFrame> = ms.iter().map(|m| coproduct(l, m)).collect::<Result<_>>()?;
    let legs: Vec<FrameHom> = parts
        .iter()
        .zip(&prod.projections)
        .map(|(t, p)| map_tensor(&source, t, p))
        .collect::<Result<_>>()?;
    let part_frames: Vec<Arc<FiniteFrame>> = parts.iter().map(|t| Arc::clone(t.frame())).collect();
    let target = product_frames(&part_frames)?;
    let map = (0..source.len())
        .map(|s| {
            let coords: Vec<usize> = legs.iter().map(|h| h.apply(s)).collect();
            target.index_of(&coords)
        })
        .collect();
    let iso = FrameHom::new(Arc::clone(source.frame()), Arc::clone(&target.frame), map)
        .map_err(|e| Error::NotIso(e.to_string()))?;
    if !iso.is_iso() {
        return Err(Error::NotIso(format!(
            "comparison {} → {} is not bijective",
            source.len(),
            target.frame.len()
        )));
    }
    Ok(Distribution {
        source,
        parts,
        target,
        iso,
    })
}

/// Pushout of a span `B ← A → C` of locales, presented by the frame
/// homomorphisms `f: B → A` and `g: C → A`.
#[derive(Clone, Debug)]
pub struct LocalePushout {
    pub apex: Arc<FiniteFrame>,
    /// Pairs `(b, c)` with `f(b) = g(c)`, in apex element order.
    pub pairs: Vec<(usize, usize)>,
    /// The frame projections `P → B` and `P → C`.
    pub proj_b: FrameHom,
    pub proj_c: FrameHom,
    /// The localic legs `B → P` and `C → P` (right adjoints of the
    /// projections).
    pub leg_b: GaloisConnection,
    pub leg_c: GaloisConnection,
}

/// `P = {(b, c) : f(b) = g(c)}` with the componentwise order. The legs are
/// computed by `i_B(x) = ⋁{(b, c) ∈ P : b ≤ x}` and compared with the right
/// adjoints of the projections; the square is checked in both directions.
pub fn pushout_loc(f: &FrameHom, g: &FrameHom) -> Result<LocalePushout> {
    if **f.target() != **g.target() {
        return Err(Error::CarrierMismatch("span legs have different codomains".into()));
    }
    let (b, c, a) = (f.source(), g.source(), f.target());
    let pairs: Vec<(usize, usize)> = b
        .elements()
        .flat_map(|x| c.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| f.apply(x) == g.apply(y))
        .collect();
    let lookup = |p: (usize, usize)| pairs.iter().position(|&q| q == p);
    for (i, &(x1, y1)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[i..] {
            let m = (b.meet(x1, x2), c.meet(y1, y2));
            let j = (b.join(x1, x2), c.join(y1, y2));
            if lookup(m).is_none() || lookup(j).is_none() {
                return Err(Error::NotFrame(
                    "pair set is not closed under componentwise meet and join".into(),
                ));
            }
        }
    }
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", b.label(x), c.label(y)))
        .collect();
    let apex = Arc::new(
        FiniteFrame::from_order(Labels::new(names)?, |i, j| {
            b.leq(pairs[i].0, pairs[j].0) && c.leq(pairs[i].1, pairs[j].1)
        })
        .map_err(|e| Error::NotFrame(e.to_string()))?,
    );
    let proj_b = FrameHom::new(
        Arc::clone(&apex),
        Arc::clone(b),
        pairs.iter().map(|p| p.0).collect(),
    )?;
    let proj_c = FrameHom::new(
        Arc::clone(&apex),
        Arc::clone(c),
        pairs.iter().map(|p| p.1).collect(),
    )?;
    let leg_b = right_adjoint(&proj_b)?;
    let leg_c = right_adjoint(&proj_c)?;

    let by_formula_b: Vec<usize> = b
        .elements()
        .map(|x| apex.join_all((0..pairs.len()).filter(|&i| b.leq(pairs[i].0, x))))
        .collect();
    let by_formula_c: Vec<usize> = c
        .elements()
        .map(|y| apex.join_all((0..pairs.len()).filter(|&i| c.leq(pairs[i].1, y))))
        .collect();
    if by_formula_b != leg_b.right_map() || by_formula_c != leg_c.right_map() {
        return Err(Error::NonCommuting(
            "leg join formula disagrees with the adjoint of the projection".into(),
        ));
    }

    // Frame side: f ∘ p_B = g ∘ p_C.
    if proj_b.then(f)?.as_slice() != proj_c.then(g)?.as_slice() {
        return Err(Error::NonCommuting("f ∘ p_B ≠ g ∘ p_C".into()));
    }
    // Localic side: i_B ∘ f^R = i_C ∘ g^R on A.
    let fr = right_adjoint(f)?;
    let gr = right_adjoint(g)?;
    for z in a.elements() {
        if leg_b.right(fr.right(z)) != leg_c.right(gr.right(z)) {
            return Err(Error::NonCommuting(format!(
                "localic legs disagree at {}",
                a.label(z)
            )));
        }
    }
    Ok(LocalePushout {
        apex,
        pairs,
        proj_b,
        proj_c,
        leg_b,
        leg_c,
    })
}

/// Counts of the exhaustive universal-property check against one test frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UniversalTally {
    pub cones: usize,
    pub failures: usize,
}

/// For every pair `u: Q → B`, `v: Q → C` with `f ∘ u = g ∘ v`, counts the
/// homomorphisms `h: Q → P` with `p_B ∘ h = u` and `p_C ∘ h = v`; anything
/// other than exactly one is a failure.
pub fn pushout_universal_check(
    po: &LocalePushout,
    f: &FrameHom,
    g: &FrameHom,
    q: &Arc<FiniteFrame>,
) -> Result<UniversalTally> {
    let us = enumerate_homs(q, f.source());
    let vs = enumerate_homs(q, g.source());
    let hs = enumerate_homs(q, &po.apex);
    let via: Vec<(Vec<usize>, Vec<usize>)> = hs
        .iter()
        .map(|h| {
            Ok((
                h.then(&po.proj_b)?.as_slice().to_vec(),
                h.then(&po.proj_c)?.as_slice().to_vec(),
            ))
        })
        .collect::<Result<_>>()?;
    let mut tally = UniversalTally::default();
    for u in &us {
        let fu = u.then(f)?;
        for v in &vs {
            if fu.as_slice() != v.then(g)?.as_slice() {
                continue;
            }
            tally.cones += 1;
            let mediating = via
                .iter()
                .filter(|(x, y)| x == u.as_slice() && y == v.as_slice())
                .count();
            if mediating != 1 {
                tally.failures += 1;
            }
        }
    }
    Ok(tally)
}

/// Evaluation of the density criterion for one homomorphism and family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityVerdict {
    /// Every element of the codomain is a join of a subfamily.
    pub generates: bool,
    /// Every member of the family lies in the image.
    pub in_image: bool,
    pub surjective: bool,
}

impl DensityVerdict {
    /// False exactly when the hypotheses hold but the map misses something.
    pub fn consistent(&self) -> bool {
        !(self.generates && self.in_image) || self.surjective
    }
}

/// If a join-generating family of the codomain lies in the image, the
/// homomorphism is surjective.
pub fn density_check(f: &FrameHom, family: &[usize]) -> DensityVerdict {
    let n = f.target();
    let mut reachable = vec![false; n.len()];
    reachable[n.bottom()] = true;
    let mut frontier = vec![n.bottom()];
    while let Some(x) = frontier.pop() {
        for &k in family {
            let y = n.join(x, k);
            if !reachable[y] {
                reachable[y] = true;
                frontier.push(y);
            }
        }
    }
    let image: Vec<bool> = {
        let mut seen = vec![false; n.len()];
        for &y in f.as_slice() {
            seen[y] = true;
        }
        seen
    };
    DensityVerdict {
        generates: reachable.iter().all(|&r| r),
        in_image: family.iter().all(|&k| image[k]),
        surjective: f.is_surjective(),
    }
}

/// A finite chain `X₀ → X₁ → … → X_n` of injective localic maps, each step
/// the pushout leg of an injective localic map along some localic map.
/// Stored frame-side: `steps[k]` is the surjective projection
/// `O(X_{k+1}) → O(X_k)`.
#[derive(Clone, Debug)]
pub struct InjectiveChain {
    pub stages: Vec<Arc<FiniteFrame>>,
    pub steps: Vec<FrameHom>,
}

impl InjectiveChain {
    /// Grows the chain by the pushout of `j` (with `j` surjective, so the
    /// localic map is injective) along `g: X_n → A`.
    pub fn extend(&mut self, g: &FrameHom, j: &FrameHom) -> Result<()> {
        let last = self.stages.last().expect("chain has a first stage");
        if **g.source() != **last {
            return Err(Error::CarrierMismatch("g must start at the last stage".into()));
        }
        if !j.is_surjective() {
            return Err(Error::Hypothesis(
                "the attached localic map must be injective (its frame map surjective)".into(),
            ));
        }
        let po = pushout_loc(g, j)?;
        if !po.proj_b.is_surjective() || !po.leg_b.right_is_injective() {
            return Err(Error::Hypothesis("pushout leg is not injective".into()));
        }
        self.stages.push(Arc::clone(&po.apex));
        self.steps.push(po.proj_b);
        Ok(())
    }

    pub fn new(first: Arc<FiniteFrame>) -> Self {
        InjectiveChain {
            stages: vec![first],
            steps: Vec::new(),
        }
    }

    /// Frame-side composite `O(X) → O(X_k)` out of the last stage.
    pub fn restriction(&self, k: usize) -> Result<FrameHom> {
        let last = self.stages.len() - 1;
        let mut h = FrameHom::identity(Arc::clone(&self.stages[last]));
        for step in self.steps[k..].iter().rev() {
            h = h.then(step)?;
        }
        Ok(h)
    }
}

/// For a localic map into the last stage, given by `h: O(X) → O(A)`, decides
/// factorization through stage `k` in two ways: by searching for
/// `e: O(X_k) → O(A)` with `e ∘ r_k = h`, and by the image criterion
/// `h^R(A) ⊆ i_k(X_k)`. Returns `(factors, image_contained)`.
pub fn chain_factoring(chain: &InjectiveChain, k: usize, h: &FrameHom) -> Result<(bool, bool)> {
    let r = chain.restriction(k)?;
    let stage = &chain.stages[k];
    let factors = enumerate_homs(stage, h.target())
        .iter()
        .map(|e| r.then(e))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .any(|c| c.as_slice() == h.as_slice());
    let ik = right_adjoint(&r)?;
    let hr = right_adjoint(h)?;
    let stage_image: Vec<usize> = ik.right_map().to_vec();
    let contained = hr.right_map().iter().all(|x| stage_image.contains(x));
    Ok((factors, contained))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_trivial() {
        let p = product_frames(&[]).unwrap();
        assert_eq!(p.frame.len(), 1);
    }

    #[test]
    fn two_times_two_is_boolean() {
        let two = Arc::new(FiniteFrame::two());
        let p = product_frames(&[Arc::clone(&two), two]).unwrap();
        let b = Arc::new(FiniteFrame::boolean(2));
        assert!(crate::frame::find_iso(&p.frame, &b).is_some());
    }

    #[test]
    fn distributivity_for_twos() {
        let two = Arc::new(FiniteFrame::two());
        let d = distribute_iso(&two, &[Arc::clone(&two), Arc::clone(&two)]).unwrap();
        assert_eq!(d.source.len(), d.target.frame.len());
        assert!(d.iso.is_iso());
    }

    #[test]
    fn identity_span_pushout() {
        let b = Arc::new(FiniteFrame::chain(3));
        let id = FrameHom::identity(Arc::clone(&b));
        let po = pushout_loc(&id, &id).unwrap();
        assert_eq!(po.apex.len(), 3);
        assert!(po.proj_b.is_iso());
        assert!(po.leg_b.right_is_injective() && po.leg_b.right_is_surjective());
    }

    #[test]
    fn pushout_over_trivial_frame_is_product() {
        let t = Arc::new(FiniteFrame::trivial());
        let b = Arc::new(FiniteFrame::chain(3));
        let c = Arc::new(FiniteFrame::two());
        let f = FrameHom::new(Arc::clone(&b), Arc::clone(&t), vec![0; 3]).unwrap();
        let g = FrameHom::new(Arc::clone(&c), Arc::clone(&t), vec![0; 2]).unwrap();
        let po = pushout_loc(&f, &g).unwrap();
        assert_eq!(po.apex.len(), 6);
        for q in crate::corpus::frames_up_to(4) {
            let tally = pushout_universal_check(&po, &f, &g, &q).unwrap();
            assert_eq!(tally.failures, 0);
        }
    }
}
