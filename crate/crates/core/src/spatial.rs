//! The open-set frame `Ω`, the point space `pt`, spatiality, and the
//! `Ω ⊣ pt` hom-set bijection for finite spaces and frames.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::frame::{enumerate_homs, FiniteFrame, FrameHom};
use crate::labels::Labels;
use crate::sober::is_sober;
use crate::space::{ContinuousMap, FiniteSpace, DEFAULT_OPEN_CAP};
use crate::tensor::{coproduct, copair};

/// `ΩX`: the opens of a space ordered by inclusion, labelled `{a,b}`.
#[derive(Clone, Debug)]
pub struct OpenFrame {
    pub space: Arc<FiniteSpace>,
    pub frame: Arc<FiniteFrame>,
    pub opens: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
}

impl OpenFrame {
    pub fn index_of(&self, open: BitSet) -> Option<usize> {
        self.index.get(&open).copied()
    }
}

pub fn omega(x: &Arc<FiniteSpace>) -> Result<OpenFrame> {
    let opens = x.opens(DEFAULT_OPEN_CAP)?;
    let labels = Labels::new(opens.iter().map(|&u| x.labels().render_set(u)).collect())?;
    let frame = Arc::new(FiniteFrame::from_sets(labels, &opens)?);
    let index = opens.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    Ok(OpenFrame {
        space: Arc::clone(x),
        frame,
        opens,
        index,
    })
}

/// `pt L`: points are the homomorphisms `L → 2`, opens the sets
/// `Σ_a = {p : p(a) = 1}`.
#[derive(Clone, Debug)]
pub struct PointSpace {
    pub frame: Arc<FiniteFrame>,
    pub space: Arc<FiniteSpace>,
    /// The point homomorphisms, in point order.
    pub points: Vec<FrameHom>,
    /// `Σ_a` for every element `a`.
    pub sigma: Vec<BitSet>,
}

/// In a finite distributive lattice the homomorphisms to `2` are exactly
/// `a ↦ [j ≤ a]` for join-irreducible `j` (the prime filters are `↑j`).
/// Each point is labelled by its `j`.
pub fn pt(l: &Arc<FiniteFrame>) -> Result<PointSpace> {
    let joins = l.join_irreducibles();
    if joins.len() > BitSet::CAPACITY {
        return Err(Error::size("point count", BitSet::CAPACITY));
    }
    let two = Arc::new(FiniteFrame::two());
    let points = joins
        .iter()
        .map(|&j| {
            let map = l.elements().map(|a| usize::from(l.leq(j, a))).collect();
            FrameHom::new(Arc::clone(l), Arc::clone(&two), map)
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma: Vec<BitSet> = l
        .elements()
        .map(|a| (0..points.len()).filter(|&p| points[p].apply(a) == 1).collect())
        .collect();
    let labels = Labels::new(joins.iter().map(|&j| l.label(j).to_string()).collect())?;
    let space = Arc::new(FiniteSpace::from_opens(labels, &sigma)?);
    Ok(PointSpace {
        frame: Arc::clone(l),
        space,
        points,
        sigma,
    })
}

impl PointSpace {
    /// The point whose homomorphism equals `map`.
    pub fn point_of(&self, map: &[usize]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == map)
    }
}

/// Result of comparing `L` with `Ω(pt L)` through `a ↦ Σ_a`.
#[derive(Clone, Debug)]
pub struct SpatialWitness {
    pub points: PointSpace,
    pub opens: OpenFrame,
    pub comparison: Option<FrameHom>,
}

impl SpatialWitness {
    pub fn is_spatial(&self) -> bool {
        self.comparison.as_ref().is_some_and(FrameHom::is_iso)
    }
}

pub fn is_spatial(l: &Arc<FiniteFrame>) -> Result<SpatialWitness> {
    let points = pt(l)?;
    let opens = omega(&points.space)?;
    let map: Option<Vec<usize>> = points.sigma.iter().map(|&s| opens.index_of(s)).collect();
    let comparison = map.and_then(|m| FrameHom::new(Arc::clone(l), Arc::clone(&opens.frame), m).ok());
    Ok(SpatialWitness {
        points,
        opens,
        comparison,
    })
}

/// `x ↦ (U ↦ [x ∈ U])`, the comparison `X → pt(ΩX)`; for sober `X` it is a
/// homeomorphism.
pub fn unit_map(x: &Arc<FiniteSpace>) -> Result<(OpenFrame, PointSpace, ContinuousMap)> {
    let ox = omega(x)?;
    let px = pt(&ox.frame)?;
    let map = (0..x.len())
        .map(|p| {
            let hom: Vec<usize> = ox.opens.iter().map(|u| usize::from(u.contains(p))).collect();
            px.point_of(&hom)
                .ok_or_else(|| Error::NotHom("neighbourhood filter is not a point".into()))
        })
        .collect::<Result<_>>()?;
    let unit = ContinuousMap::new(Arc::clone(x), Arc::clone(&px.space), map)?;
    Ok((ox, px, unit))
}

/// Both sides of the hom-set bijection for a sober space and a frame.
#[derive(Clone, Debug)]
pub struct AdjunctionData {
    pub opens: OpenFrame,
    pub points: PointSpace,
    /// Frame homomorphisms `L → ΩX`.
    pub homs: Vec<FrameHom>,
    /// Continuous maps `X → pt L`.
    pub maps: Vec<ContinuousMap>,
    /// `transpose[i]` is the index in `maps` of the transpose of `homs[i]`.
    pub transpose: Vec<usize>,
}

/// `h ↦ (x ↦ (a ↦ [x ∈ h(a)]))`
pub fn transpose_hom(h: &FrameHom, opens: &OpenFrame, points: &PointSpace) -> Result<Vec<usize>> {
    (0..opens.space.len())
        .map(|x| {
            let hom: Vec<usize> = h
                .as_slice()
                .iter()
                .map(|&u| usize::from(opens.opens[u].contains(x)))
                .collect();
            points
                .point_of(&hom)
                .ok_or_else(|| Error::NotHom("transposed value is not a point".into()))
        })
        .collect()
}

/// `φ ↦ (a ↦ φ⁻¹(Σ_a))`
pub fn transpose_map(phi: &ContinuousMap, opens: &OpenFrame, points: &PointSpace) -> Result<Vec<usize>> {
    points
        .sigma
        .iter()
        .map(|&s| {
            opens
                .index_of(phi.preimage(s))
                .ok_or_else(|| Error::NotContinuous("preimage of Σ_a is not open".into()))
        })
        .collect()
}

/// Enumerates both hom-sets and checks that transposition is a bijection
/// whose inverse is the reverse transposition.
pub fn adjunction_check(x: &Arc<FiniteSpace>, l: &Arc<FiniteFrame>) -> Result<AdjunctionData> {
    if !is_sober(x)? {
        return Err(Error::Hypothesis("space is not sober".into()));
    }
    let opens = omega(x)?;
    let points = pt(l)?;
    let homs = enumerate_homs(l, &opens.frame);
    let maps = ContinuousMap::enumerate(x, &points.space);
    let mut transpose = Vec::with_capacity(homs.len());
    for h in &homs {
        let t = transpose_hom(h, &opens, &points)?;
        let idx = maps
            .iter()
            .position(|m| m.as_slice() == t.as_slice())
            .ok_or_else(|| Error::NotContinuous("transpose is not continuous".into()))?;
        if transpose_map(&maps[idx], &opens, &points)? != h.as_slice() {
            return Err(Error::NotIso("transposition does not invert".into()));
        }
        transpose.push(idx);
    }
    let mut hit = vec![false; maps.len()];
    for &t in &transpose {
        if std::mem::replace(&mut hit[t], true) {
            return Err(Error::NotIso("two homomorphisms share a transpose".into()));
        }
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::NotIso("some continuous map is not a transpose".into()));
    }
    Ok(AdjunctionData {
        opens,
        points,
        homs,
        maps,
        transpose,
    })
}

/// `ΩX ⊗ ΩY → Ω(X × Y)`, the copairing of the projection preimages.
#[derive(Clone, Debug)]
pub struct SpatialProduct {
    pub tensor_len: usize,
    pub product_opens: usize,
    pub comparison: FrameHom,
}

impl SpatialProduct {
    pub fn is_iso(&self) -> bool {
        self.comparison.is_iso()
    }
}

pub fn spatial_product(x: &Arc<FiniteSpace>, y: &Arc<FiniteSpace>) -> Result<SpatialProduct> {
    let ox = omega(x)?;
    let oy = omega(y)?;
    let xy = Arc::new(x.product(y)?);
    let oxy = omega(&xy)?;
    let m = y.len();
    let px = ContinuousMap::new(Arc::clone(&xy), Arc::clone(x), (0..xy.len()).map(|p| p / m).collect())?;
    let py = ContinuousMap::new(Arc::clone(&xy), Arc::clone(y), (0..xy.len()).map(|p| p % m).collect())?;
    let fx = omega_map(&px, &oxy, &ox)?;
    let fy = omega_map(&py, &oxy, &oy)?;
    let t = coproduct(&ox.frame, &oy.frame)?;
    let comparison = copair(&t, &fx, &fy)?;
    Ok(SpatialProduct {
        tensor_len: t.len(),
        product_opens: oxy.frame.len(),
        comparison,
    })
}

/// `f⁻¹ : ΩY → ΩX` for continuous `f : X → Y`.
pub fn omega_map(f: &ContinuousMap, ox: &OpenFrame, oy: &OpenFrame) -> Result<FrameHom> {
    if **f.source() != *ox.space || **f.target() != *oy.space {
        return Err(Error::CarrierMismatch("map does not match the open frames".into()));
    }
    let map = oy
        .opens
        .iter()
        .map(|&v| {
            ox.index_of(f.preimage(v))
                .ok_or_else(|| Error::NotContinuous("preimage of an open is not open".into()))
        })
        .collect::<Result<_>>()?;
    FrameHom::new(Arc::clone(&oy.frame), Arc::clone(&ox.frame), map)
}

/// Homeomorphism between two finite spaces, if any, by backtracking.
pub fn find_homeomorphism(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>) -> Option<ContinuousMap> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let mut map = vec![usize::MAX; n];
    let mut used = BitSet::empty();
    fn go(k: usize, a: &FiniteSpace, b: &FiniteSpace, map: &mut [usize], used: &mut BitSet) -> bool {
        if k == a.len() {
            return true;
        }
        for y in b.all().difference(*used).iter() {
            let ok = (0..k).all(|z| a.leq(z, k) == b.leq(map[z], y) && a.leq(k, z) == b.leq(y, map[z]));
            if !ok {
                continue;
            }
            map[k] = y;
            used.insert(y);
            if go(k + 1, a, b, map, used) {
                return true;
            }
            used.remove(y);
        }
        false
    }
    if go(0, a, b, &mut map, &mut used) {
        Some(ContinuousMap::new(Arc::clone(a), Arc::clone(b), map).expect("order isomorphism is continuous"))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_examples() {
        let one = Arc::new(FiniteSpace::point());
        assert_eq!(omega(&one).unwrap().frame.len(), 2);
        let s = Arc::new(FiniteSpace::sierpinski());
        let os = omega(&s).unwrap();
        assert_eq!(os.frame.len(), 3);
        assert_eq!(os.frame.join_irreducibles().len(), 2);
        let d = Arc::new(FiniteSpace::discrete(Labels::numbered("p", 2)));
        assert_eq!(omega(&d).unwrap().frame.len(), 4);
    }

    #[test]
    fn pt_examples() {
        let two = Arc::new(FiniteFrame::two());
        assert_eq!(pt(&two).unwrap().space.len(), 1);
        let c = Arc::new(FiniteFrame::chain_of(&["0", "m", "1"]).unwrap());
        let pc = pt(&c).unwrap();
        let s = Arc::new(FiniteSpace::sierpinski());
        assert!(find_homeomorphism(&pc.space, &s).is_some());
        assert_eq!(pc.points.len(), enumerate_homs(&c, &two).len());
        let b = Arc::new(FiniteFrame::boolean(2));
        let pb = pt(&b).unwrap();
        let d = Arc::new(FiniteSpace::discrete(Labels::numbered("p", 2)));
        assert!(find_homeomorphism(&pb.space, &d).is_some());
    }

    #[test]
    fn spatiality_and_adjunction() {
        let c = Arc::new(FiniteFrame::chain_of(&["0", "m", "1"]).unwrap());
        assert!(is_spatial(&c).unwrap().is_spatial());
        let s = Arc::new(FiniteSpace::sierpinski());
        let data = adjunction_check(&s, &c).unwrap();
        assert_eq!(data.homs.len(), data.maps.len());
    }

    #[test]
    fn sierpinski_product() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let sp = spatial_product(&s, &s).unwrap();
        assert_eq!(sp.tensor_len, 6);
        assert_eq!(sp.product_opens, 6);
        assert!(sp.is_iso());
    }
}
