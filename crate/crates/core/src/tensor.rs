//! The frame coproduct `L ⊗ M` as π-saturated downsets of `L × M`.
//!
//! A pair `(a, b)` sits at position `a * |M| + b`, so a downset of the
//! product order is one [`BitSet`] and `|L| · |M|` is capped at
//! [`BitSet::CAPACITY`].

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::frame::{FiniteFrame, FrameHom, DEFAULT_MAX_FRAME};
use crate::labels::Labels;

/// Literal prenucleus evaluation enumerates subsets of downsets and of the
/// factors; these caps bound that work.
pub const LITERAL_MAX_DOWNSET: usize = 20;
pub const LITERAL_MAX_FACTOR: usize = 16;

/// The product poset `L × M` with precomputed principal downsets.
#[derive(Clone, Debug)]
pub struct PairCarrier {
    left: Arc<FiniteFrame>,
    right: Arc<FiniteFrame>,
    down: Vec<BitSet>,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
    nbar: BitSet,
}

impl PairCarrier {
    pub fn new(left: Arc<FiniteFrame>, right: Arc<FiniteFrame>) -> Result<Self> {
        let (n, m) = (left.len(), right.len());
        if n * m > BitSet::CAPACITY {
            return Err(Error::size("|L|·|M| for the coproduct carrier", BitSet::CAPACITY));
        }
        let mut down = vec![BitSet::empty(); n * m];
        for a in 0..n {
            for b in 0..m {
                down[a * m + b] = (0..n)
                    .filter(|&a2| left.leq(a2, a))
                    .flat_map(|a2| (0..m).filter(|&b2| right.leq(b2, b)).map(move |b2| a2 * m + b2))
                    .collect();
            }
        }
        let rows = (0..n).map(|a| (0..m).map(|b| a * m + b).collect()).collect();
        let cols = (0..m).map(|b| (0..n).map(|a| a * m + b).collect()).collect();
        let nbar = (0..n * m)
            .filter(|&p| p / m == left.bottom() || p % m == right.bottom())
            .collect();
        Ok(PairCarrier {
            left,
            right,
            down,
            rows,
            cols,
            nbar,
        })
    }

    pub fn left(&self) -> &Arc<FiniteFrame> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteFrame> {
        &self.right
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.down.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    #[inline]
    pub fn pos(&self, a: usize, b: usize) -> usize {
        a * self.right.len() + b
    }

    #[inline]
    pub fn pair(&self, p: usize) -> (usize, usize) {
        (p / self.right.len(), p % self.right.len())
    }

    /// `n̄ = {(a, b) : a = ⊥ or b = ⊥}`
    pub fn nbar(&self) -> BitSet {
        self.nbar
    }

    /// `↓(a, b)`
    #[inline]
    pub fn principal(&self, a: usize, b: usize) -> BitSet {
        self.down[self.pos(a, b)]
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    pub fn downclose(&self, set: BitSet) -> BitSet {
        set.iter().fold(BitSet::empty(), |acc, p| acc.union(self.down[p]))
    }

    pub fn is_downset(&self, set: BitSet) -> bool {
        set.iter().all(|p| self.down[p].is_subset(set))
    }

    pub fn check_downset(&self, set: BitSet) -> Result<()> {
        for p in set.iter() {
            if let Some(q) = self.down[p].difference(set).first() {
                return Err(Error::NotDownset {
                    above: self.render_pair(p),
                    below: self.render_pair(q),
                });
            }
        }
        Ok(())
    }

    pub fn render_pair(&self, p: usize) -> String {
        let (a, b) = self.pair(p);
        format!("({},{})", self.left.label(a), self.right.label(b))
    }

    /// `x ⊗ y = ↓(x, y) ∪ n̄`
    pub fn tensor_set(&self, x: usize, y: usize) -> BitSet {
        self.principal(x, y).union(self.nbar)
    }

    /// Least π-saturated downset containing `set ∪ n̄`.
    ///
    /// Saturation only ever needs the whole row (or column) inside the set:
    /// `(x, ⋁Y)` for every `Y ⊆ row(x)` lies below `(x, ⋁row(x))`.
    pub fn saturate(&self, set: BitSet) -> BitSet {
        let (left, right) = (&self.left, &self.right);
        let mut cur = self.downclose(set).union(self.nbar);
        loop {
            let mut next = cur;
            for (a, &row) in self.rows.iter().enumerate() {
                let members = row.intersection(cur);
                let top = right.join_all(members.iter().map(|p| p % right.len()));
                next = next.union(self.principal(a, top));
            }
            for (b, &col) in self.cols.iter().enumerate() {
                let members = col.intersection(cur);
                let top = left.join_all(members.iter().map(|p| p / right.len()));
                next = next.union(self.principal(top, b));
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_saturated(&self, set: BitSet) -> bool {
        self.is_downset(set) && self.saturate(set) == set
    }

    /// `σ₀(U) = {⋁D : D ⊆ U nonempty, updirected}` by literal enumeration.
    pub fn sigma0(&self, set: BitSet) -> Result<BitSet> {
        self.check_downset(set)?;
        if set.len() > LITERAL_MAX_DOWNSET {
            return Err(Error::size("σ₀ subset enumeration", LITERAL_MAX_DOWNSET));
        }
        let leq = |p: usize, q: usize| self.down[q].contains(p);
        let mut out = BitSet::empty();
        for d in set.subsets() {
            if d.is_empty() {
                continue;
            }
            let updirected = d
                .iter()
                .all(|p| d.iter().all(|q| d.iter().any(|r| leq(p, r) && leq(q, r))));
            if updirected {
                let a = self.left.join_all(d.iter().map(|p| self.pair(p).0));
                let b = self.right.join_all(d.iter().map(|p| self.pair(p).1));
                out.insert(self.pos(a, b));
            }
        }
        Ok(out)
    }

    /// `π₁(U) = {(⋁X, y) : X ⊆ L, X × {y} ⊆ U}`, `X = ∅` included.
    pub fn pi1(&self, set: BitSet) -> Result<BitSet> {
        self.check_downset(set)?;
        if self.left.len() > LITERAL_MAX_FACTOR {
            return Err(Error::size("π₁ subset enumeration", LITERAL_MAX_FACTOR));
        }
        let mut out = BitSet::empty();
        for xs in BitSet::full(self.left.len()).subsets() {
            let jx = self.left.join_all(xs.iter());
            for y in self.right.elements() {
                if xs.iter().all(|x| set.contains(self.pos(x, y))) {
                    out.insert(self.pos(jx, y));
                }
            }
        }
        Ok(out)
    }

    /// `π̂₂(U) = {(x, ⋁Y) : Y ⊆ M finite, {x} × Y ⊆ U}`, `Y = ∅` included.
    pub fn pi2_hat(&self, set: BitSet) -> Result<BitSet> {
        self.check_downset(set)?;
        if self.right.len() > LITERAL_MAX_FACTOR {
            return Err(Error::size("π̂₂ subset enumeration", LITERAL_MAX_FACTOR));
        }
        let mut out = BitSet::empty();
        for ys in BitSet::full(self.right.len()).subsets() {
            let jy = self.right.join_all(ys.iter());
            for x in self.left.elements() {
                if ys.iter().all(|y| set.contains(self.pos(x, y))) {
                    out.insert(self.pos(x, jy));
                }
            }
        }
        Ok(out)
    }

    /// Saturation by iterating the literal prenuclei `π₁ ∘ π̂₂ ∘ σ₀` until
    /// nothing changes. Slow; used as an oracle for [`Self::saturate`].
    pub fn saturate_literal(&self, set: BitSet) -> Result<BitSet> {
        self.check_downset(set)?;
        let mut cur = set;
        loop {
            let next = self.pi1(self.pi2_hat(self.sigma0(cur)?)?)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }
}

/// `L ⊗ M` with its element list, frame structure and injections.
#[derive(Clone, Debug)]
pub struct TensorFrame {
    carrier: PairCarrier,
    elements: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
    frame: Arc<FiniteFrame>,
    iota1: FrameHom,
    iota2: FrameHom,
}

/// Coproduct with the default element cap.
pub fn coproduct(left: &Arc<FiniteFrame>, right: &Arc<FiniteFrame>) -> Result<TensorFrame> {
    coproduct_capped(left, right, DEFAULT_MAX_FRAME)
}

/// Enumerates the saturated downsets by breadth-first search from `n̄`:
/// every saturated downset is a join of tensors `a ⊗ b`, so adding one
/// principal downset at a time and saturating reaches all of them.
pub fn coproduct_capped(
    left: &Arc<FiniteFrame>,
    right: &Arc<FiniteFrame>,
    cap: usize,
) -> Result<TensorFrame> {
    let carrier = PairCarrier::new(Arc::clone(left), Arc::clone(right))?;
    let start = carrier.saturate(BitSet::empty());
    let mut seen: HashMap<BitSet, ()> = HashMap::new();
    seen.insert(start, ());
    let mut queue = VecDeque::from([start]);
    let mut elements = vec![start];
    while let Some(e) = queue.pop_front() {
        for p in carrier.all().difference(e).iter() {
            let next = carrier.saturate(e.union(carrier.down[p]));
            if seen.insert(next, ()).is_none() {
                if elements.len() >= cap {
                    return Err(Error::size("coproduct element count", cap));
                }
                elements.push(next);
                queue.push_back(next);
            }
        }
    }
    elements.sort_by(BitSet::canonical_cmp);
    build(carrier, elements)
}

/// Slow oracle: filters every downset of `L × M` for saturation.
pub fn saturated_downsets_by_filtering(carrier: &PairCarrier) -> Result<Vec<BitSet>> {
    let below: Vec<BitSet> = (0..carrier.len()).map(|p| carrier.down[p]).collect();
    let mut sets: Vec<BitSet> = crate::poset::enumerate_lower_sets(&below, 1 << 22)?
        .into_iter()
        .filter(|&u| carrier.is_saturated(u))
        .collect();
    sets.sort_by(BitSet::canonical_cmp);
    Ok(sets)
}

fn build(carrier: PairCarrier, elements: Vec<BitSet>) -> Result<TensorFrame> {
    let index: HashMap<BitSet, usize> = elements.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let names = elements.iter().map(|&s| label_for(&carrier, s)).collect();
    let frame = Arc::new(FiniteFrame::from_sets(Labels::new(names)?, &elements)?);
    let (left, right) = (Arc::clone(&carrier.left), Arc::clone(&carrier.right));
    let iota1_map = left
        .elements()
        .map(|x| index[&carrier.tensor_set(x, right.top())])
        .collect();
    let iota2_map = right
        .elements()
        .map(|y| index[&carrier.tensor_set(left.top(), y)])
        .collect();
    let iota1 = FrameHom::new(left, Arc::clone(&frame), iota1_map)?;
    let iota2 = FrameHom::new(right, Arc::clone(&frame), iota2_map)?;
    Ok(TensorFrame {
        carrier,
        elements,
        index,
        frame,
        iota1,
        iota2,
    })
}

/// `a⊗b ∨ c⊗d` over the maximal pairs outside `n̄`; `⊥` for `n̄` itself.
fn label_for(carrier: &PairCarrier, set: BitSet) -> String {
    let core = set.difference(carrier.nbar);
    let mut parts: Vec<String> = core
        .iter()
        .filter(|&p| {
            core.iter()
                .all(|q| q == p || !carrier.down[q].contains(p))
        })
        .map(|p| {
            let (a, b) = carrier.pair(p);
            format!("{}⊗{}", carrier.left.label(a), carrier.right.label(b))
        })
        .collect();
    if parts.is_empty() {
        return "⊥".into();
    }
    parts.sort();
    parts.join(" ∨ ")
}

impl TensorFrame {
    pub fn carrier(&self) -> &PairCarrier {
        &self.carrier
    }

    pub fn left(&self) -> &Arc<FiniteFrame> {
        &self.carrier.left
    }

    pub fn right(&self) -> &Arc<FiniteFrame> {
        &self.carrier.right
    }

    pub fn frame(&self) -> &Arc<FiniteFrame> {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The saturated downset behind element `i`.
    pub fn element(&self, i: usize) -> BitSet {
        self.elements[i]
    }

    pub fn elements(&self) -> &[BitSet] {
        &self.elements
    }

    pub fn index_of(&self, set: BitSet) -> Option<usize> {
        self.index.get(&set).copied()
    }

    /// Element index of `x ⊗ y`.
    pub fn tensor(&self, x: usize, y: usize) -> usize {
        self.index[&self.carrier.tensor_set(x, y)]
    }

    /// Element index of `saturate(set)`.
    pub fn saturate_index(&self, set: BitSet) -> usize {
        self.index[&self.carrier.saturate(set)]
    }

    pub fn iota1(&self) -> &FrameHom {
        &self.iota1
    }

    pub fn iota2(&self) -> &FrameHom {
        &self.iota2
    }

    /// Pairs `(a, b)` with `a ⊗ b ≤` element `i`.
    pub fn pairs_below(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let set = self.elements[i];
        set.iter().map(|p| self.carrier.pair(p))
    }
}

/// `id_L ⊗ f : L ⊗ M → L ⊗ N`, sending `↓S` to `⋁_{(a,b) ∈ ↓S} a ⊗ f(b)`.
/// Both injection laws are checked.
pub fn map_tensor(lm: &TensorFrame, ln: &TensorFrame, f: &FrameHom) -> Result<FrameHom> {
    if **lm.left() != **ln.left() {
        return Err(Error::CarrierMismatch("tensors have different left factors".into()));
    }
    if **f.source() != **lm.right() || **f.target() != **ln.right() {
        return Err(Error::CarrierMismatch(
            "homomorphism does not match the right factors".into(),
        ));
    }
    let c = ln.carrier();
    let map = (0..lm.len())
        .map(|i| {
            let image = lm
                .pairs_below(i)
                .fold(BitSet::empty(), |acc, (a, b)| acc.union(c.principal(a, f.apply(b))));
            ln.saturate_index(image)
        })
        .collect();
    let h = FrameHom::new(Arc::clone(lm.frame()), Arc::clone(ln.frame()), map)?;
    let via1 = lm.iota1().then(&h)?;
    if via1.as_slice() != ln.iota1().as_slice() {
        return Err(Error::NonCommuting("(id ⊗ f) ∘ ι₁ ≠ ι₁".into()));
    }
    let via2 = lm.iota2().then(&h)?;
    let other = f.then(ln.iota2())?;
    if via2.as_slice() != other.as_slice() {
        return Err(Error::NonCommuting("(id ⊗ f) ∘ ι₂ ≠ ι₂ ∘ f".into()));
    }
    Ok(h)
}

/// `f ⊗ g : L ⊗ M → L' ⊗ M'`, sending `↓S` to `⋁ f(a) ⊗ g(b)`.
pub fn map_tensor_both(
    src: &TensorFrame,
    dst: &TensorFrame,
    f: &FrameHom,
    g: &FrameHom,
) -> Result<FrameHom> {
    if **f.source() != **src.left()
        || **f.target() != **dst.left()
        || **g.source() != **src.right()
        || **g.target() != **dst.right()
    {
        return Err(Error::CarrierMismatch(
            "homomorphisms do not match the tensor factors".into(),
        ));
    }
    let c = dst.carrier();
    let map = (0..src.len())
        .map(|i| {
            let image = src.pairs_below(i).fold(BitSet::empty(), |acc, (a, b)| {
                acc.union(c.principal(f.apply(a), g.apply(b)))
            });
            dst.saturate_index(image)
        })
        .collect();
    FrameHom::new(Arc::clone(src.frame()), Arc::clone(dst.frame()), map)
}

/// The mediating map `h : L ⊗ M → N` of a cocone `(F, G)`:
/// `h(↓S) = ⋁_{(a,b) ∈ ↓S} F(a) ∧ G(b)`. Both triangles are checked.
pub fn copair(t: &TensorFrame, f: &FrameHom, g: &FrameHom) -> Result<FrameHom> {
    if **f.source() != **t.left() || **g.source() != **t.right() {
        return Err(Error::CarrierMismatch(
            "cocone legs do not start at the tensor factors".into(),
        ));
    }
    if **f.target() != **g.target() {
        return Err(Error::CarrierMismatch("cocone legs have different codomains".into()));
    }
    let n = f.target();
    let map = (0..t.len())
        .map(|i| n.join_all(t.pairs_below(i).map(|(a, b)| n.meet(f.apply(a), g.apply(b)))))
        .collect();
    let h = FrameHom::new(Arc::clone(t.frame()), Arc::clone(n), map)?;
    if t.iota1().then(&h)?.as_slice() != f.as_slice() {
        return Err(Error::NonCommuting("h ∘ ι₁ ≠ F".into()));
    }
    if t.iota2().then(&h)?.as_slice() != g.as_slice() {
        return Err(Error::NonCommuting("h ∘ ι₂ ≠ G".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Arc<FiniteFrame> {
        Arc::new(FiniteFrame::chain_of(&["0", "m", "1"]).unwrap())
    }

    #[test]
    fn saturate_fixes_bottom_and_top() {
        let c = PairCarrier::new(chain3(), chain3()).unwrap();
        assert_eq!(c.saturate(c.nbar()), c.nbar());
        assert_eq!(c.saturate(c.all()), c.all());
    }

    #[test]
    fn saturate_of_two_generators_is_strictly_between() {
        let c = PairCarrier::new(chain3(), chain3()).unwrap();
        let u = c.principal(1, 2).union(c.principal(2, 1)).union(c.nbar());
        let s = c.saturate(u);
        // Oracle: least saturated downset containing u among all of them.
        let all = saturated_downsets_by_filtering(&c).unwrap();
        let least = all
            .iter()
            .copied()
            .filter(|&v| u.is_subset(v))
            .min_by_key(|v| v.len())
            .unwrap();
        assert_eq!(s, least);
        assert_eq!(s, u);
        assert_ne!(s, c.all());
    }

    #[test]
    fn literal_prenuclei_on_two_by_two() {
        let two = Arc::new(FiniteFrame::two());
        let c = PairCarrier::new(Arc::clone(&two), two).unwrap();
        let u = c.principal(1, 0).union(c.principal(0, 1));
        assert_eq!(c.sigma0(u).unwrap(), u);
        assert_eq!(c.pi2_hat(u).unwrap(), u);
        assert_eq!(c.pi1(u).unwrap(), u);
        let all = c.all();
        assert_eq!(c.sigma0(all).unwrap(), all);
        assert_eq!(c.pi1(all).unwrap(), all);
        assert_eq!(c.pi2_hat(all).unwrap(), all);
    }

    #[test]
    fn coproduct_with_two_is_unit() {
        let l = chain3();
        let t = coproduct(&Arc::new(FiniteFrame::two()), &l).unwrap();
        assert_eq!(t.len(), l.len());
        assert!(t.iota2().is_iso());
    }

    #[test]
    fn sierpinski_square_has_six_elements() {
        let t = coproduct(&chain3(), &chain3()).unwrap();
        assert_eq!(t.len(), 6);
        let oracle = saturated_downsets_by_filtering(t.carrier()).unwrap();
        assert_eq!(oracle, t.elements());
        for x in 0..3 {
            assert_eq!(t.tensor(x, 0), t.tensor(0, x));
            assert_eq!(t.element(t.tensor(x, 0)), t.carrier().nbar());
        }
    }

    #[test]
    fn copair_examples() {
        let l = chain3();
        let t = coproduct(&l, &l).unwrap();
        let id = FrameHom::identity(Arc::clone(&l));
        let h = copair(&t, &id, &id).unwrap();
        assert_eq!(h.apply(t.tensor(1, 2)), 1);
        assert_eq!(h.apply(t.frame().bottom()), 0);
    }
}
