//! Finite frames (finite distributive lattices) and frame homomorphisms.
//!
//! A frame stores its meet and join tables; the order is recovered as
//! `a ≤ b ⇔ a ∧ b = a`. Frames are not limited to [`BitSet::CAPACITY`]
//! elements, so order bookkeeping during construction uses wide rows.

use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::labels::Labels;
use crate::poset::FinitePoset;

/// Default cap on the number of frame elements.
pub const DEFAULT_MAX_FRAME: usize = 4096;

/// Frames up to this size are accepted by the literal way-below evaluation.
pub const WAY_BELOW_MAX_ELEMENTS: usize = 12;

/// Bit rows of arbitrary width.
#[derive(Clone)]
pub(crate) struct Rows {
    words: usize,
    data: Vec<u64>,
}

impl Rows {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Rows {
            words,
            data: vec![0; words * n],
        }
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub(crate) fn count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn and_rows(a: &[u64], b: &[u64], out: &mut Vec<u64>) {
    out.clear();
    out.extend(a.iter().zip(b).map(|(x, y)| x & y));
}

fn row_contains(big: &[u64], small: &[u64]) -> bool {
    big.iter().zip(small).all(|(b, s)| s & !b == 0)
}

fn row_members(r: &[u64]) -> impl Iterator<Item = usize> + '_ {
    r.iter().enumerate().flat_map(|(w, &bits)| {
        let mut b = bits;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let t = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(w * 64 + t)
        })
    })
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteFrame {
    labels: Labels,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
    /// Number of elements below each element, itself included.
    rank: Vec<usize>,
}

impl fmt::Debug for FiniteFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteFrame")
            .field("elements", &self.labels.names())
            .field("covers", &self.covers())
            .finish()
    }
}

impl FiniteFrame {
    /// Builds a frame from an order relation on `0..labels.len()`, checking
    /// that it is a partial order, a lattice, and distributive.
    pub fn from_order(labels: Labels, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::from_order_capped(labels, leq, DEFAULT_MAX_FRAME)
    }

    pub fn from_order_capped(
        labels: Labels,
        leq: impl Fn(usize, usize) -> bool,
        cap: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n > cap {
            return Err(Error::size("frame element count", cap));
        }
        if n == 0 {
            return Err(Error::NotLattice(
                String::new(),
                String::new(),
                "bottom and top (the order is empty)",
            ));
        }
        let mut below = Rows::new(n);
        let mut above = Rows::new(n);
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    below.set(b, a);
                    above.set(a, b);
                }
            }
        }
        for a in 0..n {
            if !below.get(a, a) {
                return Err(Error::NotMonotone(format!(
                    "order is not reflexive at `{}`",
                    labels.name(a)
                )));
            }
            for b in row_members(below.row(a)) {
                if b != a && below.get(b, a) {
                    return Err(Error::Cycle(labels.name(a).into(), labels.name(b).into()));
                }
                if !row_contains(below.row(a), below.row(b)) {
                    return Err(Error::NotMonotone(format!(
                        "order is not transitive below `{}`",
                        labels.name(a)
                    )));
                }
            }
        }
        let rank: Vec<usize> = (0..n).map(|a| below.count(a)).collect();
        let up_rank: Vec<usize> = (0..n).map(|a| above.count(a)).collect();

        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        let mut common = Vec::new();
        for a in 0..n {
            for b in a..n {
                and_rows(below.row(a), below.row(b), &mut common);
                let m = row_members(&common)
                    .max_by_key(|&c| (rank[c], std::cmp::Reverse(c)))
                    .filter(|&c| row_contains(below.row(c), &common))
                    .ok_or_else(|| {
                        Error::NotLattice(labels.name(a).into(), labels.name(b).into(), "meet")
                    })?;
                and_rows(above.row(a), above.row(b), &mut common);
                let j = row_members(&common)
                    .max_by_key(|&c| (up_rank[c], std::cmp::Reverse(c)))
                    .filter(|&c| row_contains(above.row(c), &common))
                    .ok_or_else(|| {
                        Error::NotLattice(labels.name(a).into(), labels.name(b).into(), "join")
                    })?;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
            }
        }
        let bottom = (0..n).find(|&a| up_rank[a] == n).ok_or_else(|| {
            Error::NotLattice(String::new(), String::new(), "least element")
        })?;
        let top = (0..n).find(|&a| rank[a] == n).ok_or_else(|| {
            Error::NotLattice(String::new(), String::new(), "greatest element")
        })?;
        let frame = FiniteFrame {
            labels,
            meet,
            join,
            bottom,
            top,
            rank,
        };
        frame.check_distributive()?;
        Ok(frame)
    }

    fn check_distributive(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.meet(a, b);
                for c in b + 1..n {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(ab, self.meet(a, c));
                    if lhs != rhs {
                        return Err(Error::NotDistributive {
                            a: self.label(a).into(),
                            b: self.label(b).into(),
                            c: self.label(c).into(),
                            lhs: self.label(lhs).into(),
                            rhs: self.label(rhs).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_poset(p: &FinitePoset) -> Result<Self> {
        Self::from_order(p.labels().clone(), |a, b| p.leq(a, b))
    }

    /// The inclusion order on a family of sets.
    pub fn from_sets(labels: Labels, sets: &[BitSet]) -> Result<Self> {
        if labels.len() != sets.len() {
            return Err(Error::CarrierMismatch("one label per set is required".into()));
        }
        Self::from_order(labels, |a, b| sets[a].is_subset(sets[b]))
    }

    /// The chain on the given labels, in increasing order.
    pub fn chain_of(names: &[&str]) -> Result<Self> {
        let labels = Labels::new(names.iter().map(|s| s.to_string()).collect())?;
        Self::from_order(labels, |a, b| a <= b)
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let labels = Labels::new((0..n).map(|i| i.to_string()).collect()).unwrap();
        Self::from_order(labels, |a, b| a <= b).unwrap()
    }

    /// The initial frame `0 < 1`.
    pub fn two() -> Self {
        Self::chain(2)
    }

    /// The one-element frame, where `⊥ = ⊤`.
    pub fn trivial() -> Self {
        Self::from_order(Labels::new(vec!["*".into()]).unwrap(), |_, _| true).unwrap()
    }

    /// The powerset of `{a0, .., a(k-1)}`, elements labelled as sets.
    pub fn boolean(k: usize) -> Self {
        let atoms = Labels::numbered("a", k);
        let sets: Vec<BitSet> = BitSet::full(k).subsets().collect();
        let labels = Labels::new(sets.iter().map(|&s| atoms.render_set(s)).collect()).unwrap();
        Self::from_sets(labels, &sets).unwrap()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> &str {
        self.labels.name(i)
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.labels.position(name)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    #[inline]
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.top
    }

    /// Number of elements below `a`, `a` included.
    #[inline]
    pub fn rank(&self, a: usize) -> usize {
        self.rank[a]
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Elements sorted so that everything below `x` precedes `x`.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&i| (self.rank[i], i));
        order
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.elements()
            .filter(|&y| y != x && self.leq(y, x))
            .filter(|&y| {
                !self
                    .elements()
                    .any(|z| z != x && z != y && self.leq(y, z) && self.leq(z, x))
            })
            .collect()
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.lower_covers(x) {
                out.push((y, x));
            }
        }
        out.sort_unstable();
        out
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| self.lower_covers(x).len() == 1)
            .collect()
    }

    /// The underlying poset (needs at most [`BitSet::CAPACITY`] elements).
    pub fn to_poset(&self) -> Result<FinitePoset> {
        let mut pairs = Vec::new();
        for (a, b) in self.covers() {
            pairs.push((a, b));
        }
        FinitePoset::from_pairs(self.labels.clone(), &pairs)
    }

    /// Same frame with new element labels.
    pub fn relabel(&self, labels: Labels) -> Result<FiniteFrame> {
        if labels.len() != self.len() {
            return Err(Error::CarrierMismatch("relabelling changes the element count".into()));
        }
        Ok(FiniteFrame {
            labels,
            ..self.clone()
        })
    }
}

/// A validated frame homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameHom {
    source: Arc<FiniteFrame>,
    target: Arc<FiniteFrame>,
    map: Vec<usize>,
}

impl FrameHom {
    /// Checks preservation of `⊥`, `⊤`, binary joins and binary meets.
    pub fn new(source: Arc<FiniteFrame>, target: Arc<FiniteFrame>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::NotHom(format!(
                "assignment covers {} of {} elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.len()) {
            return Err(Error::NotHom(format!("target index {bad} out of range")));
        }
        if let Some(w) = hom_violation(&source, &target, &map) {
            return Err(Error::NotHom(w));
        }
        Ok(FrameHom {
            source,
            target,
            map,
        })
    }

    pub(crate) fn new_unchecked(
        source: Arc<FiniteFrame>,
        target: Arc<FiniteFrame>,
        map: Vec<usize>,
    ) -> Self {
        debug_assert!(hom_violation(&source, &target, &map).is_none());
        FrameHom {
            source,
            target,
            map,
        }
    }

    pub fn identity(l: Arc<FiniteFrame>) -> Self {
        let map = l.elements().collect();
        FrameHom {
            source: Arc::clone(&l),
            target: l,
            map,
        }
    }

    /// The unique homomorphism out of the initial frame `2`.
    pub fn from_two(l: Arc<FiniteFrame>) -> Self {
        let two = Arc::new(FiniteFrame::two());
        let map = vec![l.bottom(), l.top()];
        FrameHom {
            source: two,
            target: l,
            map,
        }
    }

    pub fn source(&self) -> &Arc<FiniteFrame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteFrame> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`
    pub fn then(&self, other: &FrameHom) -> Result<FrameHom> {
        if *self.target != *other.source {
            return Err(Error::CarrierMismatch(
                "composed homomorphisms do not share a frame".into(),
            ));
        }
        Ok(FrameHom {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        is_injective(&self.map, self.target.len())
    }

    pub fn is_surjective(&self) -> bool {
        is_surjective(&self.map, self.target.len())
    }

    pub fn is_iso(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    /// The inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<FrameHom> {
        if !self.is_iso() {
            return Err(Error::NotIso("homomorphism is not bijective".into()));
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        FrameHom::new(Arc::clone(&self.target), Arc::clone(&self.source), inv)
    }
}

pub(crate) fn is_injective(map: &[usize], target_len: usize) -> bool {
    let mut seen = vec![false; target_len];
    map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

pub(crate) fn is_surjective(map: &[usize], target_len: usize) -> bool {
    let mut seen = vec![false; target_len];
    for &y in map {
        seen[y] = true;
    }
    seen.into_iter().all(|s| s)
}

/// First failed preservation law, rendered for diagnostics.
fn hom_violation(s: &FiniteFrame, t: &FiniteFrame, map: &[usize]) -> Option<String> {
    if map[s.bottom()] != t.bottom() {
        return Some(format!(
            "⊥ = {} is sent to {}, not ⊥",
            s.label(s.bottom()),
            t.label(map[s.bottom()])
        ));
    }
    if map[s.top()] != t.top() {
        return Some(format!(
            "⊤ = {} is sent to {}, not ⊤",
            s.label(s.top()),
            t.label(map[s.top()])
        ));
    }
    for a in s.elements() {
        for b in a + 1..s.len() {
            if map[s.join(a, b)] != t.join(map[a], map[b]) {
                return Some(format!(
                    "join of {} and {} is not preserved",
                    s.label(a),
                    s.label(b)
                ));
            }
            if map[s.meet(a, b)] != t.meet(map[a], map[b]) {
                return Some(format!(
                    "meet of {} and {} is not preserved",
                    s.label(a),
                    s.label(b)
                ));
            }
        }
    }
    None
}

/// Every frame homomorphism `source → target`.
///
/// Elements are assigned along a linear extension. An element with two or
/// more lower covers is their join, so its image is forced; a join-irreducible
/// element ranges over the targets above the image of its unique lower cover.
/// Meet preservation against already assigned elements prunes each branch.
pub fn enumerate_homs(source: &Arc<FiniteFrame>, target: &Arc<FiniteFrame>) -> Vec<FrameHom> {
    let mut out = Vec::new();
    for_each_hom(source, target, &mut |map| {
        out.push(FrameHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map: map.to_vec(),
        });
        true
    });
    out
}

/// Visits every homomorphism as a raw assignment; the visitor returns
/// `false` to stop.
pub fn for_each_hom(
    source: &FiniteFrame,
    target: &FiniteFrame,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let order = source.linear_extension();
    let lower: Vec<Vec<usize>> = source.elements().map(|x| source.lower_covers(x)).collect();
    let mut map = vec![usize::MAX; source.len()];

    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        order: &[usize],
        lower: &[Vec<usize>],
        s: &FiniteFrame,
        t: &FiniteFrame,
        map: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == order.len() {
            if hom_violation(s, t, map).is_none() {
                return visit(map);
            }
            return true;
        }
        let x = order[k];
        let candidates: Vec<usize> = if x == s.bottom() {
            vec![t.bottom()]
        } else if lower[x].len() >= 2 {
            vec![t.join_all(lower[x].iter().map(|&c| map[c]))]
        } else {
            let base = map[lower[x][0]];
            t.elements()
                .filter(|&y| t.leq(base, y) && (x != s.top() || y == t.top()))
                .collect()
        };
        'cand: for y in candidates {
            if x == s.top() && y != t.top() {
                continue;
            }
            for &z in &order[..k] {
                let m = s.meet(x, z);
                if map[m] != t.meet(y, map[z]) {
                    continue 'cand;
                }
                let j = s.join(x, z);
                if map[j] != usize::MAX && map[j] != t.join(y, map[z]) {
                    continue 'cand;
                }
            }
            map[x] = y;
            let keep_going = go(k + 1, order, lower, s, t, map, visit);
            map[x] = usize::MAX;
            if !keep_going {
                return false;
            }
        }
        true
    }
    go(0, &order, &lower, source, target, &mut map, visit);
}

/// An order isomorphism `a → b` (hence a frame isomorphism), if one exists.
pub fn find_iso(a: &Arc<FiniteFrame>, b: &Arc<FiniteFrame>) -> Option<FrameHom> {
    if a.len() != b.len() {
        return None;
    }
    let mut ra: Vec<usize> = a.elements().map(|x| a.rank(x)).collect();
    let mut rb: Vec<usize> = b.elements().map(|x| b.rank(x)).collect();
    ra.sort_unstable();
    rb.sort_unstable();
    if ra != rb {
        return None;
    }
    let order = a.linear_extension();
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];

    fn go(
        k: usize,
        order: &[usize],
        a: &FiniteFrame,
        b: &FiniteFrame,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for y in b.elements() {
            if used[y] || b.rank(y) != a.rank(x) {
                continue;
            }
            let consistent = order[..k].iter().all(|&z| {
                a.leq(z, x) == b.leq(map[z], y) && a.leq(x, z) == b.leq(y, map[z])
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(k + 1, order, a, b, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }
    if go(0, &order, a, b, &mut map, &mut used) {
        Some(FrameHom::new_unchecked(Arc::clone(a), Arc::clone(b), map))
    } else {
        None
    }
}

/// Literal way-below: `a ≪ b` iff every `K ⊆ L` with `b ≤ ⋁K` has a finite
/// `K' ⊆ K` with `a ≤ ⋁K'`. Quantifies over all subsets, so the frame size
/// is capped at [`WAY_BELOW_MAX_ELEMENTS`].
pub fn way_below(l: &FiniteFrame, a: usize, b: usize) -> Result<bool> {
    if l.len() > WAY_BELOW_MAX_ELEMENTS {
        return Err(Error::size("way-below subset search", WAY_BELOW_MAX_ELEMENTS));
    }
    let join_of = |k: BitSet| l.join_all(k.iter());
    for k in BitSet::full(l.len()).subsets() {
        if !l.leq(b, join_of(k)) {
            continue;
        }
        if !k.subsets().any(|k2| l.leq(a, join_of(k2))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every element is the join of the elements way below it.
pub fn is_locally_compact(l: &FiniteFrame) -> Result<bool> {
    for a in l.elements() {
        let mut approx = l.bottom();
        for x in l.elements() {
            if way_below(l, x, a)? {
                approx = l.join(approx, x);
            }
        }
        if approx != a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The infinitary distributive law `a ∧ ⋁K = ⋁{a ∧ k : k ∈ K}` over every
/// subset `K`, for frames small enough to enumerate subsets.
pub fn infinite_distributivity_holds(l: &FiniteFrame) -> Result<bool> {
    if l.len() > 16 {
        return Err(Error::size("subset enumeration for the infinitary law", 16));
    }
    for k in BitSet::full(l.len()).subsets() {
        let jk = l.join_all(k.iter());
        for a in l.elements() {
            if l.meet(a, jk) != l.join_all(k.iter().map(|x| l.meet(a, x))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> Result<FiniteFrame> {
        let names = ["0", "a", "b", "c", "1"];
        let labels = Labels::new(names.iter().map(|s| s.to_string()).collect()).unwrap();
        FiniteFrame::from_order(labels, |x, y| x == y || x == 0 || y == 4)
    }

    #[test]
    fn chains_and_booleans_are_frames() {
        let c = FiniteFrame::chain_of(&["0", "m", "1"]).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.join(0, 1), 1);
        let b = FiniteFrame::boolean(2);
        assert_eq!(b.len(), 4);
        assert_eq!(b.label(b.bottom()), "{}");
        assert_eq!(b.label(b.top()), "{a0,a1}");
    }

    #[test]
    fn diamond_is_not_distributive() {
        match m3() {
            Err(Error::NotDistributive { a, lhs, rhs, .. }) => {
                assert_eq!(a, "a");
                assert_eq!(lhs, "a");
                assert_eq!(rhs, "0");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_join_is_reported() {
        let p = FinitePoset::antichain(2);
        assert!(matches!(
            FiniteFrame::from_poset(&p),
            Err(Error::NotLattice(..))
        ));
    }

    #[test]
    fn hom_examples() {
        let c = Arc::new(FiniteFrame::chain_of(&["0", "m", "1"]).unwrap());
        let two = Arc::new(FiniteFrame::two());
        assert!(FrameHom::new(Arc::clone(&c), Arc::clone(&two), vec![0, 0, 1]).is_ok());
        assert!(FrameHom::new(Arc::clone(&c), Arc::clone(&two), vec![0, 1, 1]).is_ok());
        assert!(FrameHom::new(Arc::clone(&c), Arc::clone(&two), vec![1, 1, 1]).is_err());
        assert_eq!(enumerate_homs(&c, &two).len(), 2);
        let from_two = FrameHom::from_two(Arc::clone(&c));
        assert_eq!(from_two.as_slice(), &[0, 2]);
    }

    #[test]
    fn hom_enumeration_matches_brute_force() {
        let frames = [
            FiniteFrame::two(),
            FiniteFrame::chain(3),
            FiniteFrame::chain(4),
            FiniteFrame::boolean(2),
        ];
        for s in &frames {
            for t in &frames {
                let (s, t) = (Arc::new(s.clone()), Arc::new(t.clone()));
                let fast = enumerate_homs(&s, &t).len();
                let mut brute = 0;
                let total = t.len().pow(s.len() as u32);
                for code in 0..total {
                    let mut c = code;
                    let map: Vec<usize> = (0..s.len())
                        .map(|_| {
                            let v = c % t.len();
                            c /= t.len();
                            v
                        })
                        .collect();
                    if FrameHom::new(Arc::clone(&s), Arc::clone(&t), map).is_ok() {
                        brute += 1;
                    }
                }
                assert_eq!(fast, brute);
            }
        }
    }

    #[test]
    fn way_below_collapses_to_order() {
        let c = FiniteFrame::chain_of(&["0", "m", "1"]).unwrap();
        assert!(way_below(&c, 1, 2).unwrap());
        assert!(!way_below(&c, 2, 1).unwrap());
        assert!(is_locally_compact(&c).unwrap());
        let b = FiniteFrame::boolean(2);
        for x in b.elements() {
            for y in b.elements() {
                assert_eq!(way_below(&b, x, y).unwrap(), b.leq(x, y));
            }
        }
    }

    #[test]
    fn iso_search() {
        let a = Arc::new(FiniteFrame::boolean(2));
        let b = Arc::new(
            FiniteFrame::from_poset(&FinitePoset::chain(2).product(&FinitePoset::chain(2)).unwrap())
                .unwrap(),
        );
        assert!(find_iso(&a, &b).is_some());
        assert!(find_iso(&a, &Arc::new(FiniteFrame::chain(4))).is_none());
    }
}
