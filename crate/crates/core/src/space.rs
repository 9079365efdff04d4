//! Finite topological spaces.
//!
//! A finite topology is closed under arbitrary intersections, so it is
//! determined by the minimal open neighbourhood `nbhd[x]` of each point. The
//! specialization preorder is `x ≤ y ⇔ y ∈ nbhd[x]`; opens are exactly its
//! up-sets and closed sets its down-sets.

use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::labels::Labels;
use crate::poset::{close_transitively, enumerate_lower_sets, FinitePoset};

/// Cap on the number of opens materialized by [`FiniteSpace::opens`].
pub const DEFAULT_OPEN_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Labels,
    nbhd: Vec<BitSet>,
}

impl FiniteSpace {
    /// Validates an explicit family of opens.
    pub fn from_opens(labels: Labels, opens: &[BitSet]) -> Result<Self> {
        let n = labels.len();
        if n > BitSet::CAPACITY {
            return Err(Error::size("space point count", BitSet::CAPACITY));
        }
        let all = BitSet::full(n);
        let mut family: Vec<BitSet> = opens.to_vec();
        family.sort();
        family.dedup();
        if let Some(bad) = family.iter().find(|u| !u.is_subset(all)) {
            return Err(Error::InvalidSpace(format!("open {bad:?} is not a set of points")));
        }
        if !family.contains(&BitSet::empty()) {
            return Err(Error::InvalidSpace("the empty set must be open".into()));
        }
        if !family.contains(&all) {
            return Err(Error::InvalidSpace("the whole space must be open".into()));
        }
        for (i, &u) in family.iter().enumerate() {
            for &v in &family[i + 1..] {
                if family.binary_search(&u.union(v)).is_err() {
                    return Err(Error::InvalidSpace(format!(
                        "{} ∪ {} is not open",
                        labels.render_set(u),
                        labels.render_set(v)
                    )));
                }
                if family.binary_search(&u.intersection(v)).is_err() {
                    return Err(Error::InvalidSpace(format!(
                        "{} ∩ {} is not open",
                        labels.render_set(u),
                        labels.render_set(v)
                    )));
                }
            }
        }
        let nbhd = (0..n)
            .map(|x| {
                family
                    .iter()
                    .filter(|u| u.contains(x))
                    .fold(all, |acc, &u| acc.intersection(u))
            })
            .collect();
        Ok(FiniteSpace { labels, nbhd })
    }

    /// A space from its specialization preorder, given as up-sets
    /// (`above[x] = {y : x ≤ y}`); the reflexive-transitive closure is taken.
    pub fn from_preorder(labels: Labels, above: Vec<BitSet>) -> Result<Self> {
        let n = labels.len();
        if n > BitSet::CAPACITY {
            return Err(Error::size("space point count", BitSet::CAPACITY));
        }
        if above.len() != n {
            return Err(Error::InvalidSpace("preorder table has the wrong length".into()));
        }
        let mut nbhd = above;
        for (x, row) in nbhd.iter_mut().enumerate() {
            if !row.is_subset(BitSet::full(n)) {
                return Err(Error::InvalidSpace("preorder refers to unknown points".into()));
            }
            row.insert(x);
        }
        close_transitively(&mut nbhd);
        Ok(FiniteSpace { labels, nbhd })
    }

    /// The Alexandrov space of a poset: opens are the up-sets.
    pub fn alexandrov(p: &FinitePoset) -> Self {
        let nbhd = (0..p.len()).map(|i| p.up(i)).collect();
        FiniteSpace {
            labels: p.labels().clone(),
            nbhd,
        }
    }

    pub fn empty() -> Self {
        FiniteSpace {
            labels: Labels::default(),
            nbhd: Vec::new(),
        }
    }

    pub fn point() -> Self {
        Self::discrete(Labels::new(vec!["*".into()]).unwrap())
    }

    pub fn discrete(labels: Labels) -> Self {
        let nbhd = (0..labels.len()).map(BitSet::singleton).collect();
        FiniteSpace { labels, nbhd }
    }

    pub fn indiscrete(labels: Labels) -> Self {
        let all = BitSet::full(labels.len());
        let nbhd = vec![all; labels.len()];
        FiniteSpace { labels, nbhd }
    }

    /// Points `x`, `y` with opens `∅, {y}, {x,y}`.
    pub fn sierpinski() -> Self {
        let labels = Labels::new(vec!["x".into(), "y".into()]).unwrap();
        Self::from_opens(
            labels,
            &[BitSet::empty(), BitSet::singleton(1), BitSet::full(2)],
        )
        .unwrap()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> &str {
        self.labels.name(i)
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// Minimal open neighbourhood of `x`.
    #[inline]
    pub fn nbhd(&self, x: usize) -> BitSet {
        self.nbhd[x]
    }

    /// Specialization preorder: `x ≤ y` iff `y` lies in every open around `x`.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.nbhd[x].contains(y)
    }

    /// Closure of a single point, `{y : y ≤ x}`.
    pub fn point_closure(&self, x: usize) -> BitSet {
        (0..self.len()).filter(|&y| self.nbhd[y].contains(x)).collect()
    }

    pub fn below_table(&self) -> Vec<BitSet> {
        (0..self.len()).map(|x| self.point_closure(x)).collect()
    }

    pub fn is_open(&self, set: BitSet) -> bool {
        set.iter().all(|x| self.nbhd[x].is_subset(set))
    }

    pub fn is_closed(&self, set: BitSet) -> bool {
        self.is_open(set.complement(self.len()))
    }

    pub fn closure(&self, set: BitSet) -> BitSet {
        set.iter()
            .fold(BitSet::empty(), |acc, x| acc.union(self.point_closure(x)))
    }

    pub fn interior_hull(&self, set: BitSet) -> BitSet {
        set.iter().fold(BitSet::empty(), |acc, x| acc.union(self.nbhd[x]))
    }

    /// All opens in canonical order.
    pub fn opens(&self, cap: usize) -> Result<Vec<BitSet>> {
        let mut sets = enumerate_lower_sets(&self.nbhd, cap)?;
        sets.sort_by(BitSet::canonical_cmp);
        Ok(sets)
    }

    /// All closed sets in canonical order.
    pub fn closed_sets(&self, cap: usize) -> Result<Vec<BitSet>> {
        let mut sets = enumerate_lower_sets(&self.below_table(), cap)?;
        sets.sort_by(BitSet::canonical_cmp);
        Ok(sets)
    }

    pub fn is_t0(&self) -> bool {
        (0..self.len()).all(|x| (x + 1..self.len()).all(|y| self.nbhd[x] != self.nbhd[y]))
    }

    /// Hausdorff: distinct points have disjoint neighbourhoods.
    pub fn is_hausdorff(&self) -> bool {
        (0..self.len())
            .all(|x| (x + 1..self.len()).all(|y| self.nbhd[x].is_disjoint(self.nbhd[y])))
    }

    /// Subspace topology on `set`; points keep their labels and are listed in
    /// increasing index order. Returns the space and the inclusion indices.
    pub fn subspace(&self, set: BitSet) -> (FiniteSpace, Vec<usize>) {
        let members: Vec<usize> = set.iter().collect();
        let labels = Labels::new(members.iter().map(|&x| self.label(x).to_string()).collect())
            .expect("subspace labels are distinct");
        let nbhd = members
            .iter()
            .map(|&x| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(_, &y)| self.nbhd[x].contains(y))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        (FiniteSpace { labels, nbhd }, members)
    }

    /// Product topology; points `(x,y)` at index `i * other.len() + j`.
    pub fn product(&self, other: &FiniteSpace) -> Result<FiniteSpace> {
        let (n, m) = (self.len(), other.len());
        if n * m > BitSet::CAPACITY {
            return Err(Error::size("product space point count", BitSet::CAPACITY));
        }
        let mut names = Vec::with_capacity(n * m);
        let mut nbhd = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                names.push(format!("({},{})", self.label(i), other.label(j)));
                nbhd.push(
                    self.nbhd[i]
                        .iter()
                        .flat_map(|i2| other.nbhd[j].iter().map(move |j2| i2 * m + j2))
                        .collect(),
                );
            }
        }
        Ok(FiniteSpace {
            labels: Labels::new(names)?,
            nbhd,
        })
    }

    /// Same points and topology under new labels.
    pub fn relabel(&self, labels: Labels) -> Result<FiniteSpace> {
        if labels.len() != self.len() {
            return Err(Error::CarrierMismatch("relabelling changes the point count".into()));
        }
        Ok(FiniteSpace {
            labels,
            nbhd: self.nbhd.clone(),
        })
    }
}

/// A continuous map of finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousMap {
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
    map: Vec<usize>,
}

impl ContinuousMap {
    /// Validates continuity: the preimage of every basic open `nbhd(y)` is
    /// open. Basic opens generate the topology, so this is the definition.
    pub fn new(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::NotContinuous(format!(
                "assignment covers {} of {} points",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.len()) {
            return Err(Error::NotContinuous(format!("target index {bad} out of range")));
        }
        for y in 0..target.len() {
            let pre = preimage(&map, target.nbhd(y));
            if !source.is_open(pre) {
                return Err(Error::NotContinuous(format!(
                    "preimage of open {} is {}, not open",
                    target.labels().render_set(target.nbhd(y)),
                    source.labels().render_set(pre)
                )));
            }
        }
        Ok(ContinuousMap {
            source,
            target,
            map,
        })
    }

    pub fn identity(x: Arc<FiniteSpace>) -> Self {
        let map = (0..x.len()).collect();
        ContinuousMap {
            source: Arc::clone(&x),
            target: x,
            map,
        }
    }

    pub fn source(&self) -> &Arc<FiniteSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSpace> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, set: BitSet) -> BitSet {
        set.iter().map(|x| self.map[x]).collect()
    }

    pub fn preimage(&self, set: BitSet) -> BitSet {
        preimage(&self.map, set)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &ContinuousMap) -> Result<ContinuousMap> {
        if *self.target != *other.source {
            return Err(Error::CarrierMismatch(
                "composed maps do not share an object".into(),
            ));
        }
        Ok(ContinuousMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BitSet::empty();
        self.map.iter().all(|&y| {
            let fresh = !seen.contains(y);
            seen.insert(y);
            fresh
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.source.all()) == self.target.all()
    }

    /// Homeomorphism: bijective with continuous inverse.
    pub fn is_homeomorphism(&self) -> bool {
        self.is_injective()
            && self.is_surjective()
            && (0..self.source.len()).all(|x| {
                (0..self.source.len())
                    .all(|y| self.source.leq(x, y) == self.target.leq(self.map[x], self.map[y]))
            })
    }

    /// Every continuous map `source → target`.
    pub fn enumerate(source: &Arc<FiniteSpace>, target: &Arc<FiniteSpace>) -> Vec<ContinuousMap> {
        let allowed = vec![target.all(); source.len()];
        enumerate_constrained(source, target, &allowed, &mut |_| true)
            .into_iter()
            .map(|map| ContinuousMap {
                source: Arc::clone(source),
                target: Arc::clone(target),
                map,
            })
            .collect()
    }
}

pub(crate) fn preimage(map: &[usize], set: BitSet) -> BitSet {
    map.iter()
        .enumerate()
        .filter(|(_, &y)| set.contains(y))
        .map(|(x, _)| x)
        .collect()
}

/// Backtracking search for monotone (= continuous) assignments with
/// `map[x] ∈ allowed[x]`. `visit` receives each complete assignment and
/// returns `false` to stop early; the collected maps are returned.
pub(crate) fn enumerate_constrained(
    source: &FiniteSpace,
    target: &FiniteSpace,
    allowed: &[BitSet],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search_constrained(source, target, allowed, &mut |m| {
        out.push(m.to_vec());
        visit(m)
    });
    out
}

/// Visits monotone assignments with `map[x] ∈ allowed[x]` without
/// collecting them. Returns `false` if the visitor stopped the search.
pub(crate) fn search_constrained(
    source: &FiniteSpace,
    target: &FiniteSpace,
    allowed: &[BitSet],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = source.len();
    // Most constrained points first keeps the branching low.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (allowed[x].len(), x));
    let mut map = vec![usize::MAX; n];
    let mut placed = BitSet::empty();

    fn go(
        k: usize,
        order: &[usize],
        source: &FiniteSpace,
        target: &FiniteSpace,
        allowed: &[BitSet],
        map: &mut [usize],
        placed: &mut BitSet,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == order.len() {
            return visit(map);
        }
        let x = order[k];
        let mut cand = allowed[x];
        for y in placed.iter() {
            if source.leq(y, x) {
                cand = cand.intersection(target.nbhd(map[y]));
            }
            if source.leq(x, y) {
                cand = cand.intersection(
                    (0..target.len())
                        .filter(|&t| target.leq(t, map[y]))
                        .collect(),
                );
            }
        }
        for v in cand.iter() {
            map[x] = v;
            placed.insert(x);
            let keep_going = go(k + 1, order, source, target, allowed, map, placed, visit);
            placed.remove(x);
            if !keep_going {
                map[x] = usize::MAX;
                return false;
            }
        }
        map[x] = usize::MAX;
        true
    }
    go(0, &order, source, target, allowed, &mut map, &mut placed, visit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sierpinski_structure() {
        let s = FiniteSpace::sierpinski();
        assert!(s.leq(0, 1));
        assert!(!s.leq(1, 0));
        assert_eq!(s.opens(16).unwrap().len(), 3);
        assert_eq!(
            s.closed_sets(16).unwrap(),
            vec![BitSet::empty(), BitSet::singleton(0), BitSet::full(2)]
        );
        assert!(s.is_t0());
        assert!(!s.is_hausdorff());
    }

    #[test]
    fn invalid_opens_rejected() {
        let l = Labels::numbered("p", 2);
        assert!(FiniteSpace::from_opens(l.clone(), &[BitSet::full(2)]).is_err());
        assert!(FiniteSpace::from_opens(
            Labels::numbered("p", 3),
            &[
                BitSet::empty(),
                BitSet::singleton(0),
                BitSet::singleton(1),
                BitSet::full(3)
            ]
        )
        .is_err());
    }

    #[test]
    fn continuity_matches_monotonicity() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let maps = ContinuousMap::enumerate(&s, &s);
        assert_eq!(maps.len(), 3);
        assert!(ContinuousMap::new(Arc::clone(&s), Arc::clone(&s), vec![1, 0]).is_err());
    }

    #[test]
    fn opens_of_preorder_spaces() {
        let ind = FiniteSpace::indiscrete(Labels::numbered("p", 3));
        assert_eq!(ind.opens(16).unwrap().len(), 2);
        let disc = FiniteSpace::discrete(Labels::numbered("p", 3));
        assert_eq!(disc.opens(16).unwrap().len(), 8);
    }
}
