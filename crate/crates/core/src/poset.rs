//! Finite posets, monotone maps and downset enumeration.
//!
//! The order is stored as a closure table: `up[i]` holds every `j` with
//! `i ≤ j` and `down[i]` every `j` with `j ≤ i`. All order queries inside the
//! exhaustive loops are single bit tests.

use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::labels::Labels;

/// Default cap on the number of downsets a single enumeration may produce.
pub const DEFAULT_DOWNSET_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Labels,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

impl FinitePoset {
    /// Builds a poset from labelled generating pairs `(a, b)` meaning `a ≤ b`.
    /// The reflexive-transitive closure is taken; antisymmetry is checked.
    pub fn new(elements: Vec<String>, leq: &[(String, String)]) -> Result<Self> {
        let labels = Labels::new(elements)?;
        let mut pairs = Vec::with_capacity(leq.len());
        for (a, b) in leq {
            pairs.push((labels.position(a)?, labels.position(b)?));
        }
        Self::from_pairs(labels, &pairs)
    }

    pub fn from_pairs(labels: Labels, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > BitSet::CAPACITY {
            return Err(Error::size("poset element count", BitSet::CAPACITY));
        }
        let mut up: Vec<BitSet> = (0..n).map(BitSet::singleton).collect();
        for &(a, b) in pairs {
            up[a].insert(b);
        }
        close_transitively(&mut up);
        Self::from_closed_up(labels, up)
    }

    /// Builds a poset from a relation predicate, taking its closure.
    pub fn from_relation(labels: Labels, rel: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && rel(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Self::from_pairs(labels, &pairs)
    }

    fn from_closed_up(labels: Labels, up: Vec<BitSet>) -> Result<Self> {
        let n = labels.len();
        let mut down = vec![BitSet::empty(); n];
        for (i, u) in up.iter().enumerate() {
            for j in u.iter() {
                down[j].insert(i);
            }
        }
        for i in 0..n {
            let both = up[i].intersection(down[i]);
            if let Some(j) = both.iter().find(|&j| j != i) {
                return Err(Error::Cycle(
                    labels.name(i).to_string(),
                    labels.name(j).to_string(),
                ));
            }
        }
        Ok(FinitePoset { labels, up, down })
    }

    /// The chain `0 < 1 < .. < n-1`, labelled by the digits.
    pub fn chain(n: usize) -> Self {
        let labels = Labels::new((0..n).map(|i| i.to_string()).collect()).unwrap();
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(labels, &pairs).unwrap()
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_pairs(Labels::numbered("a", n), &[]).unwrap()
    }

    /// Componentwise order on `self × other`; labels `(p,q)`, index
    /// `i * other.len() + j`.
    pub fn product(&self, other: &FinitePoset) -> Result<Self> {
        let (n, m) = (self.len(), other.len());
        if n * m > BitSet::CAPACITY {
            return Err(Error::size("product poset element count", BitSet::CAPACITY));
        }
        let mut names = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                names.push(format!("({},{})", self.label(i), other.label(j)));
            }
        }
        let labels = Labels::new(names)?;
        let mut up = vec![BitSet::empty(); n * m];
        for i in 0..n {
            for j in 0..m {
                let slot = &mut up[i * m + j];
                for i2 in self.up[i].iter() {
                    for j2 in other.up[j].iter() {
                        slot.insert(i2 * m + j2);
                    }
                }
            }
        }
        Self::from_closed_up(labels, up)
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

    pub fn position(&self, name: &str) -> Result<usize> {
        self.labels.position(name)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `{j : i ≤ j}`
    #[inline]
    pub fn up(&self, i: usize) -> BitSet {
        self.up[i]
    }

    /// `{j : j ≤ i}`
    #[inline]
    pub fn down(&self, i: usize) -> BitSet {
        self.down[i]
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// A linear extension: elements sorted by the size of their principal
    /// downset, ties broken by index. Deterministic.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.down[i].len(), i));
        order
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].iter() {
                if a == b {
                    continue;
                }
                let between = self.up[a].intersection(self.down[b]).len();
                if between == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_downset(&self, set: BitSet) -> bool {
        set.iter().all(|i| self.down[i].is_subset(set))
    }

    pub fn check_downset(&self, set: BitSet) -> Result<()> {
        for i in set.iter() {
            if let Some(j) = self.down[i].difference(set).first() {
                return Err(Error::NotDownset {
                    above: self.label(i).to_string(),
                    below: self.label(j).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn downclose(&self, set: BitSet) -> BitSet {
        set.iter()
            .fold(BitSet::empty(), |acc, i| acc.union(self.down[i]))
    }

    pub fn upclose(&self, set: BitSet) -> BitSet {
        set.iter().fold(BitSet::empty(), |acc, i| acc.union(self.up[i]))
    }

    /// Maximal members of `set`.
    pub fn maximal(&self, set: BitSet) -> BitSet {
        set.iter()
            .filter(|&i| self.up[i].intersection(set) == BitSet::singleton(i))
            .collect()
    }

    /// Every downset, ordered canonically (by cardinality, then bits).
    pub fn downsets(self: &Arc<Self>, cap: usize) -> Result<DownsetFamily> {
        let mut sets = enumerate_lower_sets(&self.down, cap)?;
        sets.sort_by(BitSet::canonical_cmp);
        Ok(DownsetFamily {
            base: Arc::clone(self),
            sets,
        })
    }
}

/// Warshall closure of an adjacency table given as successor sets.
pub(crate) fn close_transitively(succ: &mut [BitSet]) {
    let n = succ.len();
    for k in 0..n {
        let sk = succ[k];
        for row in succ.iter_mut() {
            if row.contains(k) {
                *row = row.union(sk);
            }
        }
    }
}

/// Enumerates every subset `S` with `x ∈ S ⇒ below[x] ⊆ S`, where `below[x]`
/// is reflexive and transitive (a preorder is allowed).
///
/// Points are grouped into equivalence classes and visited along a linear
/// extension of the class order, so a class can be added exactly when its
/// strict lower set is already present. Every branch ends in a valid set.
pub(crate) fn enumerate_lower_sets(below: &[BitSet], cap: usize) -> Result<Vec<BitSet>> {
    let n = below.len();
    let mut seen = BitSet::empty();
    let mut classes: Vec<(BitSet, BitSet)> = Vec::new();
    for x in 0..n {
        if seen.contains(x) {
            continue;
        }
        let class: BitSet = (0..n).filter(|&y| below[y] == below[x]).collect();
        seen = seen.union(class);
        classes.push((class, below[x].difference(class)));
    }
    classes.sort_by_key(|(c, strict)| (strict.len(), c.first()));

    let mut out = Vec::new();
    fn go(
        classes: &[(BitSet, BitSet)],
        k: usize,
        cur: BitSet,
        out: &mut Vec<BitSet>,
        cap: usize,
    ) -> Result<()> {
        if k == classes.len() {
            if out.len() >= cap {
                return Err(Error::size("downset enumeration", cap));
            }
            out.push(cur);
            return Ok(());
        }
        go(classes, k + 1, cur, out, cap)?;
        let (class, strict) = classes[k];
        if strict.is_subset(cur) {
            go(classes, k + 1, cur.union(class), out, cap)?;
        }
        Ok(())
    }
    go(&classes, 0, BitSet::empty(), &mut out, cap)?;
    Ok(out)
}

/// All downsets of a poset, as a family of subsets.
#[derive(Clone, Debug)]
pub struct DownsetFamily {
    pub base: Arc<FinitePoset>,
    pub sets: Vec<BitSet>,
}

impl DownsetFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// An order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Arc<FinitePoset>,
    target: Arc<FinitePoset>,
    map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Arc<FinitePoset>, target: Arc<FinitePoset>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::NotMonotone(format!(
                "assignment covers {} of {} elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.len()) {
            return Err(Error::NotMonotone(format!("target index {bad} out of range")));
        }
        for a in 0..source.len() {
            for b in source.up(a).iter() {
                if !target.leq(map[a], map[b]) {
                    return Err(Error::NotMonotone(format!(
                        "{} ≤ {} but {} ≰ {}",
                        source.label(a),
                        source.label(b),
                        target.label(map[a]),
                        target.label(map[b])
                    )));
                }
            }
        }
        Ok(MonotoneMap {
            source,
            target,
            map,
        })
    }

    pub fn identity(p: Arc<FinitePoset>) -> Self {
        let map = (0..p.len()).collect();
        MonotoneMap {
            source: Arc::clone(&p),
            target: p,
            map,
        }
    }

    pub fn source(&self) -> &Arc<FinitePoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePoset> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if self.target != other.source {
            return Err(Error::CarrierMismatch(
                "composed maps do not share an object".into(),
            ));
        }
        Ok(MonotoneMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            map: self.map.iter().map(|&i| other.map[i]).collect(),
        })
    }

    /// Every monotone map `source → target`, by backtracking along a linear
    /// extension of the source.
    pub fn enumerate(source: &Arc<FinitePoset>, target: &Arc<FinitePoset>) -> Vec<MonotoneMap> {
        let order = source.linear_extension();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; source.len()];
        fn go(
            k: usize,
            order: &[usize],
            s: &FinitePoset,
            t: &FinitePoset,
            map: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if k == order.len() {
                out.push(map.clone());
                return;
            }
            let x = order[k];
            // Everything strictly below x is already placed.
            let lower = s.down(x).difference(BitSet::singleton(x));
            let mut allowed = t.all();
            for y in lower.iter() {
                allowed = allowed.intersection(t.up(map[y]));
            }
            for v in allowed.iter() {
                map[x] = v;
                go(k + 1, order, s, t, map, out);
            }
            map[x] = usize::MAX;
        }
        let mut raw = Vec::new();
        go(0, &order, source, target, &mut map, &mut raw);
        out.extend(raw.into_iter().map(|map| MonotoneMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map,
        }));
        out
    }
}

/// `↓f(U)`: the downset generated by the pointwise image of a downset.
pub fn downset_image(f: &MonotoneMap, set: BitSet) -> Result<BitSet> {
    f.source.check_downset(set)?;
    let image: BitSet = set.iter().map(|i| f.map[i]).collect();
    Ok(f.target.downclose(image))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn two_element_chain() {
        let p = FinitePoset::new(labels(&["a", "b"]), &[pair("a", "b")]).unwrap();
        let (a, b) = (p.position("a").unwrap(), p.position("b").unwrap());
        assert!(p.leq(a, b));
        assert!(!p.leq(b, a));
        assert!(p.leq(a, a));
    }

    #[test]
    fn singleton_poset() {
        let p = FinitePoset::new(labels(&["a"]), &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq(0, 0));
    }

    #[test]
    fn cycle_is_rejected() {
        let err = FinitePoset::new(labels(&["a", "b"]), &[pair("a", "b"), pair("b", "a")]);
        assert!(matches!(err, Err(Error::Cycle(..))));
    }

    #[test]
    fn duplicate_label_is_rejected() {
        let err = FinitePoset::new(labels(&["a", "a"]), &[]);
        assert!(matches!(err, Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn transitive_closure_is_taken() {
        let p = FinitePoset::new(
            labels(&["a", "b", "c"]),
            &[pair("a", "b"), pair("b", "c")],
        )
        .unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn downset_counts() {
        let chain = Arc::new(FinitePoset::chain(2));
        let d = chain.downsets(DEFAULT_DOWNSET_CAP).unwrap();
        assert_eq!(
            d.sets,
            vec![
                BitSet::empty(),
                BitSet::singleton(0),
                BitSet::full(2)
            ]
        );
        let anti = Arc::new(FinitePoset::antichain(2));
        assert_eq!(anti.downsets(DEFAULT_DOWNSET_CAP).unwrap().len(), 4);
    }

    #[test]
    fn grid_downsets_match_brute_force() {
        let c = FinitePoset::chain(2);
        let grid = Arc::new(c.product(&c).unwrap());
        // Brute-force oracle: filter all 16 subsets by downward closure.
        let brute = (0u128..16)
            .map(BitSet::from_bits)
            .filter(|s| s.iter().all(|i| (0..4).all(|j| !grid.leq(j, i) || s.contains(j))))
            .count();
        assert_eq!(brute, 6);
        assert_eq!(grid.downsets(DEFAULT_DOWNSET_CAP).unwrap().len(), 6);
    }

    #[test]
    fn downset_cap_is_enforced() {
        let anti = Arc::new(FinitePoset::antichain(5));
        assert!(matches!(anti.downsets(31), Err(Error::Size { .. })));
        assert_eq!(anti.downsets(32).unwrap().len(), 32);
    }

    #[test]
    fn downset_image_examples() {
        let two = Arc::new(FinitePoset::chain(2));
        let id = MonotoneMap::identity(Arc::clone(&two));
        for u in two.downsets(16).unwrap().sets {
            assert_eq!(downset_image(&id, u).unwrap(), u);
        }

        // 0<1 into 0<m<1 sending 0↦0, 1↦1.
        let three = Arc::new(
            FinitePoset::new(
                labels(&["0", "m", "1"]),
                &[pair("0", "m"), pair("m", "1")],
            )
            .unwrap(),
        );
        let f = MonotoneMap::new(Arc::clone(&two), Arc::clone(&three), vec![0, 2]).unwrap();
        assert_eq!(downset_image(&f, BitSet::full(2)).unwrap(), BitSet::full(3));

        // Constant at top: the image of {bottom} is everything.
        let top = MonotoneMap::new(Arc::clone(&two), Arc::clone(&three), vec![2, 2]).unwrap();
        assert_eq!(
            downset_image(&top, BitSet::singleton(0)).unwrap(),
            BitSet::full(3)
        );

        assert!(matches!(
            downset_image(&f, BitSet::singleton(1)),
            Err(Error::NotDownset { .. })
        ));
    }

    #[test]
    fn non_monotone_assignment_is_rejected() {
        let two = Arc::new(FinitePoset::chain(2));
        assert!(MonotoneMap::new(Arc::clone(&two), Arc::clone(&two), vec![1, 0]).is_err());
        assert_eq!(MonotoneMap::enumerate(&two, &two).len(), 3);
    }
}
