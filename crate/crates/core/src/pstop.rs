//! Pseudotopologies on finite carriers.
//!
//! On a finite set every ultrafilter is principal, so a pseudotopology is
//! the table `lim[x] = lim(x•)` with `x ∈ lim[x]`. Every proper filter is
//! `↑A` for a unique nonempty `A`, and the ultrafilters finer than `↑A` are
//! the `x•` with `x ∈ A`.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::corpus::canonical_code;
use crate::error::{Error, Result};
use crate::labels::Labels;
use crate::space::FiniteSpace;

/// Carriers up to this size may be enumerated subset by subset.
pub const MAX_SUBSET_POINTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsSpace {
    labels: Labels,
    lim: Vec<BitSet>,
}

/// A filter on a finite carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    /// `↑A` for a nonempty base `A`.
    Principal(BitSet),
    /// The filter of all subsets.
    Improper,
}

impl Filter {
    pub fn ultra(x: usize) -> Self {
        Filter::Principal(BitSet::singleton(x))
    }

    /// `f_*F = ↑f(A)`
    pub fn push(self, f: &[usize]) -> Filter {
        match self {
            Filter::Principal(a) => Filter::Principal(a.iter().map(|x| f[x]).collect()),
            Filter::Improper => Filter::Improper,
        }
    }

    pub fn contains(self, set: BitSet) -> bool {
        match self {
            Filter::Principal(a) => a.is_subset(set),
            Filter::Improper => true,
        }
    }

    /// Every member of the filter, on a carrier of `n` points.
    pub fn members(self, n: usize) -> Vec<BitSet> {
        let all = BitSet::full(n);
        match self {
            Filter::Principal(a) => all
                .difference(a)
                .subsets()
                .map(|extra| extra.union(a))
                .collect(),
            Filter::Improper => all.subsets().collect(),
        }
    }
}

/// Every proper filter on `n` points, by base.
pub fn proper_filters(n: usize) -> impl Iterator<Item = Filter> {
    BitSet::full(n)
        .subsets()
        .filter(|a| !a.is_empty())
        .map(Filter::Principal)
}

/// Every filter on `n` points, the improper one last.
pub fn all_filters(n: usize) -> impl Iterator<Item = Filter> {
    proper_filters(n).chain(std::iter::once(Filter::Improper))
}

/// `true` iff the two collections mesh: every member of one meets every
/// member of the other.
pub fn mesh(a: &[BitSet], b: &[BitSet]) -> bool {
    a.iter().all(|&x| b.iter().all(|&y| !x.is_disjoint(y)))
}

/// `𝒜^# = {B : B ∩ A ≠ ∅ for all A ∈ 𝒜}`
pub fn grill(n: usize, collection: &[BitSet]) -> Vec<BitSet> {
    BitSet::full(n)
        .subsets()
        .filter(|&b| collection.iter().all(|&a| !a.is_disjoint(b)))
        .collect()
}

impl PsSpace {
    pub fn new(labels: Labels, lim: Vec<BitSet>) -> Result<Self> {
        let n = labels.len();
        if n > BitSet::CAPACITY {
            return Err(Error::size("pseudotopology point count", BitSet::CAPACITY));
        }
        if lim.len() != n {
            return Err(Error::InvalidPseudotopology(format!(
                "{} limit sets for {} points",
                lim.len(),
                n
            )));
        }
        for (x, &l) in lim.iter().enumerate() {
            if !l.is_subset(BitSet::full(n)) {
                return Err(Error::InvalidPseudotopology(format!(
                    "limit set of {} names unknown points",
                    labels.name(x)
                )));
            }
            if !l.contains(x) {
                return Err(Error::InvalidPseudotopology(format!(
                    "{x} ∉ lim({x}•)",
                    x = labels.name(x)
                )));
            }
        }
        Ok(PsSpace { labels, lim })
    }

    /// Only `x•` converges to `x`.
    pub fn discrete(labels: Labels) -> Self {
        let lim = (0..labels.len()).map(BitSet::singleton).collect();
        PsSpace { labels, lim }
    }

    /// Every ultrafilter converges to every point.
    pub fn indiscrete(labels: Labels) -> Self {
        let lim = vec![BitSet::full(labels.len()); labels.len()];
        PsSpace { labels, lim }
    }

    /// `ι(Y)`: the convergence of a topology, `lim(x•) = cl{x}`.
    pub fn from_topology(y: &FiniteSpace) -> Self {
        PsSpace {
            labels: y.labels().clone(),
            lim: y.below_table(),
        }
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

    /// `lim(x•)`
    #[inline]
    pub fn lim(&self, x: usize) -> BitSet {
        self.lim[x]
    }

    pub fn lim_table(&self) -> &[BitSet] {
        &self.lim
    }

    /// `lim ↑A = ⋂_{x ∈ A} lim(x•)`; the improper filter converges to every
    /// point.
    pub fn lim_filter(&self, f: Filter) -> BitSet {
        match f {
            Filter::Principal(a) => a.iter().fold(self.all(), |acc, x| acc.intersection(self.lim[x])),
            Filter::Improper => self.all(),
        }
    }

    /// `self` is finer than `other` (same carrier): fewer convergent pairs.
    pub fn finer_than(&self, other: &PsSpace) -> bool {
        self.lim.iter().zip(&other.lim).all(|(a, b)| a.is_subset(*b))
    }

    /// Every ultrafilter converges to at most one point.
    pub fn is_hausdorff(&self) -> bool {
        self.lim.iter().all(|l| l.len() <= 1)
    }

    /// A topology's convergence: equal to `ι(τ self)`.
    pub fn is_topological(&self) -> bool {
        *self == PsSpace::from_topology(&self.top_modification())
    }

    /// Topological modification. `O` is open iff `lim(x•) ∩ O ≠ ∅` implies
    /// `x ∈ O`, i.e. `O` is an up-set of the preorder generated by
    /// `y ≤ x` for `y ∈ lim(x•)`.
    pub fn top_modification(&self) -> FiniteSpace {
        let n = self.len();
        let mut above = vec![BitSet::empty(); n];
        for x in 0..n {
            for y in self.lim[x].iter() {
                above[y].insert(x);
            }
        }
        FiniteSpace::from_preorder(self.labels.clone(), above).expect("table is well formed")
    }

    /// The open sets by testing the defining criterion on every subset.
    pub fn open_sets_literal(&self) -> Result<Vec<BitSet>> {
        if self.len() > MAX_SUBSET_POINTS {
            return Err(Error::size("subset enumeration", MAX_SUBSET_POINTS));
        }
        let mut out: Vec<BitSet> = self
            .all()
            .subsets()
            .filter(|&o| (0..self.len()).all(|x| self.lim[x].is_disjoint(o) || o.contains(x)))
            .collect();
        out.sort_by(BitSet::canonical_cmp);
        Ok(out)
    }

    /// `ξ|A`: `lim(a•) ∩ A`, points keep their labels.
    pub fn subspace(&self, a: BitSet) -> Result<(PsSpace, Vec<usize>)> {
        if a.is_empty() {
            return Err(Error::EmptySubspace);
        }
        let members: Vec<usize> = a.iter().collect();
        let labels = Labels::new(members.iter().map(|&x| self.label(x).to_string()).collect())?;
        let lim = members
            .iter()
            .map(|&x| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(_, &y)| self.lim[x].contains(y))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Ok((PsSpace { labels, lim }, members))
    }

    /// Pointwise union of limit sets: the infimum (coarser of the two).
    pub fn meet(&self, other: &PsSpace) -> Result<PsSpace> {
        self.same_carrier(other)?;
        let lim = self.lim.iter().zip(&other.lim).map(|(a, b)| a.union(*b)).collect();
        Ok(PsSpace {
            labels: self.labels.clone(),
            lim,
        })
    }

    /// Pointwise intersection of limit sets: the supremum (finer of the two).
    pub fn join(&self, other: &PsSpace) -> Result<PsSpace> {
        self.same_carrier(other)?;
        let lim = self
            .lim
            .iter()
            .zip(&other.lim)
            .enumerate()
            .map(|(x, (a, b))| a.intersection(*b).with(x))
            .collect();
        Ok(PsSpace {
            labels: self.labels.clone(),
            lim,
        })
    }

    fn same_carrier(&self, other: &PsSpace) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::CarrierMismatch(
                "pseudotopologies live on different carriers".into(),
            ));
        }
        Ok(())
    }

    /// Union of the limits of all proper filters meshing `collection`,
    /// evaluated literally from the filters' members.
    pub fn adherence(&self, collection: &[BitSet]) -> Result<BitSet> {
        if self.len() > MAX_SUBSET_POINTS {
            return Err(Error::size("filter enumeration", MAX_SUBSET_POINTS));
        }
        let n = self.len();
        Ok(proper_filters(n)
            .filter(|f| mesh(&f.members(n), collection))
            .fold(BitSet::empty(), |acc, f| acc.union(self.lim_filter(f))))
    }

    /// `A` is compact at `B`: every proper filter `F` with `A ∈ F^#` has
    /// `adh F ∩ B ≠ ∅`.
    pub fn compact_at(&self, a: BitSet, b: BitSet) -> Result<bool> {
        let n = self.len();
        for f in proper_filters(n) {
            let members = f.members(n);
            if members.iter().all(|&m| !m.is_disjoint(a)) && self.adherence(&members)?.is_disjoint(b) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_compact(&self) -> Result<bool> {
        self.compact_at(self.all(), self.all())
    }

    /// Same structure under new labels.
    pub fn relabel(&self, labels: Labels) -> Result<PsSpace> {
        if labels.len() != self.len() {
            return Err(Error::CarrierMismatch("relabelling changes the point count".into()));
        }
        Ok(PsSpace {
            labels,
            lim: self.lim.clone(),
        })
    }
}

/// First filter `F` with `f(lim F) ⊄ lim f_*F`, over all filters.
pub fn continuity_witness(f: &[usize], xi: &PsSpace, zeta: &PsSpace) -> Result<Option<Filter>> {
    check_map(f, xi, zeta)?;
    Ok(all_filters(xi.len()).find(|&flt| {
        let image: BitSet = xi.lim_filter(flt).iter().map(|x| f[x]).collect();
        !image.is_subset(zeta.lim_filter(flt.push(f)))
    }))
}

/// Continuity tested on principal ultrafilters only.
pub fn is_continuous(f: &[usize], xi: &PsSpace, zeta: &PsSpace) -> bool {
    (0..xi.len()).all(|x| xi.lim[x].iter().all(|y| zeta.lim[f[x]].contains(f[y])))
}

fn check_map(f: &[usize], xi: &PsSpace, zeta: &PsSpace) -> Result<()> {
    if f.len() != xi.len() || f.iter().any(|&y| y >= zeta.len()) {
        return Err(Error::CarrierMismatch("point map does not fit the carriers".into()));
    }
    Ok(())
}

/// The finest pseudotopology on `target` making every `(X_k, f_k)`
/// continuous: `lim(y•) = {y} ∪ ⋃ f_k(lim(x•))` over `f_k(x) = y`.
pub fn final_structure(target: Labels, family: &[(&PsSpace, &[usize])]) -> Result<PsSpace> {
    let n = target.len();
    let mut lim: Vec<BitSet> = (0..n).map(BitSet::singleton).collect();
    for (xi, f) in family {
        if f.len() != xi.len() || f.iter().any(|&y| y >= n) {
            return Err(Error::CarrierMismatch("map does not fit the final carrier".into()));
        }
        for x in 0..xi.len() {
            let image: BitSet = xi.lim(x).iter().map(|p| f[p]).collect();
            lim[f[x]] = lim[f[x]].union(image);
        }
    }
    PsSpace::new(target, lim)
}

/// The coarsest pseudotopology on `source` making every `(g_k, Y_k)`
/// continuous: `x' ∈ lim(x•)` iff `g_k(x') ∈ lim((g_k x)•)` for all `k`.
pub fn initial_structure(source: Labels, family: &[(&[usize], &PsSpace)]) -> Result<PsSpace> {
    let n = source.len();
    for (g, zeta) in family {
        if g.len() != n || g.iter().any(|&y| y >= zeta.len()) {
            return Err(Error::CarrierMismatch("map does not fit the initial carrier".into()));
        }
    }
    let lim = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&x2| family.iter().all(|(g, zeta)| zeta.lim(g[x]).contains(g[x2])))
                .collect()
        })
        .collect();
    PsSpace::new(source, lim)
}

/// Every pseudotopology on `n` points labelled `1, …, n`.
pub fn all_psspaces(n: usize) -> Vec<PsSpace> {
    assert!(n <= 5, "labelled pseudotopology enumeration is limited to 5 points");
    let labels = Labels::new((1..=n).map(|i| i.to_string()).collect()).unwrap();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|code| {
            let mut lim: Vec<BitSet> = (0..n).map(BitSet::singleton).collect();
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if code >> k & 1 == 1 {
                    lim[i].insert(j);
                }
            }
            PsSpace {
                labels: labels.clone(),
                lim,
            }
        })
        .collect()
}

/// One pseudotopology per isomorphism class on `n` points.
pub fn psspaces_up_to_iso(n: usize) -> Vec<PsSpace> {
    let mut seen = BTreeSet::new();
    all_psspaces(n)
        .into_iter()
        .filter(|s| seen.insert(canonical_code(n, &|a, b| s.lim[a].contains(b))))
        .collect()
}

/// Every point map `0..n → 0..m`.
pub fn all_point_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % m;
                    code /= m;
                    v
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Labels {
        Labels::new((1..=n).map(|i| i.to_string()).collect()).unwrap()
    }

    fn set(xs: &[usize]) -> BitSet {
        xs.iter().copied().collect()
    }

    /// X = {1,2}, lim(1•) = {1}, lim(2•) = {1,2}.
    fn sierpinski_like() -> PsSpace {
        PsSpace::new(labels(2), vec![set(&[0]), set(&[0, 1])]).unwrap()
    }

    #[test]
    fn reflexivity_is_enforced() {
        assert!(PsSpace::new(labels(2), vec![set(&[1]), set(&[1])]).is_err());
    }

    #[test]
    fn limits_of_filters() {
        let xi = sierpinski_like();
        assert_eq!(xi.lim_filter(Filter::ultra(1)), set(&[0, 1]));
        assert_eq!(xi.lim_filter(Filter::Principal(set(&[0, 1]))), set(&[0]));
        assert_eq!(xi.lim_filter(Filter::Improper), set(&[0, 1]));
        let ind = PsSpace::indiscrete(labels(3));
        assert_eq!(ind.lim_filter(Filter::Principal(ind.all())), ind.all());
    }

    #[test]
    fn continuity_examples() {
        let xi = sierpinski_like();
        let id = [0, 1];
        assert_eq!(continuity_witness(&id, &xi, &xi).unwrap(), None);
        assert_eq!(continuity_witness(&[1, 1], &xi, &xi).unwrap(), None);
        let disc = PsSpace::discrete(labels(2));
        assert_eq!(continuity_witness(&id, &disc, &xi).unwrap(), None);
        assert!(continuity_witness(&id, &xi, &disc).unwrap().is_some());
    }

    #[test]
    fn lattice_examples() {
        let disc = PsSpace::discrete(labels(3));
        let ind = PsSpace::indiscrete(labels(3));
        assert_eq!(disc.meet(&disc).unwrap(), disc);
        let xi = PsSpace::new(labels(3), vec![set(&[0, 2]), set(&[1]), set(&[2])]).unwrap();
        assert_eq!(xi.join(&ind).unwrap(), xi);
        let pair = PsSpace::discrete(labels(2));
        let fold = [0usize, 0];
        let fin = final_structure(labels(1), &[(&pair, &fold)]).unwrap();
        assert_eq!(fin.lim(0), set(&[0]));
    }

    #[test]
    fn modification_examples() {
        let xi = sierpinski_like();
        let t = xi.top_modification();
        assert_eq!(t.opens(16).unwrap(), vec![BitSet::empty(), set(&[1]), set(&[0, 1])]);
        assert_eq!(xi.open_sets_literal().unwrap(), t.opens(16).unwrap());
        let disc = PsSpace::discrete(labels(3)).top_modification();
        assert_eq!(disc.opens(64).unwrap().len(), 8);
        let ind = PsSpace::indiscrete(labels(3)).top_modification();
        assert_eq!(ind.opens(64).unwrap().len(), 2);
    }

    #[test]
    fn subspace_examples() {
        let xi = sierpinski_like();
        assert_eq!(xi.subspace(xi.all()).unwrap().0, xi);
        let (s, _) = xi.subspace(set(&[1])).unwrap();
        assert_eq!(s.lim(0), set(&[0]));
        assert!(matches!(xi.subspace(BitSet::empty()), Err(Error::EmptySubspace)));
    }

    #[test]
    fn grill_and_adherence() {
        let g = grill(3, &[set(&[0, 1])]);
        assert!(g.iter().all(|b| !b.is_disjoint(set(&[0, 1]))));
        assert_eq!(g.len(), 6);
        let xi = sierpinski_like();
        assert_eq!(xi.adherence(&[xi.all()]).unwrap(), xi.all());
        assert!(xi.is_compact().unwrap());
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(all_psspaces(3).len(), 64);
        assert_eq!(psspaces_up_to_iso(2).len(), 3);
        // Reflexive digraphs on 3 unlabelled vertices.
        assert_eq!(psspaces_up_to_iso(3).len(), 16);
    }
}
