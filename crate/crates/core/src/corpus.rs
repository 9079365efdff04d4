//! Exhaustive corpora of small structures, optionally deduplicated up to
//! isomorphism by canonical relabelling.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::Error;
use crate::frame::FiniteFrame;
use crate::labels::Labels;
use crate::poset::{close_transitively, FinitePoset};
use crate::space::FiniteSpace;

/// Largest carrier for which canonical forms are computed by trying every
/// permutation.
pub const CANONICAL_MAX: usize = 8;

/// Calls `visit` with every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, visit: &mut dyn FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            visit(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Smallest encoding of a binary relation over all relabellings. Equal codes
/// mean isomorphic relations.
pub fn canonical_code(n: usize, rel: &dyn Fn(usize, usize) -> bool) -> Vec<u64> {
    assert!(n <= CANONICAL_MAX, "canonical form limited to {CANONICAL_MAX} points");
    let mut best: Option<Vec<u64>> = None;
    for_each_permutation(n, &mut |p| {
        let mut code = vec![0u64; (n * n).div_ceil(64).max(1)];
        for i in 0..n {
            for j in 0..n {
                if rel(p[i], p[j]) {
                    let bit = i * n + j;
                    code[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    });
    best.unwrap_or_default()
}

/// Every reflexive transitive relation on `n` points, as tables
/// `above[x] = {y : x ≤ y}`.
pub fn preorders(n: usize) -> Vec<Vec<BitSet>> {
    assert!(n <= 5, "labelled preorder enumeration is limited to 5 points");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for code in 0u64..(1 << pairs.len()) {
        let mut above: Vec<BitSet> = (0..n).map(BitSet::singleton).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if code >> k & 1 == 1 {
                above[i].insert(j);
            }
        }
        let before = above.clone();
        close_transitively(&mut above);
        if above == before {
            out.push(above);
        }
    }
    out
}

/// Every topology on `n` points labelled `p0, p1, …`.
pub fn spaces(n: usize) -> Vec<FiniteSpace> {
    preorders(n)
        .into_iter()
        .map(|above| FiniteSpace::from_preorder(Labels::numbered("p", n), above).unwrap())
        .collect()
}

/// One representative per homeomorphism class of topologies on `n` points.
pub fn spaces_up_to_iso(n: usize) -> Vec<FiniteSpace> {
    let mut seen = BTreeSet::new();
    spaces(n)
        .into_iter()
        .filter(|x| seen.insert(canonical_code(n, &|a, b| x.leq(a, b))))
        .collect()
}

/// All topologies on up to `max` points, up to homeomorphism, the empty
/// space included.
pub fn spaces_up_to(max: usize) -> Vec<Arc<FiniteSpace>> {
    (0..=max)
        .flat_map(spaces_up_to_iso)
        .map(Arc::new)
        .collect()
}

/// Partial orders on `n` points whose order is contained in the numeric
/// order. Every finite poset is isomorphic to one of these.
fn natural_orders(n: usize) -> Vec<Vec<BitSet>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for code in 0u64..(1 << pairs.len()) {
        let mut above: Vec<BitSet> = (0..n).map(BitSet::singleton).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if code >> k & 1 == 1 {
                above[i].insert(j);
            }
        }
        let before = above.clone();
        close_transitively(&mut above);
        if above == before {
            out.push(above);
        }
    }
    out
}

/// One representative per isomorphism class of posets on `n` elements,
/// labelled `0, 1, …` along a linear extension.
pub fn posets_up_to_iso(n: usize) -> Vec<FinitePoset> {
    let mut seen = BTreeSet::new();
    let labels = Labels::new((0..n).map(|i| i.to_string()).collect()).unwrap();
    natural_orders(n)
        .into_iter()
        .filter(|above| seen.insert(canonical_code(n, &|a, b| above[a].contains(b))))
        .map(|above| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| above[i].iter().map(move |j| (i, j)))
                .collect();
            FinitePoset::from_pairs(labels.clone(), &pairs).unwrap()
        })
        .collect()
}

/// Outcome of trying to build a frame from a bounded poset.
pub struct LatticeCandidate {
    pub poset: FinitePoset,
    pub is_lattice: bool,
    pub frame: Option<FiniteFrame>,
}

/// Every lattice with `n` elements up to isomorphism, each with its frame
/// when distributive. Lattices are bounded, so they are `0 ⊕ Q ⊕ 1` for a
/// poset `Q` on `n - 2` elements.
pub fn lattices(n: usize) -> Vec<LatticeCandidate> {
    let mut out = Vec::new();
    let bounded: Vec<FinitePoset> = match n {
        0 => Vec::new(),
        1 => vec![FinitePoset::chain(1)],
        _ => posets_up_to_iso(n - 2)
            .into_iter()
            .map(|q| {
                let labels = Labels::new((0..n).map(|i| i.to_string()).collect()).unwrap();
                FinitePoset::from_relation(labels, |a, b| {
                    a == 0 || b == n - 1 || (a > 0 && b > 0 && a < n - 1 && b < n - 1 && q.leq(a - 1, b - 1))
                })
                .unwrap()
            })
            .collect(),
    };
    for p in bounded {
        match FiniteFrame::from_poset(&p) {
            Ok(f) => out.push(LatticeCandidate {
                poset: p,
                is_lattice: true,
                frame: Some(f),
            }),
            Err(Error::NotDistributive { .. }) => out.push(LatticeCandidate {
                poset: p,
                is_lattice: true,
                frame: None,
            }),
            Err(_) => {}
        }
    }
    out
}

/// Every frame with exactly `n` elements, up to isomorphism.
pub fn frames_of_size(n: usize) -> Vec<Arc<FiniteFrame>> {
    lattices(n)
        .into_iter()
        .filter_map(|c| c.frame)
        .map(Arc::new)
        .collect()
}

/// Every frame with at most `max` elements, up to isomorphism, smallest
/// first.
pub fn frames_up_to(max: usize) -> Vec<Arc<FiniteFrame>> {
    (1..=max).flat_map(frames_of_size).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count() {
        let mut count = 0;
        for_each_permutation(5, &mut |_| count += 1);
        assert_eq!(count, 120);
    }

    #[test]
    fn topology_counts() {
        // Labelled topologies on n points: 1, 1, 4, 29, 355.
        let counts: Vec<usize> = (0..=4).map(|n| spaces(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
        // Up to homeomorphism: 1, 1, 3, 9, 33.
        let classes: Vec<usize> = (0..=4).map(|n| spaces_up_to_iso(n).len()).collect();
        assert_eq!(classes, vec![1, 1, 3, 9, 33]);
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn lattice_counts() {
        let all: Vec<usize> = (1..=6).map(|n| lattices(n).len()).collect();
        assert_eq!(all, vec![1, 1, 1, 2, 5, 15]);
        let distributive: Vec<usize> = (1..=6).map(|n| frames_of_size(n).len()).collect();
        assert_eq!(distributive, vec![1, 1, 1, 2, 3, 5]);
    }
}
