//! Irreducible closed sets, sobriety and soberification of finite spaces.

use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::labels::Labels;
use crate::space::{ContinuousMap, FiniteSpace, DEFAULT_OPEN_CAP};

/// Nonempty closed sets that are not a union of two proper closed subsets,
/// found by exhaustive decomposition search.
pub fn irreducible_closed_sets(x: &FiniteSpace) -> Result<Vec<BitSet>> {
    let closed = x.closed_sets(DEFAULT_OPEN_CAP)?;
    let mut out = Vec::new();
    for &f in &closed {
        if f.is_empty() {
            continue;
        }
        let proper: Vec<BitSet> = closed
            .iter()
            .copied()
            .filter(|&c| c != f && c.is_subset(f))
            .collect();
        let decomposes = proper
            .iter()
            .enumerate()
            .any(|(i, &a)| proper[i..].iter().any(|&b| a.union(b) == f));
        if !decomposes {
            out.push(f);
        }
    }
    Ok(out)
}

/// Every irreducible closed set is the closure of exactly one point.
pub fn is_sober(x: &FiniteSpace) -> Result<bool> {
    let closures = x.below_table();
    for f in irreducible_closed_sets(x)? {
        if closures.iter().filter(|&&c| c == f).count() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Soberification {
    pub space: Arc<FiniteSpace>,
    pub quotient: ContinuousMap,
}

/// Sober reflection of a finite space, built as the Kolmogorov quotient:
/// points with equal closures are identified. Sobriety of the result is
/// checked before returning.
///
/// A class with one member keeps that member's label; larger classes are
/// labelled `{a,b}`.
pub fn soberify(x: &Arc<FiniteSpace>) -> Result<Soberification> {
    let n = x.len();
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<BitSet> = Vec::new();
    for p in 0..n {
        if class_of[p] != usize::MAX {
            continue;
        }
        let class: BitSet = (p..n).filter(|&q| x.nbhd(q) == x.nbhd(p)).collect();
        for q in class.iter() {
            class_of[q] = reps.len();
        }
        reps.push(class);
    }
    let names = reps
        .iter()
        .map(|&c| {
            if c.len() == 1 {
                x.label(c.first().unwrap()).to_string()
            } else {
                x.labels().render_set(c)
            }
        })
        .collect();
    let labels = Labels::new(names)?;
    let above = reps
        .iter()
        .map(|&c| {
            let p = c.first().unwrap();
            x.nbhd(p).iter().map(|q| class_of[q]).collect()
        })
        .collect();
    let space = Arc::new(FiniteSpace::from_preorder(labels, above)?);
    if !is_sober(&space)? {
        return Err(Error::InvalidSpace(
            "Kolmogorov quotient failed the sobriety check".into(),
        ));
    }
    let quotient = ContinuousMap::new(Arc::clone(x), Arc::clone(&space), class_of)?;
    Ok(Soberification { space, quotient })
}

/// Evaluation of the gluing statement for a decomposition `X = A ⊔ B` with
/// `A` closed and every point of `B` closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlueVerdict {
    pub a_sober: bool,
    pub b_hausdorff: bool,
    pub x_sober: bool,
}

impl GlueVerdict {
    pub fn hypotheses_hold(&self) -> bool {
        self.a_sober && self.b_hausdorff
    }

    /// False exactly when the hypotheses hold and the conclusion fails.
    pub fn consistent(&self) -> bool {
        !self.hypotheses_hold() || self.x_sober
    }
}

pub fn sober_glue_check(x: &FiniteSpace, a: BitSet, b: BitSet) -> Result<GlueVerdict> {
    let all = x.all();
    if !a.is_disjoint(b) || a.union(b) != all {
        return Err(Error::Hypothesis(format!(
            "{} and {} do not partition the space",
            x.labels().render_set(a),
            x.labels().render_set(b)
        )));
    }
    if !x.is_closed(a) {
        return Err(Error::Hypothesis(format!(
            "{} is not closed",
            x.labels().render_set(a)
        )));
    }
    if let Some(p) = b.iter().find(|&p| !x.is_closed(BitSet::singleton(p))) {
        return Err(Error::Hypothesis(format!("point {} is not closed", x.label(p))));
    }
    let (sa, _) = x.subspace(a);
    let (sb, _) = x.subspace(b);
    Ok(GlueVerdict {
        a_sober: is_sober(&sa)?,
        b_hausdorff: sb.is_hausdorff(),
        x_sober: is_sober(x)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BitSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn irreducibles_of_small_spaces() {
        let disc = FiniteSpace::discrete(Labels::numbered("p", 2));
        assert_eq!(
            irreducible_closed_sets(&disc).unwrap(),
            vec![set(&[0]), set(&[1])]
        );
        let s = FiniteSpace::sierpinski();
        assert_eq!(
            irreducible_closed_sets(&s).unwrap(),
            vec![set(&[0]), set(&[0, 1])]
        );
        let ind = FiniteSpace::indiscrete(Labels::numbered("p", 2));
        assert_eq!(irreducible_closed_sets(&ind).unwrap(), vec![set(&[0, 1])]);
    }

    #[test]
    fn soberify_examples() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let r = soberify(&s).unwrap();
        assert_eq!(*r.space, *s);

        let ind = Arc::new(FiniteSpace::indiscrete(Labels::numbered("p", 2)));
        let r = soberify(&ind).unwrap();
        assert_eq!(r.space.len(), 1);
        assert_eq!(r.space.label(0), "{p0,p1}");

        let disc = Arc::new(FiniteSpace::discrete(Labels::numbered("p", 3)));
        assert_eq!(*soberify(&disc).unwrap().space, *disc);
    }

    #[test]
    fn glue_examples() {
        let s = FiniteSpace::sierpinski();
        let v = sober_glue_check(&s, set(&[0]), set(&[1]));
        // {y} is open but not closed in the Sierpiński space.
        assert!(matches!(v, Err(Error::Hypothesis(_))));

        let disc = FiniteSpace::discrete(Labels::numbered("p", 2));
        let v = sober_glue_check(&disc, BitSet::empty(), set(&[0, 1])).unwrap();
        assert!(v.hypotheses_hold() && v.x_sober);

        assert!(sober_glue_check(&s, set(&[1]), set(&[0])).is_err());
    }
}
