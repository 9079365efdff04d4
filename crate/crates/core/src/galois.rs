//! Right adjoints of frame homomorphisms (localic maps).

use crate::error::{Error, Result};
use crate::frame::{is_injective, is_surjective, FrameHom};

/// A frame homomorphism `f: M → L` with its right adjoint `g: L → M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisConnection {
    left: FrameHom,
    right: Vec<usize>,
}

/// `g(y) = ⋁{x : f(x) ≤ y}`, with every connection law checked.
pub fn right_adjoint(f: &FrameHom) -> Result<GaloisConnection> {
    let (m, l) = (f.source(), f.target());
    let right = l
        .elements()
        .map(|y| m.join_all(m.elements().filter(|&x| l.leq(f.apply(x), y))))
        .collect();
    let gc = GaloisConnection {
        left: f.clone(),
        right,
    };
    gc.check()?;
    Ok(gc)
}

impl GaloisConnection {
    pub fn left(&self) -> &FrameHom {
        &self.left
    }

    #[inline]
    pub fn right(&self, y: usize) -> usize {
        self.right[y]
    }

    pub fn right_map(&self) -> &[usize] {
        &self.right
    }

    /// `f(x) ≤ y ⇔ x ≤ g(y)`, `fgf = f`, `gfg = g`, and `g` preserves `⊤`
    /// and binary meets.
    pub fn check(&self) -> Result<()> {
        let f = &self.left;
        let (m, l) = (f.source(), f.target());
        let g = &self.right;
        for x in m.elements() {
            for y in l.elements() {
                if l.leq(f.apply(x), y) != m.leq(x, g[y]) {
                    return Err(Error::NotMonotone(format!(
                        "adjunction fails at {} and {}",
                        m.label(x),
                        l.label(y)
                    )));
                }
            }
            if f.apply(g[f.apply(x)]) != f.apply(x) {
                return Err(Error::NotMonotone(format!("fgf ≠ f at {}", m.label(x))));
            }
        }
        for y in l.elements() {
            if g[f.apply(g[y])] != g[y] {
                return Err(Error::NotMonotone(format!("gfg ≠ g at {}", l.label(y))));
            }
        }
        if g[l.top()] != m.top() {
            return Err(Error::NotMonotone("right adjoint does not preserve ⊤".into()));
        }
        for a in l.elements() {
            for b in a + 1..l.len() {
                if g[l.meet(a, b)] != m.meet(g[a], g[b]) {
                    return Err(Error::NotMonotone(format!(
                        "right adjoint does not preserve the meet of {} and {}",
                        l.label(a),
                        l.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn right_is_injective(&self) -> bool {
        is_injective(&self.right, self.left.source().len())
    }

    pub fn right_is_surjective(&self) -> bool {
        is_surjective(&self.right, self.left.source().len())
    }

    /// `f` injective ⇔ `g` surjective, and `f` surjective ⇔ `g` injective.
    pub fn dualities_hold(&self) -> bool {
        self.left.is_injective() == self.right_is_surjective()
            && self.left.is_surjective() == self.right_is_injective()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::frame::FiniteFrame;

    #[test]
    fn identity_is_self_adjoint() {
        let c = Arc::new(FiniteFrame::chain(3));
        let gc = right_adjoint(&FrameHom::identity(Arc::clone(&c))).unwrap();
        assert_eq!(gc.right_map(), &[0, 1, 2]);
    }

    #[test]
    fn adjoint_of_two_into_chain() {
        let c = Arc::new(FiniteFrame::chain_of(&["0", "m", "1"]).unwrap());
        let f = FrameHom::from_two(c);
        let gc = right_adjoint(&f).unwrap();
        assert_eq!(gc.right_map(), &[0, 0, 1]);
        assert!(gc.dualities_hold());
        assert!(f.is_injective() && gc.right_is_surjective());
    }
}
