//! Prenuclei, nuclei, and the nucleus generated by a prenucleus.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::FiniteFrame;

fn check_shape(frame: &FiniteFrame, map: &[usize]) -> std::result::Result<(), String> {
    if map.len() != frame.len() {
        return Err(format!("assignment covers {} of {} elements", map.len(), frame.len()));
    }
    if map.iter().any(|&v| v >= frame.len()) {
        return Err("assignment leaves the frame".into());
    }
    for x in frame.elements() {
        if !frame.leq(x, map[x]) {
            return Err(format!("not inflationary at {}", frame.label(x)));
        }
        for y in frame.elements() {
            if frame.leq(x, y) && !frame.leq(map[x], map[y]) {
                return Err(format!(
                    "not monotone: {} ≤ {}",
                    frame.label(x),
                    frame.label(y)
                ));
            }
        }
    }
    Ok(())
}

/// Order-preserving `k₀` with `x ≤ k₀(x)` and `k₀(x) ∧ y ≤ k₀(x ∧ y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prenucleus {
    frame: Arc<FiniteFrame>,
    map: Vec<usize>,
}

impl Prenucleus {
    pub fn new(frame: Arc<FiniteFrame>, map: Vec<usize>) -> Result<Self> {
        check_shape(&frame, &map).map_err(Error::NotPrenucleus)?;
        for x in frame.elements() {
            for y in frame.elements() {
                if !frame.leq(frame.meet(map[x], y), map[frame.meet(x, y)]) {
                    return Err(Error::NotPrenucleus(format!(
                        "k₀({x}) ∧ {y} ≰ k₀({x} ∧ {y})",
                        x = frame.label(x),
                        y = frame.label(y)
                    )));
                }
            }
        }
        Ok(Prenucleus { frame, map })
    }

    pub fn frame(&self) -> &Arc<FiniteFrame> {
        &self.frame
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        fixed_points(&self.map)
    }

    /// Pointwise stabilization of `x, k₀(x), k₀(k₀(x)), …`.
    pub fn iterate(&self) -> Vec<usize> {
        self.frame
            .elements()
            .map(|mut x| {
                while self.map[x] != x {
                    x = self.map[x];
                }
                x
            })
            .collect()
    }
}

/// A closure operator preserving binary meets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nucleus {
    frame: Arc<FiniteFrame>,
    map: Vec<usize>,
}

impl Nucleus {
    pub fn new(frame: Arc<FiniteFrame>, map: Vec<usize>) -> Result<Self> {
        check_shape(&frame, &map).map_err(Error::NotNucleus)?;
        for x in frame.elements() {
            if map[map[x]] != map[x] {
                return Err(Error::NotNucleus(format!("not idempotent at {}", frame.label(x))));
            }
            for y in frame.elements() {
                if map[frame.meet(x, y)] != frame.meet(map[x], map[y]) {
                    return Err(Error::NotNucleus(format!(
                        "meet of {} and {} is not preserved",
                        frame.label(x),
                        frame.label(y)
                    )));
                }
            }
        }
        Ok(Nucleus { frame, map })
    }

    pub fn frame(&self) -> &Arc<FiniteFrame> {
        &self.frame
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        fixed_points(&self.map)
    }
}

pub fn fixed_points(map: &[usize]) -> Vec<usize> {
    (0..map.len()).filter(|&x| map[x] == x).collect()
}

/// `k(x) = ⋀{y ∈ Fix(k₀) : x ≤ y}`; the result is validated as a nucleus
/// and its fixed points are compared with those of `k₀`.
pub fn nucleus_from_prenucleus(k0: &Prenucleus) -> Result<Nucleus> {
    let l = &k0.frame;
    let fix = k0.fixed_points();
    let map = l
        .elements()
        .map(|x| l.meet_all(fix.iter().copied().filter(|&y| l.leq(x, y))))
        .collect();
    let k = Nucleus::new(Arc::clone(l), map)?;
    if k.fixed_points() != fix {
        return Err(Error::NotNucleus(
            "generated nucleus has different fixed points".into(),
        ));
    }
    Ok(k)
}

/// Draws a monotone inflationary map uniformly step by step along a linear
/// extension and keeps it if it satisfies the prenucleus laws. Returns `None`
/// when every attempt is rejected.
pub fn random_prenucleus<R: Rng + ?Sized>(
    frame: &Arc<FiniteFrame>,
    rng: &mut R,
    attempts: usize,
) -> Option<Prenucleus> {
    let order = frame.linear_extension();
    for _ in 0..attempts {
        let mut map = vec![0; frame.len()];
        for (k, &x) in order.iter().enumerate() {
            let floor = order[..k]
                .iter()
                .filter(|&&y| frame.leq(y, x))
                .fold(x, |acc, &y| frame.join(acc, map[y]));
            let choices: Vec<usize> = frame.elements().filter(|&z| frame.leq(floor, z)).collect();
            map[x] = choices[rng.gen_range(0..choices.len())];
        }
        if let Ok(p) = Prenucleus::new(Arc::clone(frame), map) {
            return Some(p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_top_are_fixed() {
        let c = Arc::new(FiniteFrame::chain(3));
        let id = Prenucleus::new(Arc::clone(&c), vec![0, 1, 2]).unwrap();
        assert_eq!(nucleus_from_prenucleus(&id).unwrap().as_slice(), &[0, 1, 2]);
        let top = Prenucleus::new(Arc::clone(&c), vec![2, 2, 2]).unwrap();
        assert_eq!(nucleus_from_prenucleus(&top).unwrap().as_slice(), &[2, 2, 2]);
    }

    #[test]
    fn chain_example() {
        let c = Arc::new(FiniteFrame::chain_of(&["0", "m", "1"]).unwrap());
        let k0 = Prenucleus::new(Arc::clone(&c), vec![1, 1, 2]).unwrap();
        let k = nucleus_from_prenucleus(&k0).unwrap();
        assert_eq!(k.as_slice(), &[1, 1, 2]);
        assert_eq!(k.fixed_points(), vec![1, 2]);
        assert_eq!(k0.iterate(), k.as_slice());
    }

    #[test]
    fn non_inflationary_is_rejected() {
        let c = Arc::new(FiniteFrame::chain(3));
        assert!(Prenucleus::new(c, vec![0, 0, 2]).is_err());
    }
}
