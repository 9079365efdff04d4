//! Lifting problems in the category of finite spaces (finite preorders and
//! monotone maps): limits and colimits, exponentials, pushout products and
//! pullback powers, lifting-property searches, retracts, and a bounded
//! small object argument.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::labels::Labels;
use crate::space::{preimage, search_constrained, ContinuousMap, FiniteSpace};

/// Disjoint union; part `k` occupies indices `offsets[k]..offsets[k + 1]`
/// and point `x` of it is labelled `k:x`.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub space: Arc<FiniteSpace>,
    pub offsets: Vec<usize>,
}

impl Coproduct {
    pub fn injection(&self, part: &Arc<FiniteSpace>, k: usize) -> Result<ContinuousMap> {
        let map = (0..part.len()).map(|x| self.offsets[k] + x).collect();
        ContinuousMap::new(Arc::clone(part), Arc::clone(&self.space), map)
    }

    /// The part containing index `p` and the position inside it.
    pub fn locate(&self, p: usize) -> (usize, usize) {
        let k = self.offsets.partition_point(|&o| o <= p) - 1;
        (k, p - self.offsets[k])
    }
}

pub fn coproduct(parts: &[&FiniteSpace]) -> Result<Coproduct> {
    let total: usize = parts.iter().map(|p| p.len()).sum();
    if total > BitSet::CAPACITY {
        return Err(Error::size("coproduct point count", BitSet::CAPACITY));
    }
    let mut offsets = vec![0];
    let mut names = Vec::with_capacity(total);
    let mut above = Vec::with_capacity(total);
    for (k, part) in parts.iter().enumerate() {
        let base = *offsets.last().unwrap();
        for x in 0..part.len() {
            names.push(format!("{k}:{}", part.label(x)));
            above.push(part.nbhd(x).iter().map(|y| base + y).collect());
        }
        offsets.push(base + part.len());
    }
    let space = FiniteSpace::from_preorder(Labels::new(names)?, above)?;
    Ok(Coproduct {
        space: Arc::new(space),
        offsets,
    })
}

/// `B ⊔_A C` for a span `B ← A → C`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub apex: Arc<FiniteSpace>,
    /// `B → P`
    pub left: ContinuousMap,
    /// `C → P`
    pub right: ContinuousMap,
}

/// Glues `B ⊔ C` along `f(a) ~ g(a)`; the preorder is the transitive closure
/// of the two images. Singleton classes keep the tagged label `0:b` or
/// `1:c`, larger classes are rendered `{0:b,1:c}`.
pub fn pushout(f: &ContinuousMap, g: &ContinuousMap) -> Result<Pushout> {
    if **f.source() != **g.source() {
        return Err(Error::CarrierMismatch("pushout legs have different sources".into()));
    }
    let (b, c) = (f.target(), g.target());
    let sum = coproduct(&[b, c])?;
    let n = sum.space.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for a in 0..f.source().len() {
        let (x, y) = (find(&mut parent, f.apply(a)), find(&mut parent, b.len() + g.apply(a)));
        if x != y {
            let (lo, hi) = (x.min(y), x.max(y));
            parent[hi] = lo;
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<BitSet> = Vec::new();
    for x in 0..n {
        if class_of[roots[x]] == usize::MAX {
            class_of[roots[x]] = members.len();
            members.push(BitSet::empty());
        }
        class_of[x] = class_of[roots[x]];
        members[class_of[x]].insert(x);
    }
    let mut above = vec![BitSet::empty(); members.len()];
    for x in 0..n {
        for y in sum.space.nbhd(x).iter() {
            above[class_of[x]].insert(class_of[y]);
        }
    }
    let names = members
        .iter()
        .map(|&m| {
            if m.len() == 1 {
                sum.space.label(m.first().unwrap()).to_string()
            } else {
                sum.space.labels().render_set(m)
            }
        })
        .collect();
    let apex = Arc::new(FiniteSpace::from_preorder(Labels::new(names)?, above)?);
    let left = ContinuousMap::new(Arc::clone(b), Arc::clone(&apex), (0..b.len()).map(|x| class_of[x]).collect())?;
    let right = ContinuousMap::new(
        Arc::clone(c),
        Arc::clone(&apex),
        (0..c.len()).map(|x| class_of[b.len() + x]).collect(),
    )?;
    Ok(Pushout { apex, left, right })
}

impl Pushout {
    /// The map `P → Z` induced by `h : B → Z` and `k : C → Z`.
    pub fn induced(&self, h: &ContinuousMap, k: &ContinuousMap) -> Result<ContinuousMap> {
        let mut map = vec![usize::MAX; self.apex.len()];
        let legs = [(&self.left, h), (&self.right, k)];
        for (leg, out) in legs {
            for x in 0..leg.source().len() {
                let slot = &mut map[leg.apply(x)];
                if *slot != usize::MAX && *slot != out.apply(x) {
                    return Err(Error::NonCommuting("cocone does not agree on the glued span".into()));
                }
                *slot = out.apply(x);
            }
        }
        ContinuousMap::new(Arc::clone(&self.apex), Arc::clone(h.target()), map)
    }
}

/// `B ×_D C` for a cospan `B → D ← C`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub apex: Arc<FiniteSpace>,
    pub left: ContinuousMap,
    pub right: ContinuousMap,
    pairs: Vec<(usize, usize)>,
}

pub fn pullback(f: &ContinuousMap, g: &ContinuousMap) -> Result<Pullback> {
    if **f.target() != **g.target() {
        return Err(Error::CarrierMismatch("pullback legs have different targets".into()));
    }
    let (b, c) = (f.source(), g.source());
    let pairs: Vec<(usize, usize)> = (0..b.len())
        .flat_map(|x| (0..c.len()).map(move |y| (x, y)))
        .filter(|&(x, y)| f.apply(x) == g.apply(y))
        .collect();
    if pairs.len() > BitSet::CAPACITY {
        return Err(Error::size("pullback point count", BitSet::CAPACITY));
    }
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", b.label(x), c.label(y)))
        .collect();
    let above = pairs
        .iter()
        .map(|&(x, y)| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(x2, y2))| b.leq(x, x2) && c.leq(y, y2))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    let apex = Arc::new(FiniteSpace::from_preorder(Labels::new(names)?, above)?);
    let left = ContinuousMap::new(Arc::clone(&apex), Arc::clone(b), pairs.iter().map(|p| p.0).collect())?;
    let right = ContinuousMap::new(Arc::clone(&apex), Arc::clone(c), pairs.iter().map(|p| p.1).collect())?;
    Ok(Pullback {
        apex,
        left,
        right,
        pairs,
    })
}

impl Pullback {
    /// The map `Z → P` induced by `h : Z → B` and `k : Z → C`.
    pub fn induced(&self, h: &ContinuousMap, k: &ContinuousMap) -> Result<ContinuousMap> {
        let index: HashMap<(usize, usize), usize> =
            self.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let map = (0..h.source().len())
            .map(|z| {
                index
                    .get(&(h.apply(z), k.apply(z)))
                    .copied()
                    .ok_or_else(|| Error::NonCommuting("cone does not agree on the cospan".into()))
            })
            .collect::<Result<_>>()?;
        ContinuousMap::new(Arc::clone(h.source()), Arc::clone(&self.apex), map)
    }
}

/// `f × g : X × A → Y × B` on the products built by [`FiniteSpace::product`].
pub fn product_map(
    f: &ContinuousMap,
    g: &ContinuousMap,
    source: &Arc<FiniteSpace>,
    target: &Arc<FiniteSpace>,
) -> Result<ContinuousMap> {
    let (m, m2) = (g.source().len(), g.target().len());
    let map = (0..source.len())
        .map(|p| f.apply(p / m) * m2 + g.apply(p % m))
        .collect();
    ContinuousMap::new(Arc::clone(source), Arc::clone(target), map)
}

/// `X^A`: continuous maps `A → X` under the pointwise order, each labelled by
/// its list of values `[x1,x2,…]` in the order of `A`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub space: Arc<FiniteSpace>,
    pub base: Arc<FiniteSpace>,
    pub exponent: Arc<FiniteSpace>,
    pub maps: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

pub fn exponential(base: &Arc<FiniteSpace>, exponent: &Arc<FiniteSpace>) -> Result<Exponential> {
    let mut maps = Vec::new();
    let mut overflow = false;
    let allowed = vec![base.all(); exponent.len()];
    search_constrained(exponent, base, &allowed, &mut |m| {
        maps.push(m.to_vec());
        overflow = maps.len() > BitSet::CAPACITY;
        !overflow
    });
    if overflow {
        return Err(Error::size("exponential point count", BitSet::CAPACITY));
    }
    maps.sort();
    let names = maps
        .iter()
        .map(|m| {
            let vals: Vec<&str> = m.iter().map(|&x| base.label(x)).collect();
            format!("[{}]", vals.join(","))
        })
        .collect();
    let above = maps
        .iter()
        .map(|m| {
            maps.iter()
                .enumerate()
                .filter(|(_, m2)| m.iter().zip(m2.iter()).all(|(&x, &y)| base.leq(x, y)))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    let space = Arc::new(FiniteSpace::from_preorder(Labels::new(names)?, above)?);
    let index = maps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    Ok(Exponential {
        space,
        base: Arc::clone(base),
        exponent: Arc::clone(exponent),
        maps,
        index,
    })
}

impl Exponential {
    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.index.get(map).copied()
    }

    /// `ev : X^A × A → X` on the product `self.space × exponent`.
    pub fn eval(&self, product: &Arc<FiniteSpace>) -> Result<ContinuousMap> {
        let m = self.exponent.len();
        let map = (0..product.len()).map(|p| self.maps[p / m][p % m]).collect();
        ContinuousMap::new(Arc::clone(product), Arc::clone(&self.base), map)
    }

    /// `φ ↦ curry φ` for `φ : Z × A → X` given on `Z × A`.
    pub fn curry(&self, z: &Arc<FiniteSpace>, phi: &[usize]) -> Result<ContinuousMap> {
        let m = self.exponent.len();
        let map = (0..z.len())
            .map(|p| {
                self.index_of(&phi[p * m..(p + 1) * m])
                    .ok_or_else(|| Error::NotContinuous("a section is not continuous".into()))
            })
            .collect::<Result<_>>()?;
        ContinuousMap::new(Arc::clone(z), Arc::clone(&self.space), map)
    }
}

/// `f_* : X^A → Y^A`
pub fn post_compose(f: &ContinuousMap, from: &Exponential, to: &Exponential) -> Result<ContinuousMap> {
    let map = from
        .maps
        .iter()
        .map(|m| {
            let image: Vec<usize> = m.iter().map(|&x| f.apply(x)).collect();
            to.index_of(&image)
                .ok_or_else(|| Error::CarrierMismatch("exponentials do not match the map".into()))
        })
        .collect::<Result<_>>()?;
    ContinuousMap::new(Arc::clone(&from.space), Arc::clone(&to.space), map)
}

/// `g^* : X^B → X^A` for `g : A → B`.
pub fn pre_compose(g: &ContinuousMap, from: &Exponential, to: &Exponential) -> Result<ContinuousMap> {
    let map = from
        .maps
        .iter()
        .map(|m| {
            let restricted: Vec<usize> = g.as_slice().iter().map(|&b| m[b]).collect();
            to.index_of(&restricted)
                .ok_or_else(|| Error::CarrierMismatch("exponentials do not match the map".into()))
        })
        .collect::<Result<_>>()?;
    ContinuousMap::new(Arc::clone(&from.space), Arc::clone(&to.space), map)
}

/// `f ×̂ g : X × B ⊔_{X × A} Y × A → Y × B` for `f : X → Y`, `g : A → B`.
#[derive(Clone, Debug)]
pub struct PushoutProduct {
    pub pushout: Pushout,
    pub map: ContinuousMap,
}

pub fn pushout_product(f: &ContinuousMap, g: &ContinuousMap) -> Result<PushoutProduct> {
    let (x, y, a, b) = (f.source(), f.target(), g.source(), g.target());
    let xa = Arc::new(x.product(a)?);
    let xb = Arc::new(x.product(b)?);
    let ya = Arc::new(y.product(a)?);
    let yb = Arc::new(y.product(b)?);
    let id_x = ContinuousMap::identity(Arc::clone(x));
    let id_y = ContinuousMap::identity(Arc::clone(y));
    let id_a = ContinuousMap::identity(Arc::clone(a));
    let id_b = ContinuousMap::identity(Arc::clone(b));
    let to_xb = product_map(&id_x, g, &xa, &xb)?;
    let to_ya = product_map(f, &id_a, &xa, &ya)?;
    let po = pushout(&to_xb, &to_ya)?;
    let from_xb = product_map(f, &id_b, &xb, &yb)?;
    let from_ya = product_map(&id_y, g, &ya, &yb)?;
    let map = po.induced(&from_xb, &from_ya)?;
    Ok(PushoutProduct { pushout: po, map })
}

/// `f ▷ g : X^B → X^A ×_{Y^A} Y^B` for `f : X → Y`, `g : A → B`.
#[derive(Clone, Debug)]
pub struct PullbackPower {
    pub pullback: Pullback,
    pub map: ContinuousMap,
}

pub fn pullback_power(f: &ContinuousMap, g: &ContinuousMap) -> Result<PullbackPower> {
    let (x, y, a, b) = (f.source(), f.target(), g.source(), g.target());
    let xa = exponential(x, a)?;
    let xb = exponential(x, b)?;
    let ya = exponential(y, a)?;
    let yb = exponential(y, b)?;
    let f_a = post_compose(f, &xa, &ya)?;
    let g_y = pre_compose(g, &yb, &ya)?;
    let pb = pullback(&f_a, &g_y)?;
    let g_x = pre_compose(g, &xb, &xa)?;
    let f_b = post_compose(f, &xb, &yb)?;
    let map = pb.induced(&g_x, &f_b)?;
    Ok(PullbackPower { pullback: pb, map })
}

/// A commutative square `f ∘ u = v ∘ i` with `i : A → B` on the left and
/// `f : X → Y` on the right.
#[derive(Clone, Debug)]
pub struct LiftingSquare {
    pub i: ContinuousMap,
    pub f: ContinuousMap,
    pub u: ContinuousMap,
    pub v: ContinuousMap,
}

impl LiftingSquare {
    pub fn new(i: ContinuousMap, f: ContinuousMap, u: ContinuousMap, v: ContinuousMap) -> Result<Self> {
        let fits = **u.source() == **i.source()
            && **u.target() == **f.source()
            && **v.source() == **i.target()
            && **v.target() == **f.target();
        if !fits {
            return Err(Error::CarrierMismatch("square sides do not share corners".into()));
        }
        if let Some(a) = (0..i.source().len()).find(|&a| f.apply(u.apply(a)) != v.apply(i.apply(a))) {
            return Err(Error::NonCommuting(format!(
                "f∘u and v∘i disagree at {}",
                i.source().label(a)
            )));
        }
        Ok(LiftingSquare { i, f, u, v })
    }

    /// Every diagonal `h : B → X` with `h ∘ i = u` and `f ∘ h = v`.
    pub fn enumerate_lifts(&self) -> Vec<ContinuousMap> {
        let mut out = Vec::new();
        if let Some(allowed) = lift_domains(&self.i, &self.f, self.u.as_slice(), self.v.as_slice()) {
            search_constrained(self.i.target(), self.f.source(), &allowed, &mut |h| {
                out.push(h.to_vec());
                true
            });
        }
        out.sort();
        out.into_iter()
            .map(|h| ContinuousMap::new(Arc::clone(self.i.target()), Arc::clone(self.f.source()), h).expect("search yields continuous maps"))
            .collect()
    }

    pub fn has_lift(&self) -> bool {
        has_lift(&self.i, &self.f, self.u.as_slice(), self.v.as_slice())
    }
}

fn fibres(f: &ContinuousMap) -> Vec<BitSet> {
    (0..f.target().len())
        .map(|y| preimage(f.as_slice(), BitSet::singleton(y)))
        .collect()
}

/// Candidate values of a diagonal at each point of `B`, or `None` if two
/// points of `A` with the same image demand different values.
fn lift_domains(i: &ContinuousMap, f: &ContinuousMap, u: &[usize], v: &[usize]) -> Option<Vec<BitSet>> {
    let mut allowed: Vec<BitSet> = v
        .iter()
        .map(|&y| preimage(f.as_slice(), BitSet::singleton(y)))
        .collect();
    for (a, &x) in u.iter().enumerate() {
        let slot = &mut allowed[i.apply(a)];
        *slot = slot.intersection(BitSet::singleton(x));
    }
    allowed.iter().all(|s| !s.is_empty()).then_some(allowed)
}

fn has_lift(i: &ContinuousMap, f: &ContinuousMap, u: &[usize], v: &[usize]) -> bool {
    let Some(allowed) = lift_domains(i, f, u, v) else {
        return false;
    };
    let mut found = false;
    search_constrained(i.target(), f.source(), &allowed, &mut |_| {
        found = true;
        false
    });
    found
}

/// A square `(u, v)` between `i` and `f` with no diagonal, if any.
pub fn lifting_failure(i: &ContinuousMap, f: &ContinuousMap) -> Option<(Vec<usize>, Vec<usize>)> {
    let (a, b, x, y) = (i.source(), i.target(), f.source(), f.target());
    let fib = fibres(f);
    let mut witness = None;
    let all_y = vec![y.all(); b.len()];
    search_constrained(b, y, &all_y, &mut |v| {
        let allowed: Vec<BitSet> = (0..a.len()).map(|p| fib[v[i.apply(p)]]).collect();
        search_constrained(a, x, &allowed, &mut |u| {
            if has_lift(i, f, u, v) {
                true
            } else {
                witness = Some((u.to_vec(), v.to_vec()));
                false
            }
        });
        witness.is_none()
    });
    witness
}

/// `i ⧄ f`: every commutative square from `i` to `f` has a diagonal.
pub fn lifts_against(i: &ContinuousMap, f: &ContinuousMap) -> bool {
    lifting_failure(i, f).is_none()
}

/// Lifting verdict by full enumeration of both map sets and of candidate
/// diagonals, with no pruning.
pub fn lifts_against_brute(i: &ContinuousMap, f: &ContinuousMap) -> bool {
    let tops = ContinuousMap::enumerate(i.source(), f.source());
    let bottoms = ContinuousMap::enumerate(i.target(), f.target());
    let diagonals = ContinuousMap::enumerate(i.target(), f.source());
    for v in &bottoms {
        for u in &tops {
            let commutes = (0..i.source().len()).all(|a| f.apply(u.apply(a)) == v.apply(i.apply(a)));
            if !commutes {
                continue;
            }
            let lifted = diagonals.iter().any(|h| {
                (0..i.source().len()).all(|a| h.apply(i.apply(a)) == u.apply(a))
                    && (0..i.target().len()).all(|b| f.apply(h.apply(b)) == v.apply(b))
            });
            if !lifted {
                return false;
            }
        }
    }
    true
}

/// A failing square for `f ∈ rlp(S)`: the generator index and `(u, v)`.
pub type RlpWitness = (usize, Vec<usize>, Vec<usize>);

pub fn rlp(f: &ContinuousMap, gens: &[ContinuousMap]) -> Option<RlpWitness> {
    gens.iter()
        .enumerate()
        .find_map(|(k, s)| lifting_failure(s, f).map(|(u, v)| (k, u, v)))
}

pub fn llp(f: &ContinuousMap, gens: &[ContinuousMap]) -> Option<RlpWitness> {
    gens.iter()
        .enumerate()
        .find_map(|(k, g)| lifting_failure(f, g).map(|(u, v)| (k, u, v)))
}

/// The pushout of `s : A → B` along `u : A → Z`, as a map `Z → Z ⊔_A B`.
pub fn cobase_change(s: &ContinuousMap, u: &ContinuousMap) -> Result<ContinuousMap> {
    let po = pushout(u, s)?;
    Ok(po.left)
}

/// `f ⊔ g : A ⊔ C → B ⊔ D`
pub fn coproduct_map(maps: &[&ContinuousMap]) -> Result<ContinuousMap> {
    let sources: Vec<&FiniteSpace> = maps.iter().map(|m| m.source().as_ref()).collect();
    let targets: Vec<&FiniteSpace> = maps.iter().map(|m| m.target().as_ref()).collect();
    let src = coproduct(&sources)?;
    let dst = coproduct(&targets)?;
    let map = maps
        .iter()
        .enumerate()
        .flat_map(|(k, m)| m.as_slice().iter().map(move |&y| (k, y)))
        .map(|(k, y)| dst.offsets[k] + y)
        .collect();
    ContinuousMap::new(src.space, dst.space, map)
}

/// Homeomorphisms `a → b` whose value at each point lies in `allowed`,
/// visited until `visit` returns `false`. Returns `false` if stopped.
fn search_isos(
    a: &FiniteSpace,
    b: &FiniteSpace,
    allowed: &[BitSet],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if a.len() != b.len() {
        return true;
    }
    let n = a.len();
    let mut map = vec![usize::MAX; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        a: &FiniteSpace,
        b: &FiniteSpace,
        allowed: &[BitSet],
        map: &mut [usize],
        used: BitSet,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == a.len() {
            return visit(map);
        }
        for y in allowed[k].difference(used).iter() {
            let ok = (0..k).all(|z| a.leq(z, k) == b.leq(map[z], y) && a.leq(k, z) == b.leq(y, map[z]));
            if !ok {
                continue;
            }
            map[k] = y;
            if !go(k + 1, a, b, allowed, map, used.with(y), visit) {
                return false;
            }
        }
        true
    }
    go(0, a, b, allowed, &mut map, BitSet::empty(), visit)
}

fn point_signature(s: &FiniteSpace, x: usize) -> (usize, usize) {
    (s.nbhd(x).len(), s.point_closure(x).len())
}

/// An isomorphism in the arrow category: homeomorphisms `α` of sources and
/// `β` of targets with `g ∘ α = β ∘ f`.
pub fn find_arrow_iso(f: &ContinuousMap, g: &ContinuousMap) -> Option<(ContinuousMap, ContinuousMap)> {
    let (fs, ft, gs, gt) = (f.source(), f.target(), g.source(), g.target());
    if fs.len() != gs.len() || ft.len() != gt.len() {
        return None;
    }
    let fib_f = fibres(f);
    let fib_g = fibres(g);
    let tsig = |s: &FiniteSpace, fib: &[BitSet], y: usize| (point_signature(s, y), fib[y].len());
    let allowed_t: Vec<BitSet> = (0..ft.len())
        .map(|y| {
            let sig = tsig(ft, &fib_f, y);
            (0..gt.len()).filter(|&y2| tsig(gt, &fib_g, y2) == sig).collect()
        })
        .collect();
    let mut found = None;
    search_isos(ft, gt, &allowed_t, &mut |beta| {
        let allowed_s: Vec<BitSet> = (0..fs.len())
            .map(|x| {
                let sig = point_signature(fs, x);
                fib_g[beta[f.apply(x)]]
                    .iter()
                    .filter(|&x2| point_signature(gs, x2) == sig)
                    .collect()
            })
            .collect();
        search_isos(fs, gs, &allowed_s, &mut |alpha| {
            found = Some((alpha.to_vec(), beta.to_vec()));
            false
        });
        found.is_none()
    });
    found.map(|(alpha, beta)| {
        (
            ContinuousMap::new(Arc::clone(fs), Arc::clone(gs), alpha).expect("isomorphism is continuous"),
            ContinuousMap::new(Arc::clone(ft), Arc::clone(gt), beta).expect("isomorphism is continuous"),
        )
    })
}

/// Arrow-category maps `f → g → f` composing to the identity.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub section_top: Vec<usize>,
    pub section_bottom: Vec<usize>,
    pub retraction_top: Vec<usize>,
    pub retraction_bottom: Vec<usize>,
}

/// Searches for a presentation of `f : A → B` as a retract of `g : C → D`.
pub fn retract_check(f: &ContinuousMap, g: &ContinuousMap) -> Option<Retraction> {
    let (a, b, c, d) = (f.source(), f.target(), g.source(), g.target());
    let fib_f = fibres(f);
    let fib_g = fibres(g);
    let mut found = None;
    let all_d = vec![d.all(); b.len()];
    search_constrained(b, d, &all_d, &mut |sb| {
        let allowed_st: Vec<BitSet> = (0..a.len()).map(|p| fib_g[sb[f.apply(p)]]).collect();
        search_constrained(a, c, &allowed_st, &mut |st| {
            let mut allowed_rb = vec![b.all(); d.len()];
            for (y, &z) in sb.iter().enumerate() {
                allowed_rb[z] = allowed_rb[z].intersection(BitSet::singleton(y));
            }
            search_constrained(d, b, &allowed_rb, &mut |rb| {
                let mut allowed_rt: Vec<BitSet> = (0..c.len()).map(|q| fib_f[rb[g.apply(q)]]).collect();
                for (p, &q) in st.iter().enumerate() {
                    allowed_rt[q] = allowed_rt[q].intersection(BitSet::singleton(p));
                }
                search_constrained(c, a, &allowed_rt, &mut |rt| {
                    found = Some(Retraction {
                        section_top: st.to_vec(),
                        section_bottom: sb.to_vec(),
                        retraction_top: rt.to_vec(),
                        retraction_bottom: rb.to_vec(),
                    });
                    false
                });
                found.is_none()
            });
            found.is_none()
        });
        found.is_none()
    });
    found
}

/// A lifting problem of generator `generator` against the current right
/// factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Problem {
    pub generator: usize,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

/// Symmetries `(α, β)` of a generator `s` with `s ∘ α = β ∘ s`.
fn arrow_automorphisms(s: &ContinuousMap) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (a, b) = (s.source(), s.target());
    let fib = fibres(s);
    let mut out = Vec::new();
    let all_b = vec![b.all(); b.len()];
    search_isos(b, b, &all_b, &mut |beta| {
        let allowed: Vec<BitSet> = (0..a.len()).map(|x| fib[beta[s.apply(x)]]).collect();
        search_isos(a, a, &allowed, &mut |alpha| {
            out.push((alpha.to_vec(), beta.to_vec()));
            true
        });
        true
    });
    out
}

/// Squares from generators to `p` without a diagonal, one per orbit under
/// the generators' symmetries, in a fixed order.
pub fn unsolved_problems(p: &ContinuousMap, gens: &[ContinuousMap]) -> Vec<Problem> {
    let mut out = BTreeSet::new();
    let fib = fibres(p);
    for (k, s) in gens.iter().enumerate() {
        let autos = arrow_automorphisms(s);
        let (a, b) = (s.source(), s.target());
        let all_y = vec![p.target().all(); b.len()];
        search_constrained(b, p.target(), &all_y, &mut |v| {
            let allowed: Vec<BitSet> = (0..a.len()).map(|x| fib[v[s.apply(x)]]).collect();
            search_constrained(a, p.source(), &allowed, &mut |u| {
                if !has_lift(s, p, u, v) {
                    let canonical = autos
                        .iter()
                        .map(|(alpha, beta)| Problem {
                            generator: k,
                            top: alpha.iter().map(|&x| u[x]).collect(),
                            bottom: beta.iter().map(|&y| v[y]).collect(),
                        })
                        .min()
                        .expect("identity is a symmetry");
                    out.insert(canonical);
                }
                true
            });
            true
        });
    }
    out.into_iter().collect()
}

/// One attachment stage `E → E'` with its new right factor `E' → Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub problems: Vec<Problem>,
    pub object: Arc<FiniteSpace>,
    pub attach: ContinuousMap,
    pub right: ContinuousMap,
}

/// Attaches one cell per problem: the pushout of `⊔ s_k` along the tops,
/// with right factor induced by `p` and the bottoms. Points of the new
/// object are labelled `e0, e1, …`.
pub fn cell_attach(p: &ContinuousMap, gens: &[ContinuousMap], problems: &[Problem]) -> Result<Stage> {
    for pr in problems {
        let s = gens
            .get(pr.generator)
            .ok_or_else(|| Error::Parse(format!("no generator {}", pr.generator)))?;
        let fits = pr.top.len() == s.source().len()
            && pr.bottom.len() == s.target().len()
            && pr.top.iter().all(|&x| x < p.source().len())
            && pr.bottom.iter().all(|&y| y < p.target().len());
        if !fits {
            return Err(Error::CarrierMismatch("problem does not fit its generator".into()));
        }
        if (0..pr.top.len()).any(|a| p.apply(pr.top[a]) != pr.bottom[s.apply(a)]) {
            return Err(Error::NonCommuting("lifting problem does not commute".into()));
        }
    }
    let cells: Vec<&ContinuousMap> = problems.iter().map(|pr| &gens[pr.generator]).collect();
    let sum = coproduct_map(&cells)?;
    let tops: Vec<usize> = problems.iter().flat_map(|pr| pr.top.iter().copied()).collect();
    let bottoms: Vec<usize> = problems.iter().flat_map(|pr| pr.bottom.iter().copied()).collect();
    let top = ContinuousMap::new(Arc::clone(sum.source()), Arc::clone(p.source()), tops)?;
    let bottom = ContinuousMap::new(Arc::clone(sum.target()), Arc::clone(p.target()), bottoms)?;
    let po = pushout(&top, &sum)?;
    let right = po.induced(p, &bottom)?;
    let object = Arc::new(po.apex.relabel(Labels::numbered("e", po.apex.len()))?);
    let attach = ContinuousMap::new(Arc::clone(p.source()), Arc::clone(&object), po.left.as_slice().to_vec())?;
    let right = ContinuousMap::new(Arc::clone(&object), Arc::clone(p.target()), right.as_slice().to_vec())?;
    Ok(Stage {
        problems: problems.to_vec(),
        object,
        attach,
        right,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The right factor has the right lifting property against every
    /// generator.
    Complete,
    /// Unsolved problems remain when the run stopped.
    Partial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Solved,
    StepBound,
    SizeCap,
}

/// A run of the bounded small object argument: `f = right ∘ left` with
/// `left` a composite of cell attachments.
#[derive(Clone, Debug)]
pub struct FactorizationTrace {
    pub map: ContinuousMap,
    pub generators: Vec<ContinuousMap>,
    pub steps: usize,
    pub stages: Vec<Stage>,
    pub left: ContinuousMap,
    pub right: ContinuousMap,
    pub verdict: Verdict,
    pub stop: StopReason,
    /// Problems still open at the end; empty iff the verdict is complete.
    pub remaining: Vec<Problem>,
}

pub fn bounded_factorize(f: &ContinuousMap, gens: &[ContinuousMap], steps: usize) -> Result<FactorizationTrace> {
    let mut left = ContinuousMap::identity(Arc::clone(f.source()));
    let mut right = f.clone();
    let mut stages = Vec::new();
    let (remaining, stop) = loop {
        let problems = unsolved_problems(&right, gens);
        if problems.is_empty() {
            break (problems, StopReason::Solved);
        }
        if stages.len() == steps {
            break (problems, StopReason::StepBound);
        }
        let stage = match cell_attach(&right, gens, &problems) {
            Ok(stage) => stage,
            Err(Error::Size { .. }) => break (problems, StopReason::SizeCap),
            Err(e) => return Err(e),
        };
        left = left.then(&stage.attach)?;
        right = stage.right.clone();
        stages.push(stage);
    };
    let verdict = if remaining.is_empty() {
        Verdict::Complete
    } else {
        Verdict::Partial
    };
    Ok(FactorizationTrace {
        map: f.clone(),
        generators: gens.to_vec(),
        steps,
        stages,
        left,
        right,
        verdict,
        stop,
        remaining,
    })
}

impl FactorizationTrace {
    /// Rebuilds every stage from its recorded problems and checks that the
    /// recorded objects, attachments and factors are reproduced exactly.
    pub fn replay(&self) -> Result<()> {
        let mut left = ContinuousMap::identity(Arc::clone(self.map.source()));
        let mut right = self.map.clone();
        for (k, stage) in self.stages.iter().enumerate() {
            if stage.problems.is_empty() {
                return Err(Error::NonCommuting(format!("stage {k} attaches no cells")));
            }
            let rebuilt = cell_attach(&right, &self.generators, &stage.problems)?;
            if rebuilt != *stage {
                return Err(Error::NonCommuting(format!("stage {k} does not replay")));
            }
            left = left.then(&stage.attach)?;
            right = stage.right.clone();
        }
        if left != self.left || right != self.right {
            return Err(Error::NonCommuting("recorded factors differ from the replay".into()));
        }
        if left.then(&right)? != self.map {
            return Err(Error::NonCommuting("right ∘ left differs from the factored map".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(s: FiniteSpace) -> Arc<FiniteSpace> {
        Arc::new(s)
    }

    fn map(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>, m: &[usize]) -> ContinuousMap {
        ContinuousMap::new(Arc::clone(a), Arc::clone(b), m.to_vec()).unwrap()
    }

    fn discrete(n: usize) -> Arc<FiniteSpace> {
        arc(FiniteSpace::discrete(Labels::numbered("d", n)))
    }

    #[test]
    fn identity_square_has_unique_lift() {
        let s = arc(FiniteSpace::sierpinski());
        let id = ContinuousMap::identity(Arc::clone(&s));
        let f = map(&s, &discrete(1), &[0, 0]);
        let sq = LiftingSquare::new(id.clone(), f.clone(), id.clone(), f.clone()).unwrap();
        let lifts = sq.enumerate_lifts();
        assert_eq!(lifts, vec![id]);
    }

    #[test]
    fn no_lift_into_empty() {
        let e = arc(FiniteSpace::empty());
        let one = discrete(1);
        let i = map(&e, &one, &[]);
        let f = map(&e, &one, &[]);
        let sq = LiftingSquare::new(i, f, map(&e, &e, &[]), ContinuousMap::identity(Arc::clone(&one))).unwrap();
        assert!(sq.enumerate_lifts().is_empty());
    }

    #[test]
    fn two_lifts_into_discrete_pair() {
        let e = arc(FiniteSpace::empty());
        let one = discrete(1);
        let two = discrete(2);
        let sq = LiftingSquare::new(
            map(&e, &one, &[]),
            map(&two, &one, &[0, 0]),
            map(&e, &two, &[]),
            ContinuousMap::identity(Arc::clone(&one)),
        )
        .unwrap();
        assert_eq!(sq.enumerate_lifts().len(), 2);
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let one = discrete(1);
        let two = discrete(2);
        let r = LiftingSquare::new(
            ContinuousMap::identity(Arc::clone(&one)),
            ContinuousMap::identity(Arc::clone(&two)),
            map(&one, &two, &[0]),
            map(&one, &two, &[1]),
        );
        assert!(matches!(r, Err(Error::NonCommuting(_))));
    }

    #[test]
    fn surjectivity_is_rlp_against_point_inclusion() {
        let e = arc(FiniteSpace::empty());
        let one = discrete(1);
        let gen = map(&e, &one, &[]);
        assert!(rlp(&map(&discrete(2), &one, &[0, 0]), std::slice::from_ref(&gen)).is_none());
        assert!(rlp(&map(&e, &one, &[]), std::slice::from_ref(&gen)).is_some());
        assert!(rlp(&map(&e, &one, &[]), &[]).is_none());
    }

    #[test]
    fn pushout_glues_points() {
        let one = discrete(1);
        let two = discrete(2);
        let po = pushout(&map(&one, &two, &[0]), &map(&one, &two, &[1])).unwrap();
        assert_eq!(po.apex.len(), 3);
        let fold = pushout(&map(&two, &one, &[0, 0]), &ContinuousMap::identity(Arc::clone(&two))).unwrap();
        assert_eq!(fold.apex.len(), 1);
    }

    #[test]
    fn pushout_product_of_point_inclusions() {
        let e = arc(FiniteSpace::empty());
        let one = discrete(1);
        let i = map(&e, &one, &[]);
        let pp = pushout_product(&i, &i).unwrap();
        assert_eq!(pp.pushout.apex.len(), 0);
        assert_eq!(pp.map.target().len(), 1);
    }

    #[test]
    fn exponential_of_sierpinski() {
        let s = arc(FiniteSpace::sierpinski());
        let ss = exponential(&s, &s).unwrap();
        assert_eq!(ss.space.len(), 3);
        let one = discrete(1);
        assert_eq!(exponential(&s, &one).unwrap().space.len(), 2);
    }

    #[test]
    fn factorize_into_discrete_pair() {
        let e = arc(FiniteSpace::empty());
        let one = discrete(1);
        let two = discrete(2);
        let gen = map(&e, &one, &[]);
        let f = map(&e, &two, &[]);
        let trace = bounded_factorize(&f, std::slice::from_ref(&gen), 1).unwrap();
        assert_eq!(trace.verdict, Verdict::Complete);
        assert_eq!(trace.stages.len(), 1);
        assert_eq!(trace.stages[0].problems.len(), 2);
        assert!(trace.right.is_homeomorphism());
        trace.replay().unwrap();
    }

    #[test]
    fn factorize_fold_gains_injectivity() {
        let one = discrete(1);
        let two = discrete(2);
        let three = discrete(3);
        let fold = map(&two, &one, &[0, 0]);
        let f = map(&three, &two, &[0, 0, 1]);
        let trace = bounded_factorize(&f, std::slice::from_ref(&fold), 3).unwrap();
        assert_eq!(trace.verdict, Verdict::Complete);
        assert!(trace.right.is_injective());
        assert!(lifts_against_brute(&fold, &trace.right));
        trace.replay().unwrap();
    }

    #[test]
    fn retract_examples() {
        let e = arc(FiniteSpace::empty());
        let one = discrete(1);
        let i = map(&e, &one, &[]);
        assert!(retract_check(&i, &i).is_some());
        let id_e = ContinuousMap::identity(Arc::clone(&e));
        assert!(retract_check(&i, &id_e).is_none());
    }
}
