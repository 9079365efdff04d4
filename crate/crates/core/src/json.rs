//! Canonical JSON for every structure: keys sorted (the default
//! `serde_json::Map` is ordered), labels sorted, sets listed in label order.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::bitset::BitSet;
use crate::colimits::LocalePushout;
use crate::error::{Error, Result};
use crate::frame::{FiniteFrame, FrameHom, DEFAULT_MAX_FRAME};
use crate::labels::Labels;
use crate::lifting::{FactorizationTrace, LiftingSquare, Problem, StopReason, Verdict};
use crate::poset::FinitePoset;
use crate::pstop::PsSpace;
use crate::space::{ContinuousMap, FiniteSpace};
use crate::tensor::TensorFrame;

fn sorted_names(labels: &Labels, set: BitSet) -> Vec<String> {
    let mut names: Vec<String> = set.iter().map(|i| labels.name(i).to_string()).collect();
    names.sort();
    names
}

fn all_sorted(labels: &Labels) -> Vec<String> {
    let mut names = labels.names().to_vec();
    names.sort();
    names
}

fn sorted_pairs(labels: &Labels, pairs: &[(usize, usize)]) -> Vec<[String; 2]> {
    let mut out: Vec<[String; 2]> = pairs
        .iter()
        .map(|&(a, b)| [labels.name(a).to_string(), labels.name(b).to_string()])
        .collect();
    out.sort();
    out
}

fn label_map(source: &Labels, target: &Labels, map: &[usize]) -> Value {
    let obj: Map<String, Value> = map
        .iter()
        .enumerate()
        .map(|(x, &y)| (source.name(x).to_string(), Value::String(target.name(y).to_string())))
        .collect();
    Value::Object(obj)
}

pub fn poset_to_json(p: &FinitePoset) -> Value {
    json!({
        "elements": all_sorted(p.labels()),
        "leq": sorted_pairs(p.labels(), &p.covers()),
    })
}

pub fn space_to_json(x: &FiniteSpace) -> Result<Value> {
    let mut opens: Vec<Vec<String>> = x
        .opens(crate::space::DEFAULT_OPEN_CAP)?
        .into_iter()
        .map(|u| sorted_names(x.labels(), u))
        .collect();
    opens.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(json!({ "points": all_sorted(x.labels()), "opens": opens }))
}

pub fn frame_to_json(l: &FiniteFrame) -> Value {
    json!({
        "elements": all_sorted(l.labels()),
        "leq": sorted_pairs(l.labels(), &l.covers()),
        "bottom": l.label(l.bottom()),
        "top": l.label(l.top()),
    })
}

pub fn hom_to_json(f: &FrameHom) -> Value {
    json!({
        "source": frame_to_json(f.source()),
        "target": frame_to_json(f.target()),
        "map": label_map(f.source().labels(), f.target().labels(), f.as_slice()),
    })
}

pub fn map_to_json(f: &ContinuousMap) -> Result<Value> {
    Ok(json!({
        "source": space_to_json(f.source())?,
        "target": space_to_json(f.target())?,
        "map": label_map(f.source().labels(), f.target().labels(), f.as_slice()),
    }))
}

/// A raw point assignment between two spaces, as a label map.
pub fn assignment_to_json(source: &FiniteSpace, target: &FiniteSpace, map: &[usize]) -> Value {
    label_map(source.labels(), target.labels(), map)
}

pub fn psspace_to_json(x: &PsSpace) -> Value {
    let lim: Map<String, Value> = (0..x.len())
        .map(|p| (x.label(p).to_string(), json!(sorted_names(x.labels(), x.lim(p)))))
        .collect();
    json!({ "points": all_sorted(x.labels()), "lim": lim })
}

pub fn set_to_json(labels: &Labels, set: BitSet) -> Value {
    json!(sorted_names(labels, set))
}

pub fn tensor_to_json(t: &TensorFrame) -> Value {
    let c = t.carrier();
    let (l, r) = (t.left(), t.right());
    let mut elements: Vec<Vec<[String; 2]>> = t
        .elements()
        .iter()
        .map(|s| {
            let mut pairs: Vec<[String; 2]> = s
                .iter()
                .map(|p| {
                    let (a, b) = c.pair(p);
                    [l.label(a).to_string(), r.label(b).to_string()]
                })
                .collect();
            pairs.sort();
            pairs
        })
        .collect();
    elements.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    json!({
        "left": frame_to_json(l),
        "right": frame_to_json(r),
        "elements": elements,
    })
}

pub fn pushout_to_json(po: &LocalePushout) -> Value {
    let b = po.proj_b.target();
    let c = po.proj_c.target();
    let pair = |i: usize| {
        let (x, y) = po.pairs[i];
        json!([b.label(x), c.label(y)])
    };
    let mut apex: Vec<Value> = (0..po.pairs.len()).map(pair).collect();
    apex.sort_by_key(|v| v.to_string());
    let leg = |frame: &FiniteFrame, right: &[usize]| -> Value {
        Value::Object(
            frame
                .elements()
                .map(|x| (frame.label(x).to_string(), pair(right[x])))
                .collect(),
        )
    };
    json!({
        "apex": apex,
        "leg_b": leg(b, po.leg_b.right_map()),
        "leg_c": leg(c, po.leg_c.right_map()),
    })
}

pub fn square_to_json(s: &LiftingSquare) -> Result<Value> {
    Ok(json!({
        "i": map_to_json(&s.i)?,
        "f": map_to_json(&s.f)?,
        "u": map_to_json(&s.u)?,
        "v": map_to_json(&s.v)?,
    }))
}

fn problem_to_json(p: &Problem, gens: &[ContinuousMap], right: &ContinuousMap) -> Value {
    let g = &gens[p.generator];
    json!({
        "generator": p.generator,
        "top": assignment_to_json(g.source(), right.source(), &p.top),
        "bottom": assignment_to_json(g.target(), right.target(), &p.bottom),
    })
}

pub fn trace_to_json(t: &FactorizationTrace) -> Result<Value> {
    let mut stages = Vec::new();
    let mut right = t.map.clone();
    for s in &t.stages {
        let problems: Vec<Value> = s
            .problems
            .iter()
            .map(|p| problem_to_json(p, &t.generators, &right))
            .collect();
        stages.push(json!({
            "problems": problems,
            "object": space_to_json(&s.object)?,
            "attach": assignment_to_json(s.attach.source(), s.attach.target(), s.attach.as_slice()),
            "right": assignment_to_json(s.right.source(), s.right.target(), s.right.as_slice()),
        }));
        right = s.right.clone();
    }
    let remaining: Vec<Value> = t
        .remaining
        .iter()
        .map(|p| problem_to_json(p, &t.generators, &t.right))
        .collect();
    let generators = t.generators.iter().map(map_to_json).collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "map": map_to_json(&t.map)?,
        "generators": generators,
        "steps": t.steps,
        "stages": stages,
        "left": map_to_json(&t.left)?,
        "right": map_to_json(&t.right)?,
        "verdict": match t.verdict {
            Verdict::Complete => "COMPLETE",
            Verdict::Partial => "PARTIAL",
        },
        "stop": match t.stop {
            StopReason::Solved => "solved",
            StopReason::StepBound => "step-bound",
            StopReason::SizeCap => "size-cap",
        },
        "remaining": remaining,
    }))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("`{what}` must be an array of strings")))?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("`{what}` must contain strings")))
        })
        .collect()
}

fn pair_list(v: &Value, what: &str) -> Result<Vec<(String, String)>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("`{what}` must be an array of pairs")))?
        .iter()
        .map(|p| {
            let items = string_list(p, what)?;
            match items.as_slice() {
                [a, b] => Ok((a.clone(), b.clone())),
                _ => Err(Error::Parse(format!("`{what}` entries must be pairs"))),
            }
        })
        .collect()
}

fn label_set(labels: &Labels, v: &Value, what: &str) -> Result<BitSet> {
    string_list(v, what)?
        .iter()
        .map(|s| labels.position(s))
        .collect()
}

pub fn poset_from_json(v: &Value) -> Result<FinitePoset> {
    let elements = string_list(field(v, "elements")?, "elements")?;
    let leq = match v.get("leq") {
        Some(l) => pair_list(l, "leq")?,
        None => Vec::new(),
    };
    FinitePoset::new(elements, &leq)
}

pub fn space_from_json(v: &Value) -> Result<FiniteSpace> {
    let labels = Labels::new(string_list(field(v, "points")?, "points")?)?;
    let opens = field(v, "opens")?
        .as_array()
        .ok_or_else(|| Error::Parse("`opens` must be an array".into()))?
        .iter()
        .map(|o| label_set(&labels, o, "opens"))
        .collect::<Result<Vec<_>>>()?;
    FiniteSpace::from_opens(labels, &opens)
}

/// A frame from poset JSON (elements and generating pairs). Frames may be
/// larger than the poset capacity, so the closure is computed here.
pub fn frame_from_json(v: &Value, cap: usize) -> Result<FiniteFrame> {
    let labels = Labels::new(string_list(field(v, "elements")?, "elements")?)?;
    let n = labels.len();
    if n > cap {
        return Err(Error::Size {
            what: "frame element count".into(),
            limit: cap,
        });
    }
    let mut succ = vec![Vec::new(); n];
    if let Some(l) = v.get("leq") {
        for (a, b) in pair_list(l, "leq")? {
            succ[labels.position(&a)?].push(labels.position(&b)?);
        }
    }
    let words = n.div_ceil(64);
    let mut up = vec![0u64; n * words];
    for a in 0..n {
        let row = &mut up[a * words..(a + 1) * words];
        let mut stack = vec![a];
        row[a / 64] |= 1 << (a % 64);
        while let Some(x) = stack.pop() {
            for &y in &succ[x] {
                if row[y / 64] >> (y % 64) & 1 == 0 {
                    row[y / 64] |= 1 << (y % 64);
                    stack.push(y);
                }
            }
        }
    }
    let frame = FiniteFrame::from_order_capped(
        labels,
        |a, b| up[a * words + b / 64] >> (b % 64) & 1 == 1,
        cap,
    )?;
    for (key, expected) in [("bottom", frame.bottom()), ("top", frame.top())] {
        if let Some(hint) = v.get(key) {
            let name = hint
                .as_str()
                .ok_or_else(|| Error::Parse(format!("`{key}` must be a label")))?;
            if frame.position(name)? != expected {
                return Err(Error::Parse(format!(
                    "`{key}` names {name} but the {key} is {}",
                    frame.label(expected)
                )));
            }
        }
    }
    Ok(frame)
}

fn assignment(v: &Value, source: &Labels, target: &Labels) -> Result<Vec<usize>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("`map` must be an object from labels to labels".into()))?;
    let mut map = vec![usize::MAX; source.len()];
    for (k, val) in obj {
        let y = val
            .as_str()
            .ok_or_else(|| Error::Parse("`map` values must be labels".into()))?;
        map[source.position(k)?] = target.position(y)?;
    }
    if let Some(x) = map.iter().position(|&y| y == usize::MAX) {
        return Err(Error::Parse(format!("`map` has no value for {}", source.name(x))));
    }
    Ok(map)
}

pub fn hom_from_json(v: &Value) -> Result<FrameHom> {
    let s = Arc::new(frame_from_json(field(v, "source")?, DEFAULT_MAX_FRAME)?);
    let t = Arc::new(frame_from_json(field(v, "target")?, DEFAULT_MAX_FRAME)?);
    let map = assignment(field(v, "map")?, s.labels(), t.labels())?;
    FrameHom::new(s, t, map)
}

pub fn map_from_json(v: &Value) -> Result<ContinuousMap> {
    let s = Arc::new(space_from_json(field(v, "source")?)?);
    let t = Arc::new(space_from_json(field(v, "target")?)?);
    let map = assignment(field(v, "map")?, s.labels(), t.labels())?;
    ContinuousMap::new(s, t, map)
}

pub fn psspace_from_json(v: &Value) -> Result<PsSpace> {
    let labels = Labels::new(string_list(field(v, "points")?, "points")?)?;
    let obj = field(v, "lim")?
        .as_object()
        .ok_or_else(|| Error::Parse("`lim` must be an object".into()))?;
    let mut lim = vec![None; labels.len()];
    for (k, val) in obj {
        lim[labels.position(k)?] = Some(label_set(&labels, val, "lim")?);
    }
    let lim = lim
        .into_iter()
        .enumerate()
        .map(|(x, l)| l.ok_or_else(|| Error::Parse(format!("`lim` has no entry for {}", labels.name(x)))))
        .collect::<Result<Vec<_>>>()?;
    PsSpace::new(labels, lim)
}

/// A subset of a space's points given as a label list.
pub fn subset_from_json(labels: &Labels, v: &Value) -> Result<BitSet> {
    label_set(labels, v, "subset")
}

pub fn square_from_json(v: &Value) -> Result<LiftingSquare> {
    let i = map_from_json(field(v, "i")?)?;
    let f = map_from_json(field(v, "f")?)?;
    let u = map_from_json(field(v, "u")?)?;
    let w = map_from_json(field(v, "v")?)?;
    // Corners are shared by value; rebuild the top and bottom maps on the
    // sides' own objects so composites line up.
    let u = ContinuousMap::new(Arc::clone(i.source()), Arc::clone(f.source()), u.as_slice().to_vec())?;
    let w = ContinuousMap::new(Arc::clone(i.target()), Arc::clone(f.target()), w.as_slice().to_vec())?;
    LiftingSquare::new(i, f, u, w)
}

pub fn maps_from_json(v: &Value) -> Result<Vec<ContinuousMap>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected an array of maps".into()))?
        .iter()
        .map(map_from_json)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_round_trip() {
        let c = FiniteFrame::chain_of(&["0", "m", "1"]).unwrap();
        let v = frame_to_json(&c);
        assert_eq!(v["leq"], json!([["0", "m"], ["m", "1"]]));
        let back = frame_from_json(&v, 64).unwrap();
        assert_eq!(frame_to_json(&back), v);
    }

    #[test]
    fn bad_hint_is_rejected() {
        let v = json!({"elements": ["a", "b"], "leq": [["a", "b"]], "bottom": "b"});
        assert!(matches!(frame_from_json(&v, 64), Err(Error::Parse(_))));
    }

    #[test]
    fn space_round_trip() {
        let s = FiniteSpace::sierpinski();
        let v = space_to_json(&s).unwrap();
        assert_eq!(v["opens"], json!([[], ["y"], ["x", "y"]]));
        assert_eq!(space_from_json(&v).unwrap(), s);
    }

    #[test]
    fn psspace_round_trip() {
        let v = json!({"points": ["1", "2"], "lim": {"1": ["1"], "2": ["1", "2"]}});
        let x = psspace_from_json(&v).unwrap();
        assert_eq!(psspace_to_json(&x), v);
        let bad = json!({"points": ["1"], "lim": {"1": []}});
        assert!(matches!(psspace_from_json(&bad), Err(Error::InvalidPseudotopology(_))));
    }
}
