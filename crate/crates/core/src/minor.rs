//! Pair isomorphism and minor embedding.
//!
//! Deleting and linking vertices commute, so a minor is determined by the
//! set `S` of surviving vertices and the set `L` of linked vertices (the rest
//! are deleted). Its facets are the maximal sets `f ∩ S` over facets `f ⊇ L`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{bits, Mask, RawComplex};
use crate::error::{Error, Result};
use crate::pair::HMPair;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "vertex", rename_all = "lowercase")]
pub enum ReductionStep {
    Delete(String),
    Link(String),
}

/// How a pattern pair sits inside a target pair as a minor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorEmbedding {
    pub steps: Vec<ReductionStep>,
    /// Reduced weight of each surviving target vertex.
    pub weights: BTreeMap<String, u64>,
    /// Surviving target vertex -> pattern vertex.
    pub isomorphism: BTreeMap<String, String>,
}

impl MinorEmbedding {
    /// Applies the steps and weight reduction to `target` and renames the
    /// result into the pattern's labels and ground order.
    pub fn apply(&self, target: &HMPair, pattern_ground: &[String]) -> Result<HMPair> {
        let mut p = target.clone();
        for s in &self.steps {
            p = match s {
                ReductionStep::Delete(v) => p.delete_vertex(v)?,
                ReductionStep::Link(v) => p.link_vertex(v)?,
            };
        }
        let mut w = Vec::with_capacity(p.len());
        for v in p.ground() {
            let r = *self
                .weights
                .get(v)
                .ok_or_else(|| Error::MissingWeight(v.clone()))?;
            let orig = p.weight(v)?;
            if r < 2 || r > orig {
                return Err(Error::InvalidWeight {
                    vertex: v.clone(),
                    weight: r,
                });
            }
            w.push(r);
        }
        let reduced = HMPair::new(p.complex().clone(), w)?;
        let rename = |l: &str| self.isomorphism.get(l).cloned().unwrap_or_else(|| l.to_string());
        let renamed = HMPair::new(reduced.complex().relabeled(rename), reduced.weights().to_vec())?;
        renamed.reordered(pattern_ground)
    }

    /// Whether applying this embedding to `target` gives exactly `pattern`.
    pub fn validates(&self, target: &HMPair, pattern: &HMPair) -> bool {
        self.apply(target, pattern.ground())
            .is_ok_and(|p| p.complex() == pattern.complex() && p.weights() == pattern.weights())
    }
}

/// Facets as dense masks over `0..k` after compressing `positions`.
fn compress(facets: &[Mask], positions: &[usize]) -> Vec<Mask> {
    let mut out: Vec<Mask> = facets
        .iter()
        .map(|&f| {
            positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| f & (1 << p) != 0)
                .fold(0, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Per-vertex invariants used to prune the isomorphism search.
struct Shape {
    k: usize,
    facets: Vec<Mask>,
    profile: Vec<Vec<u32>>,
    co: Vec<Vec<u32>>,
}

impl Shape {
    fn new(k: usize, facets: Vec<Mask>) -> Shape {
        let profile = (0..k)
            .map(|v| {
                let mut p: Vec<u32> = facets
                    .iter()
                    .filter(|&&f| f & (1 << v) != 0)
                    .map(|f| f.count_ones())
                    .collect();
                p.sort_unstable();
                p
            })
            .collect();
        let co = (0..k)
            .map(|u| {
                (0..k)
                    .map(|v| facets.iter().filter(|&&f| f & (1 << u) != 0 && f & (1 << v) != 0).count() as u32)
                    .collect()
            })
            .collect();
        Shape {
            k,
            facets,
            profile,
            co,
        }
    }

    fn sizes(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.facets.iter().map(|f| f.count_ones()).collect();
        s.sort_unstable();
        s
    }
}

/// Bijection `map[p] = t` from pattern vertices to target vertices that
/// carries facets onto facets, with `weight_ok(p, t)` for every vertex.
fn find_bijection(pat: &Shape, tgt: &Shape, weight_ok: &dyn Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    if pat.k != tgt.k || pat.facets.len() != tgt.facets.len() || pat.sizes() != tgt.sizes() {
        return None;
    }
    let k = pat.k;
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; k];

    fn rec(
        p: usize,
        pat: &Shape,
        tgt: &Shape,
        weight_ok: &dyn Fn(usize, usize) -> bool,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let k = pat.k;
        if p == k {
            let mut img: Vec<Mask> = pat
                .facets
                .iter()
                .map(|&f| bits(f).fold(0, |acc, v| acc | (1 << map[v])))
                .collect();
            img.sort_unstable();
            return img == tgt.facets;
        }
        for t in 0..k {
            if used[t] || pat.profile[p] != tgt.profile[t] || !weight_ok(p, t) {
                continue;
            }
            if (0..p).any(|q| pat.co[p][q] != tgt.co[t][map[q]]) || pat.co[p][p] != tgt.co[t][t] {
                continue;
            }
            map[p] = t;
            used[t] = true;
            if rec(p + 1, pat, tgt, weight_ok, map, used) {
                return true;
            }
            used[t] = false;
        }
        false
    }

    rec(0, pat, tgt, weight_ok, &mut map, &mut used).then_some(map)
}

/// Isomorphism between two pairs: `map[i] = j` sends vertex `i` of `a` to
/// vertex `j` of `b`. With `exact` the weights must agree, otherwise the
/// weight of `a` may be at most the weight of `b`.
pub fn pair_isomorphism(a: &HMPair, b: &HMPair, exact: bool) -> Option<Vec<usize>> {
    let k = a.len();
    if k != b.len() {
        return None;
    }
    let pos: Vec<usize> = (0..k).collect();
    let sa = Shape::new(k, compress(&a.complex().raw().facets, &pos));
    let sb = Shape::new(k, compress(&b.complex().raw().facets, &pos));
    let (wa, wb) = (a.weights(), b.weights());
    let ok = move |p: usize, t: usize| if exact { wa[p] == wb[t] } else { wa[p] <= wb[t] };
    find_bijection(&sa, &sb, &ok)
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

/// Searches for `pattern` as a minor of `target`. Surviving sets are tried
/// in lexicographic order and linked sets in binary order, so the result is
/// deterministic.
pub fn embed_as_minor(target: &HMPair, pattern: &HMPair) -> Option<MinorEmbedding> {
    let n = target.len();
    let k = pattern.len();
    if k > n {
        return None;
    }
    let raw = target.complex().raw();
    let ppos: Vec<usize> = (0..k).collect();
    let pshape = Shape::new(k, compress(&pattern.complex().raw().facets, &ppos));
    let (pw, tw) = (pattern.weights(), target.weights());
    let mut found = None;

    combinations(n, k, &mut |keep: &[usize]| {
        let keep_mask: Mask = keep.iter().fold(0, |acc, &i| acc | (1 << i));
        let rest: Vec<usize> = (0..n).filter(|i| keep_mask & (1 << i) == 0).collect();
        if keep.iter().any(|&t| !pw.iter().any(|&w| w <= tw[t])) {
            return false;
        }
        for lcode in 0u64..(1 << rest.len()) {
            let link: Mask = bits(lcode).fold(0, |acc, j| acc | (1 << rest[j]));
            let minor = RawComplex::new(
                keep_mask,
                raw.facets.iter().filter(|&&f| f & link == link).map(|&f| f & keep_mask),
            );
            let tshape = Shape::new(k, compress(&minor.facets, keep));
            let ok = |p: usize, t: usize| pw[p] <= tw[keep[t]];
            if let Some(map) = find_bijection(&pshape, &tshape, &ok) {
                let labels = target.ground();
                let steps = rest
                    .iter()
                    .map(|&r| {
                        if link & (1 << r) != 0 {
                            ReductionStep::Link(labels[r].clone())
                        } else {
                            ReductionStep::Delete(labels[r].clone())
                        }
                    })
                    .collect();
                let mut weights = BTreeMap::new();
                let mut iso = BTreeMap::new();
                for (p, &t) in map.iter().enumerate() {
                    let tv = labels[keep[t]].clone();
                    weights.insert(tv.clone(), pw[p]);
                    iso.insert(tv, pattern.ground()[p].clone());
                }
                found = Some(MinorEmbedding {
                    steps,
                    weights,
                    isomorphism: iso,
                });
                return true;
            }
        }
        false
    });
    found
}

/// All pairs obtained from `pair` by one deletion, one link, or lowering one
/// weight by one.
pub fn one_step_minors(pair: &HMPair) -> Result<Vec<HMPair>> {
    let mut out = Vec::new();
    for v in pair.ground() {
        out.push(pair.delete_vertex(v)?);
        out.push(pair.link_vertex(v)?);
    }
    for (i, &w) in pair.weights().iter().enumerate() {
        if w > 2 {
            let mut ws = pair.weights().to_vec();
            ws[i] -= 1;
            out.push(HMPair::new(pair.complex().clone(), ws)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_embedding() {
        let t = HMPair::parse("1 2 3", "12 13 23", &[3, 3, 3]).unwrap();
        let e = embed_as_minor(&t, &t).unwrap();
        assert!(e.steps.is_empty());
        assert!(e.validates(&t, &t));
    }

    #[test]
    fn link_then_reduce_weights() {
        let t = HMPair::parse("1 2 3", "12 23", &[3, 2, 2]).unwrap();
        let p = HMPair::parse("a b", "a b", &[2, 2]).unwrap();
        let e = embed_as_minor(&t, &p).unwrap();
        // deleting 2 also leaves two isolated vertices
        assert_eq!(e.steps.len(), 1);
        assert!(matches!(&e.steps[0], ReductionStep::Link(v) | ReductionStep::Delete(v) if v == "2"));
        assert_eq!(e.weights.values().copied().collect::<Vec<_>>(), vec![2, 2]);
        assert!(e.validates(&t, &p));
    }

    #[test]
    fn simplex_has_no_boundary_minor() {
        let t = HMPair::parse("1 2 3", "123", &[2, 2, 2]).unwrap();
        let p = HMPair::parse("1 2 3", "12 13 23", &[2, 2, 2]).unwrap();
        assert!(embed_as_minor(&t, &p).is_none());
    }

    #[test]
    fn weights_must_dominate() {
        let t = HMPair::parse("1 2 3", "12 13 23", &[3, 3, 2]).unwrap();
        let p = HMPair::parse("1 2 3", "12 13 23", &[3, 3, 3]).unwrap();
        assert!(embed_as_minor(&t, &p).is_none());
        assert!(embed_as_minor(&p, &t).is_some());
    }

    #[test]
    fn exact_isomorphism() {
        let a = HMPair::parse("1 2 3", "12 23", &[3, 2, 2]).unwrap();
        let b = HMPair::parse("x y z", "yz xz", &[3, 2, 2]).unwrap();
        let map = pair_isomorphism(&a, &b, true).unwrap();
        assert_eq!(map, vec![0, 2, 1]);
        let c = HMPair::parse("x y z", "yz xz", &[2, 2, 3]).unwrap();
        assert!(pair_isomorphism(&a, &c, true).is_none());
    }

    #[test]
    fn one_step_minor_count() {
        let p = HMPair::parse("1 2 3", "12 23", &[3, 2, 2]).unwrap();
        assert_eq!(one_step_minors(&p).unwrap().len(), 7);
    }
}
