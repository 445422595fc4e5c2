//! Simplicial complexes on a labeled ground set.
//!
//! Faces are stored as bitmasks over the ground set, so a complex has at most
//! 64 vertices. Vertices that lie in no facet are ghost vertices; the complex
//! whose only face is the empty face is represented by the facet list `[0]`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mask = u64;

/// The three ways of adding a vertex, plus `Ordinary` for vertices that
/// satisfy none of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Cone,
    Ghost,
    Lawrence,
    Ordinary,
}

pub(crate) fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Order on faces: by cardinality, then lexicographically on the sorted
/// vertex indices.
pub(crate) fn face_order(a: Mask, b: Mask) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| bits(a).cmp(bits(b)))
}

/// Unlabeled complex over a sparse set of vertex positions. Searches work on
/// this form so that vertex identities survive deletions and links.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct RawComplex {
    pub ground: Mask,
    /// Sorted antichain; `[0]` when the empty face is the only face.
    pub facets: Vec<Mask>,
}

impl RawComplex {
    pub fn new(ground: Mask, facets: impl IntoIterator<Item = Mask>) -> Self {
        let mut fs: Vec<Mask> = facets.into_iter().collect();
        fs.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
        fs.dedup();
        let mut kept: Vec<Mask> = Vec::with_capacity(fs.len());
        for f in fs {
            if !kept.iter().any(|&k| f & k == f) {
                kept.push(f);
            }
        }
        if kept.is_empty() {
            kept.push(0);
        }
        kept.sort_unstable();
        RawComplex { ground, facets: kept }
    }

    pub fn simplex(ground: Mask) -> Self {
        RawComplex::new(ground, [ground])
    }

    pub fn is_face(&self, s: Mask) -> bool {
        self.facets.iter().any(|&f| s & f == s)
    }

    pub fn delete(&self, v: usize) -> RawComplex {
        let bit = 1 << v;
        RawComplex::new(self.ground & !bit, self.facets.iter().map(|&f| f & !bit))
    }

    pub fn link(&self, v: usize) -> RawComplex {
        let bit = 1 << v;
        RawComplex::new(
            self.ground & !bit,
            self.facets.iter().filter(|&&f| f & bit != 0).map(|&f| f & !bit),
        )
    }

    pub fn is_cone_vertex(&self, v: usize) -> bool {
        self.facets.iter().all(|&f| f & (1 << v) != 0)
    }

    pub fn is_ghost_vertex(&self, v: usize) -> bool {
        self.facets.iter().all(|&f| f & (1 << v) == 0)
    }

    pub fn is_lawrence_vertex(&self, v: usize) -> bool {
        let rest = self.ground & !(1 << v);
        self.facets.contains(&rest) && !self.is_ghost_vertex(v)
    }

    pub fn add_cone(&self, v: usize) -> RawComplex {
        let bit = 1 << v;
        RawComplex::new(self.ground | bit, self.facets.iter().map(|&f| f | bit))
    }

    pub fn add_ghost(&self, v: usize) -> RawComplex {
        RawComplex::new(self.ground | (1 << v), self.facets.iter().copied())
    }

    pub fn add_lawrence(&self, v: usize) -> RawComplex {
        let bit = 1 << v;
        let lifted = self.facets.iter().map(|&f| f | bit);
        RawComplex::new(self.ground | bit, std::iter::once(self.ground).chain(lifted))
    }

    /// All faces in canonical order.
    pub fn faces(&self) -> Vec<Mask> {
        let mut set = BTreeSet::new();
        for &f in &self.facets {
            // enumerate submasks of f
            let mut s = f;
            loop {
                set.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & f;
            }
        }
        let mut out: Vec<Mask> = set.into_iter().collect();
        out.sort_by(|&a, &b| face_order(a, b));
        out
    }

    pub fn is_full_simplex(&self) -> bool {
        self.facets.len() == 1 && self.facets[0] == self.ground
    }

    pub fn minimal_nonfaces(&self) -> Vec<Mask> {
        let verts: Vec<usize> = bits(self.ground).collect();
        let n = verts.len();
        let mut out = Vec::new();
        for sub in 0u64..(1u64 << n) {
            let s = spread(sub, &verts);
            if self.is_face(s) {
                continue;
            }
            if bits(s).all(|v| self.is_face(s & !(1 << v))) {
                out.push(s);
            }
        }
        out.sort_by(|&a, &b| face_order(a, b));
        out
    }

    pub fn alexander_dual(&self) -> Option<RawComplex> {
        if self.is_full_simplex() {
            return None;
        }
        let g = self.ground;
        Some(RawComplex::new(
            g,
            self.minimal_nonfaces().into_iter().map(|n| g & !n),
        ))
    }

    /// Relabel vertex positions through `map` (old position -> new position).
    pub fn permute(&self, map: &[usize]) -> RawComplex {
        let pm = |m: Mask| bits(m).fold(0, |acc, v| acc | (1 << map[v]));
        RawComplex::new(pm(self.ground), self.facets.iter().map(|&f| pm(f)))
    }
}

/// Place the bits of a dense mask onto the listed positions.
pub(crate) fn spread(dense: u64, positions: &[usize]) -> Mask {
    positions
        .iter()
        .enumerate()
        .filter(|(i, _)| dense & (1 << i) != 0)
        .fold(0, |acc, (_, &p)| acc | (1 << p))
}

/// A simplicial complex with labeled vertices. Labels are opaque strings;
/// the ground set order fixes the internal indices.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    raw: RawComplex,
}

impl SimplicialComplex {
    /// Builds a complex from a ground set and a list of faces. Non-maximal
    /// faces are dropped; an empty face list means only the empty face.
    pub fn new<S: AsRef<str>>(ground: &[S], faces: &[Vec<S>]) -> Result<Self> {
        let labels: Vec<String> = ground.iter().map(|s| s.as_ref().to_string()).collect();
        if labels.len() > 64 {
            return Err(Error::TooManyVertices(labels.len()));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let mut masks = Vec::with_capacity(faces.len());
        for face in faces {
            let mut m = 0;
            for v in face {
                let i = seen
                    .get(v.as_ref())
                    .ok_or_else(|| Error::UnknownVertex(v.as_ref().to_string()))?;
                m |= 1 << i;
            }
            masks.push(m);
        }
        let ground_mask = full_mask(labels.len());
        Ok(SimplicialComplex {
            labels,
            raw: RawComplex::new(ground_mask, masks),
        })
    }

    /// Convenience constructor for single-character or numeric labels written
    /// as strings, e.g. `parse("1 2 3", "12 23")`. Facets are whitespace
    /// separated; each character of a facet token is a vertex label. The
    /// token `-` stands for the empty facet.
    pub fn parse(ground: &str, facets: &str) -> Result<Self> {
        let g: Vec<String> = ground.split_whitespace().map(str::to_string).collect();
        let fs: Vec<Vec<String>> = facets
            .split_whitespace()
            .map(|tok| {
                if tok == "-" {
                    Vec::new()
                } else {
                    tok.chars().map(|c| c.to_string()).collect()
                }
            })
            .collect();
        SimplicialComplex::new(&g, &fs)
    }

    pub(crate) fn from_raw(labels: &[String], raw: &RawComplex) -> Self {
        // compress the sparse positions of `raw.ground` to 0..n
        let positions: Vec<usize> = bits(raw.ground).collect();
        let mut map = vec![usize::MAX; 64];
        for (new, &old) in positions.iter().enumerate() {
            map[old] = new;
        }
        let labels_out = positions.iter().map(|&p| labels[p].clone()).collect();
        let dense = raw.permute(&map);
        SimplicialComplex {
            labels: labels_out,
            raw: dense,
        }
    }

    pub(crate) fn raw(&self) -> &RawComplex {
        &self.raw
    }

    /// Simplex on the given vertices.
    pub fn simplex<S: AsRef<str>>(ground: &[S]) -> Self {
        let labels: Vec<String> = ground.iter().map(|s| s.as_ref().to_string()).collect();
        let g = full_mask(labels.len());
        SimplicialComplex {
            labels,
            raw: RawComplex::simplex(g),
        }
    }

    pub fn ground(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, v: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn mask_labels(&self, m: Mask) -> Vec<String> {
        bits(m).map(|i| self.labels[i].clone()).collect()
    }

    pub fn mask_of<S: AsRef<str>>(&self, face: &[S]) -> Result<Mask> {
        face.iter()
            .try_fold(0, |acc, v| Ok(acc | (1 << self.index_of(v.as_ref())?)))
    }

    /// Facets as masks, in canonical face order.
    pub fn facet_masks(&self) -> Vec<Mask> {
        let mut fs = self.raw.facets.clone();
        fs.sort_by(|&a, &b| face_order(a, b));
        fs
    }

    pub fn facets(&self) -> Vec<Vec<String>> {
        self.facet_masks()
            .into_iter()
            .map(|m| self.mask_labels(m))
            .collect()
    }

    /// Downward closure of the facets, always including the empty face,
    /// ordered by cardinality and then lexicographically.
    pub fn face_masks(&self) -> Vec<Mask> {
        self.raw.faces()
    }

    pub fn faces(&self) -> Vec<Vec<String>> {
        self.face_masks()
            .into_iter()
            .map(|m| self.mask_labels(m))
            .collect()
    }

    pub fn is_face<S: AsRef<str>>(&self, face: &[S]) -> Result<bool> {
        Ok(self.raw.is_face(self.mask_of(face)?))
    }

    pub fn delete_vertex(&self, v: &str) -> Result<Self> {
        let i = self.index_of(v)?;
        Ok(SimplicialComplex::from_raw(&self.labels, &self.raw.delete(i)))
    }

    /// Link of `v`. The link of a ghost vertex has no faces at all; it is
    /// normalized to the complex whose only face is the empty face.
    pub fn link_vertex(&self, v: &str) -> Result<Self> {
        let i = self.index_of(v)?;
        Ok(SimplicialComplex::from_raw(&self.labels, &self.raw.link(i)))
    }

    pub fn alexander_dual(&self) -> Result<Self> {
        let d = self.raw.alexander_dual().ok_or(Error::FullSimplex)?;
        Ok(SimplicialComplex {
            labels: self.labels.clone(),
            raw: d,
        })
    }

    /// Adds the fresh vertex `v` as a cone, ghost or Lawrence vertex.
    pub fn extend(&self, kind: VertexKind, v: &str) -> Result<Self> {
        if self.labels.iter().any(|l| l == v) {
            return Err(Error::VertexCollision(v.to_string()));
        }
        if self.labels.len() >= 64 {
            return Err(Error::TooManyVertices(self.labels.len() + 1));
        }
        let i = self.labels.len();
        let raw = match kind {
            VertexKind::Cone => self.raw.add_cone(i),
            VertexKind::Ghost => self.raw.add_ghost(i),
            VertexKind::Lawrence => self.raw.add_lawrence(i),
            VertexKind::Ordinary => {
                return Err(Error::InvalidArgument(
                    "an ordinary vertex cannot be added by extension".into(),
                ))
            }
        };
        let mut labels = self.labels.clone();
        labels.push(v.to_string());
        Ok(SimplicialComplex { labels, raw })
    }

    /// Every kind `v` satisfies; `Ordinary` alone when it satisfies none.
    pub fn classify_vertex(&self, v: &str) -> Result<BTreeSet<VertexKind>> {
        let i = self.index_of(v)?;
        let mut out = BTreeSet::new();
        if self.raw.is_cone_vertex(i) {
            out.insert(VertexKind::Cone);
        }
        if self.raw.is_ghost_vertex(i) {
            out.insert(VertexKind::Ghost);
        }
        if self.raw.is_lawrence_vertex(i) {
            out.insert(VertexKind::Lawrence);
        }
        if out.is_empty() {
            out.insert(VertexKind::Ordinary);
        }
        Ok(out)
    }

    pub fn is_full_simplex(&self) -> bool {
        self.raw.is_full_simplex()
    }

    /// Same vertex labels and same facets, irrespective of ground order.
    pub fn same_as(&self, other: &SimplicialComplex) -> bool {
        if self.labels.len() != other.labels.len() {
            return false;
        }
        let a: BTreeSet<&String> = self.labels.iter().collect();
        let b: BTreeSet<&String> = other.labels.iter().collect();
        if a != b {
            return false;
        }
        let fa: BTreeSet<BTreeSet<String>> = self
            .facets()
            .into_iter()
            .map(|f| f.into_iter().collect())
            .collect();
        let fb: BTreeSet<BTreeSet<String>> = other
            .facets()
            .into_iter()
            .map(|f| f.into_iter().collect())
            .collect();
        fa == fb
    }

    /// Copy with the ground set reordered to `order` (a permutation of the
    /// labels).
    pub fn reordered<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.labels.len() {
            return Err(Error::InvalidArgument("order is not a permutation of the ground set".into()));
        }
        let facets: Vec<Vec<String>> = self.facets();
        let ground: Vec<String> = order.iter().map(|s| s.as_ref().to_string()).collect();
        let c = SimplicialComplex::new(&ground, &facets)?;
        if !c.same_as(self) {
            return Err(Error::InvalidArgument("order is not a permutation of the ground set".into()));
        }
        Ok(c)
    }

    /// Copy with labels renamed through `f`.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Self {
        SimplicialComplex {
            labels: self.labels.iter().map(|l| f(l)).collect(),
            raw: self.raw.clone(),
        }
    }
}

pub(crate) fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> = self
            .facets()
            .into_iter()
            .map(|fc| format!("{{{}}}", fc.join(",")))
            .collect();
        write!(f, "[{}] facets {}", self.labels.join(","), facets.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_of(faces: Vec<Vec<String>>) -> BTreeSet<Vec<String>> {
        faces.into_iter().collect()
    }

    #[test]
    fn faces_of_path() {
        let c = SimplicialComplex::parse("1 2 3", "12 23").unwrap();
        let f = c.faces();
        let want: Vec<Vec<&str>> = vec![vec![], vec!["1"], vec!["2"], vec!["3"], vec!["1", "2"], vec!["2", "3"]];
        let want: Vec<Vec<String>> = want
            .into_iter()
            .map(|v| v.into_iter().map(String::from).collect())
            .collect();
        assert_eq!(f, want);
    }

    #[test]
    fn faces_of_ghost_only() {
        let c = SimplicialComplex::parse("1", "-").unwrap();
        assert_eq!(c.faces(), vec![Vec::<String>::new()]);
        let c = SimplicialComplex::parse("1", "").unwrap();
        assert_eq!(c.faces().len(), 1);
    }

    #[test]
    fn faces_of_simplex() {
        let c = SimplicialComplex::parse("1 2 3", "123").unwrap();
        assert_eq!(c.faces().len(), 8);
    }

    #[test]
    fn non_maximal_input_faces_are_dropped() {
        let c = SimplicialComplex::parse("1 2", "12 1").unwrap();
        assert_eq!(c.facets().len(), 1);
    }

    #[test]
    fn delete_examples() {
        let c = SimplicialComplex::parse("1 2 3", "12 23").unwrap();
        let d = c.delete_vertex("1").unwrap();
        assert_eq!(d, SimplicialComplex::parse("2 3", "23").unwrap());
        let two = SimplicialComplex::parse("1 2", "1 2").unwrap();
        assert_eq!(two.delete_vertex("1").unwrap(), SimplicialComplex::parse("2", "2").unwrap());
        let g = SimplicialComplex::parse("1 2 3", "12").unwrap();
        assert_eq!(g.delete_vertex("3").unwrap(), SimplicialComplex::parse("1 2", "12").unwrap());
        assert!(matches!(c.delete_vertex("9"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn link_examples() {
        let c = SimplicialComplex::parse("1 2 3", "12 23").unwrap();
        assert_eq!(c.link_vertex("2").unwrap(), SimplicialComplex::parse("1 3", "1 3").unwrap());
        let base = SimplicialComplex::parse("1 2", "1 2").unwrap();
        let coned = base.extend(VertexKind::Cone, "3").unwrap();
        assert_eq!(coned.link_vertex("3").unwrap(), base);
        let d3 = SimplicialComplex::parse("1 2 3 4", "1234").unwrap();
        assert_eq!(d3.link_vertex("4").unwrap(), SimplicialComplex::parse("1 2 3", "123").unwrap());
        // link of a ghost
        let g = SimplicialComplex::parse("1 2 3", "12").unwrap();
        let l = g.link_vertex("3").unwrap();
        assert_eq!(l.facet_masks(), vec![0]);
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn alexander_dual_examples() {
        let c = SimplicialComplex::parse("1 2 3 4", "12 34").unwrap();
        let d = c.alexander_dual().unwrap();
        assert_eq!(d, SimplicialComplex::parse("1 2 3 4", "13 14 23 24").unwrap());
        assert_eq!(d.alexander_dual().unwrap(), c);

        let b = SimplicialComplex::parse("1 2 3", "12 13 23").unwrap();
        let bd = b.alexander_dual().unwrap();
        assert_eq!(bd.facet_masks(), vec![0]);
        assert_eq!(bd.alexander_dual().unwrap(), b);

        let s = SimplicialComplex::parse("1 2", "12").unwrap();
        assert_eq!(s.alexander_dual(), Err(Error::FullSimplex));
    }

    #[test]
    fn minimal_nonfaces_by_brute_force() {
        // minimal non-faces of {12,34} are the four cross pairs
        let c = SimplicialComplex::parse("1 2 3 4", "12 34").unwrap();
        let got: BTreeSet<Mask> = c.raw.minimal_nonfaces().into_iter().collect();
        let want: BTreeSet<Mask> = [0b0101, 0b1001, 0b0110, 0b1010].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn extend_examples() {
        let c = SimplicialComplex::parse("1 2", "1 2").unwrap();
        let l = c.extend(VertexKind::Lawrence, "3").unwrap();
        assert_eq!(l, SimplicialComplex::parse("1 2 3", "12 13 23").unwrap());
        let e = SimplicialComplex::parse("1 2", "12").unwrap();
        let g = e.extend(VertexKind::Ghost, "3").unwrap();
        assert_eq!(g.ground().len(), 3);
        assert_eq!(g.facet_masks(), vec![0b011]);
        let k = c.extend(VertexKind::Cone, "3").unwrap();
        assert_eq!(k, SimplicialComplex::parse("1 2 3", "13 23").unwrap());
        assert!(matches!(c.extend(VertexKind::Cone, "1"), Err(Error::VertexCollision(_))));
    }

    #[test]
    fn classify_examples() {
        let t = SimplicialComplex::parse("1 2 3", "12 13 23").unwrap();
        assert_eq!(t.classify_vertex("3").unwrap(), [VertexKind::Lawrence].into());
        let g = SimplicialComplex::parse("1 2 3", "12").unwrap();
        assert_eq!(g.classify_vertex("3").unwrap(), [VertexKind::Ghost].into());
        let s = SimplicialComplex::parse("1 2 3", "123").unwrap();
        assert_eq!(s.classify_vertex("2").unwrap(), [VertexKind::Cone].into());
        let p = SimplicialComplex::parse("1 2 3 4", "12 23 34").unwrap();
        assert_eq!(p.classify_vertex("2").unwrap(), [VertexKind::Ordinary].into());
    }

    #[test]
    fn same_as_ignores_ground_order() {
        let a = SimplicialComplex::parse("1 2 3", "12 23").unwrap();
        let b = SimplicialComplex::parse("3 2 1", "32 21").unwrap();
        assert!(a.same_as(&b));
        assert_eq!(set_of(a.facets()).len(), 2);
    }
}
