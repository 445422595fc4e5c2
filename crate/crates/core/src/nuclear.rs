//! Nuclear decompositions: peeling cone, ghost and Lawrence vertices until a
//! simplex, two disjoint simplices, or the dual of two disjoint simplices is
//! left.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::complex::{bits, Mask, RawComplex, SimplicialComplex, VertexKind};
use crate::error::{Error, Result};
use crate::pair::HMPair;

/// The complex a nuclear complex is built from. `Simplex { m: -1 }` is the
/// complex on no vertices whose only face is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nucleus {
    Simplex { m: isize },
    DisjointSimplices { m: usize, n: usize },
    DualDisjoint { m: usize, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightCase {
    /// Every Lawrence vertex has two states.
    BinaryLawrence,
    /// Nucleus `Δm ⊔ Δ0` with two states on the `Δ0` vertex, Lawrence
    /// vertices with at most three states and at most one with three.
    SingleWeightThreeLawrence,
    /// Dual nucleus with two states on every nucleus and Lawrence vertex.
    BinaryDual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    pub op: VertexKind,
    pub vertex: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuclearCertificate {
    pub nucleus: Nucleus,
    /// Vertices of the first simplex (all nucleus vertices for `Simplex`).
    pub left: Vec<String>,
    /// Vertices of the second simplex; for `SingleWeightThreeLawrence` this
    /// is the `Δ0` vertex.
    pub right: Vec<String>,
    /// Construction order, starting from the nucleus.
    pub steps: Vec<ConstructionStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_case: Option<WeightCase>,
}

impl NuclearCertificate {
    pub fn nucleus_complex(&self) -> Result<SimplicialComplex> {
        let ground: Vec<String> = self.left.iter().chain(&self.right).cloned().collect();
        match self.nucleus {
            Nucleus::Simplex { .. } => SimplicialComplex::new(&ground, &[self.left.clone()]),
            Nucleus::DisjointSimplices { .. } => {
                SimplicialComplex::new(&ground, &[self.left.clone(), self.right.clone()])
            }
            Nucleus::DualDisjoint { .. } => {
                let mut facets = Vec::new();
                for a in &self.left {
                    for b in &self.right {
                        facets.push(ground.iter().filter(|v| *v != a && *v != b).cloned().collect());
                    }
                }
                SimplicialComplex::new(&ground, &facets)
            }
        }
    }

    /// Rebuilds the complex from the nucleus by the recorded steps.
    pub fn replay(&self) -> Result<SimplicialComplex> {
        let mut c = self.nucleus_complex()?;
        for s in &self.steps {
            c = c.extend(s.op, &s.vertex)?;
        }
        Ok(c)
    }

    pub fn replays_to(&self, c: &SimplicialComplex) -> bool {
        self.replay().is_ok_and(|r| r.same_as(c))
    }

    /// Checks the weight clause recorded in the certificate against `pair`.
    pub fn weights_satisfied(&self, pair: &HMPair) -> bool {
        let Some(case) = self.weight_case else {
            return false;
        };
        let w = |v: &str| pair.weight(v).unwrap_or(0);
        let lawrence: Vec<u64> = self
            .steps
            .iter()
            .filter(|s| s.op == VertexKind::Lawrence)
            .map(|s| w(&s.vertex))
            .collect();
        match (case, self.nucleus) {
            (WeightCase::BinaryLawrence, Nucleus::Simplex { .. } | Nucleus::DisjointSimplices { .. }) => {
                lawrence.iter().all(|&x| x == 2)
            }
            (WeightCase::SingleWeightThreeLawrence, Nucleus::DisjointSimplices { n: 0, .. }) => {
                self.right.len() == 1
                    && w(&self.right[0]) == 2
                    && lawrence.iter().all(|&x| x == 2 || x == 3)
                    && lawrence.iter().filter(|&&x| x == 3).count() <= 1
            }
            (WeightCase::BinaryDual, Nucleus::DualDisjoint { .. }) => {
                lawrence.iter().all(|&x| x == 2) && self.left.iter().chain(&self.right).all(|v| w(v) == 2)
            }
            _ => false,
        }
    }
}

/// Nucleus candidates of a state, each with its two roles as masks.
fn nuclei(c: &RawComplex) -> Vec<(Nucleus, Mask, Mask)> {
    let g = c.ground;
    let mut out = Vec::new();
    if c.facets == [g] {
        out.push((Nucleus::Simplex { m: g.count_ones() as isize - 1 }, g, 0));
    }
    if c.facets.len() == 2 {
        let (a, b) = (c.facets[0], c.facets[1]);
        if a != 0 && b != 0 && a & b == 0 && a | b == g {
            let m = a.count_ones() as usize - 1;
            let n = b.count_ones() as usize - 1;
            out.push((Nucleus::DisjointSimplices { m, n }, a, b));
            if m != n || m == 0 {
                out.push((Nucleus::DisjointSimplices { m: n, n: m }, b, a));
            }
        }
    }
    let k = g.count_ones();
    if k >= 2 {
        let vs: Vec<usize> = bits(g).collect();
        // every facet misses exactly two vertices
        if c.facets.iter().all(|&f| f.count_ones() == k - 2) {
            for code in 1u64..(1 << vs.len()) - 1 {
                let p: Mask = bits(code).fold(0, |acc, i| acc | (1 << vs[i]));
                let q = g & !p;
                let mut want: Vec<Mask> = bits(p)
                    .flat_map(|a| bits(q).map(move |b| g & !(1 << a) & !(1 << b)))
                    .collect();
                want.sort_unstable();
                if want == c.facets {
                    let m = p.count_ones() as usize - 1;
                    let n = q.count_ones() as usize - 1;
                    out.push((Nucleus::DualDisjoint { m, n }, p, q));
                }
            }
        }
    }
    out
}

struct Search<'a> {
    labels: &'a [String],
    weights: Option<&'a [u64]>,
    failed: HashSet<(RawComplex, bool)>,
    /// Peeled vertices, outermost first.
    peeled: Vec<(VertexKind, usize)>,
}

impl Search<'_> {
    fn weight(&self, v: usize) -> u64 {
        self.weights.map_or(2, |w| w[v])
    }

    fn accept(&self, nucleus: Nucleus, left: Mask, right: Mask, three_used: bool) -> Option<Option<WeightCase>> {
        if self.weights.is_none() {
            return Some(None);
        }
        let all_two = |m: Mask| bits(m).all(|v| self.weight(v) == 2);
        match nucleus {
            Nucleus::Simplex { .. } => (!three_used).then_some(Some(WeightCase::BinaryLawrence)),
            Nucleus::DisjointSimplices { n, .. } => {
                if !three_used {
                    Some(Some(WeightCase::BinaryLawrence))
                } else if n == 0 && all_two(right) {
                    Some(Some(WeightCase::SingleWeightThreeLawrence))
                } else {
                    None
                }
            }
            Nucleus::DualDisjoint { .. } => {
                (!three_used && all_two(left | right)).then_some(Some(WeightCase::BinaryDual))
            }
        }
    }

    fn certificate(&self, nucleus: Nucleus, left: Mask, right: Mask, case: Option<WeightCase>) -> NuclearCertificate {
        let names = |m: Mask| bits(m).map(|v| self.labels[v].clone()).collect::<Vec<_>>();
        let steps = self
            .peeled
            .iter()
            .rev()
            .map(|&(op, v)| ConstructionStep {
                op,
                vertex: self.labels[v].clone(),
                weight: self.weights.map(|w| w[v]),
            })
            .collect();
        NuclearCertificate {
            nucleus,
            left: names(left),
            right: names(right),
            steps,
            weight_case: case,
        }
    }

    fn run(&mut self, c: &RawComplex, three_used: bool) -> Option<NuclearCertificate> {
        if self.failed.contains(&(c.clone(), three_used)) {
            return None;
        }
        for (nucleus, left, right) in nuclei(c) {
            if let Some(case) = self.accept(nucleus, left, right, three_used) {
                return Some(self.certificate(nucleus, left, right, case));
            }
        }
        for v in bits(c.ground) {
            let mut moves: Vec<(VertexKind, RawComplex, bool)> = Vec::new();
            if c.is_cone_vertex(v) {
                moves.push((VertexKind::Cone, c.link(v), three_used));
            }
            if c.is_ghost_vertex(v) {
                moves.push((VertexKind::Ghost, c.delete(v), three_used));
            }
            if c.is_lawrence_vertex(v) {
                match self.weight(v) {
                    2 => moves.push((VertexKind::Lawrence, c.link(v), three_used)),
                    3 if !three_used => moves.push((VertexKind::Lawrence, c.link(v), true)),
                    _ => {}
                }
            }
            for (kind, next, t) in moves {
                self.peeled.push((kind, v));
                if let Some(cert) = self.run(&next, t) {
                    return Some(cert);
                }
                self.peeled.pop();
            }
        }
        self.failed.insert((c.clone(), three_used));
        None
    }
}

/// A decomposition of `c` as a nuclear complex, if one exists.
pub fn nuclear_decompose(c: &SimplicialComplex) -> Option<NuclearCertificate> {
    let mut s = Search {
        labels: c.ground(),
        weights: None,
        failed: HashSet::new(),
        peeled: Vec::new(),
    };
    s.run(c.raw(), false)
}

/// A decomposition of the pair's complex that also satisfies one of the
/// weight clauses for unimodularity.
pub fn weighted_decompose(pair: &HMPair) -> Option<NuclearCertificate> {
    let mut s = Search {
        labels: pair.ground(),
        weights: Some(pair.weights()),
        failed: HashSet::new(),
        peeled: Vec::new(),
    };
    s.run(pair.complex().raw(), false)
}

/// Every distinct nucleus (with its role assignment) reachable by peeling.
pub fn reachable_nuclei(c: &SimplicialComplex) -> Vec<NuclearCertificate> {
    fn walk(
        c: &RawComplex,
        labels: &[String],
        seen: &mut HashSet<RawComplex>,
        out: &mut Vec<NuclearCertificate>,
    ) {
        if !seen.insert(c.clone()) {
            return;
        }
        for (nucleus, left, right) in nuclei(c) {
            let names = |m: Mask| bits(m).map(|v| labels[v].clone()).collect::<Vec<_>>();
            out.push(NuclearCertificate {
                nucleus,
                left: names(left),
                right: names(right),
                steps: Vec::new(),
                weight_case: None,
            });
        }
        for v in bits(c.ground) {
            if c.is_cone_vertex(v) || c.is_lawrence_vertex(v) {
                walk(&c.link(v), labels, seen, out);
            }
            if c.is_ghost_vertex(v) {
                walk(&c.delete(v), labels, seen, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(c.raw(), c.ground(), &mut HashSet::new(), &mut out);
    out
}

/// Rejects certificates that do not rebuild `c`.
pub fn check_certificate(cert: &NuclearCertificate, c: &SimplicialComplex) -> Result<()> {
    if cert.replays_to(c) {
        Ok(())
    } else {
        Err(Error::Internal("certificate does not replay to the complex".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(g: &str, f: &str) -> SimplicialComplex {
        SimplicialComplex::parse(g, f).unwrap()
    }

    #[test]
    fn triangle_is_lawrence_over_two_points() {
        let c = cx("1 2 3", "12 13 23");
        let cert = nuclear_decompose(&c).unwrap();
        assert_eq!(cert.nucleus, Nucleus::DisjointSimplices { m: 0, n: 0 });
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].op, VertexKind::Lawrence);
        assert!(cert.replays_to(&c));
    }

    #[test]
    fn path_on_four_vertices_is_not_nuclear() {
        assert!(nuclear_decompose(&cx("1 2 3 4", "12 23 34")).is_none());
    }

    #[test]
    fn disjoint_simplices_are_their_own_nucleus() {
        let c = cx("1 2 3 4 5", "123 45");
        let cert = nuclear_decompose(&c).unwrap();
        assert_eq!(cert.nucleus, Nucleus::DisjointSimplices { m: 2, n: 1 });
        assert!(cert.steps.is_empty());
    }

    #[test]
    fn dual_nucleus_is_recognised() {
        // D_{1,1}: the four-cycle
        let c = cx("1 2 3 4", "13 14 23 24");
        let found = reachable_nuclei(&c);
        assert!(found.iter().any(|n| n.nucleus == Nucleus::DualDisjoint { m: 1, n: 1 }));
        assert!(nuclear_decompose(&c).unwrap().replays_to(&c));
    }

    #[test]
    fn ghost_only_complex_comes_from_the_empty_simplex() {
        let c = cx("1", "-");
        let cert = nuclear_decompose(&c).unwrap();
        assert!(cert.replays_to(&c));
        let p = HMPair::new(c, vec![5]).unwrap();
        let w = weighted_decompose(&p).unwrap();
        assert_eq!(w.nucleus, Nucleus::Simplex { m: -1 });
        assert!(w.weights_satisfied(&p));
    }

    #[test]
    fn weight_clauses() {
        let ok = HMPair::parse("1 2 3", "12 13 23", &[3, 2, 7]).unwrap();
        let cert = weighted_decompose(&ok).unwrap();
        assert!(cert.weights_satisfied(&ok));
        assert!(cert.replays_to(ok.complex()));
        let bad = HMPair::parse("1 2 3", "12 13 23", &[3, 3, 3]).unwrap();
        assert!(weighted_decompose(&bad).is_none());
        let cycle = HMPair::parse("1 2 3 4", "12 23 34 14", &[2, 2, 2, 3]).unwrap();
        assert!(weighted_decompose(&cycle).is_none());
    }
}
