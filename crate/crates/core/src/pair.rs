use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{bits, Mask, RawComplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A simplicial complex together with a number of states (at least 2) for
/// every ground-set vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct HMPair {
    complex: SimplicialComplex,
    /// Aligned with `complex.ground()`.
    weights: Vec<u64>,
}

impl HMPair {
    pub fn new(complex: SimplicialComplex, weights: Vec<u64>) -> Result<Self> {
        if weights.len() != complex.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} vertices",
                weights.len(),
                complex.len()
            )));
        }
        for (l, &w) in complex.ground().iter().zip(&weights) {
            if w < 2 {
                return Err(Error::InvalidWeight {
                    vertex: l.clone(),
                    weight: w,
                });
            }
        }
        Ok(HMPair { complex, weights })
    }

    /// Weights looked up by label.
    pub fn with_weight_map(complex: SimplicialComplex, weights: &BTreeMap<String, u64>) -> Result<Self> {
        let w = complex
            .ground()
            .iter()
            .map(|l| weights.get(l).copied().ok_or_else(|| Error::MissingWeight(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        HMPair::new(complex, w)
    }

    pub fn binary(complex: SimplicialComplex) -> Self {
        let n = complex.len();
        HMPair {
            complex,
            weights: vec![2; n],
        }
    }

    /// Shorthand used throughout the tests: `HMPair::parse("1 2 3", "12 23", &[3, 2, 2])`.
    pub fn parse(ground: &str, facets: &str, weights: &[u64]) -> Result<Self> {
        HMPair::new(SimplicialComplex::parse(ground, facets)?, weights.to_vec())
    }

    pub(crate) fn from_raw(labels: &[String], all_weights: &[u64], raw: &RawComplex) -> Self {
        let complex = SimplicialComplex::from_raw(labels, raw);
        let weights = bits(raw.ground).map(|i| all_weights[i]).collect();
        HMPair { complex, weights }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, v: &str) -> Result<u64> {
        Ok(self.weights[self.complex.index_of(v)?])
    }

    pub fn ground(&self) -> &[String] {
        self.complex.ground()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_map(&self) -> BTreeMap<String, u64> {
        self.ground().iter().cloned().zip(self.weights.iter().copied()).collect()
    }

    /// Number of design-matrix columns, i.e. joint states.
    pub fn n_columns(&self) -> u128 {
        self.weights.iter().map(|&w| w as u128).product()
    }

    /// Joint state of column `col`; states are 1-based and the last vertex
    /// varies fastest.
    pub fn column_state(&self, mut col: usize) -> Vec<u64> {
        let mut out = vec![0; self.weights.len()];
        for (slot, &w) in out.iter_mut().zip(&self.weights).rev() {
            *slot = (col as u64 % w) + 1;
            col /= w as usize;
        }
        out
    }

    pub fn column_index(&self, state: &[u64]) -> usize {
        state
            .iter()
            .zip(&self.weights)
            .fold(0usize, |acc, (&s, &w)| acc * w as usize + (s - 1) as usize)
    }

    pub fn column_labels(&self) -> Vec<Vec<u64>> {
        (0..self.n_columns() as usize).map(|c| self.column_state(c)).collect()
    }

    pub fn delete_vertex(&self, v: &str) -> Result<HMPair> {
        let i = self.complex.index_of(v)?;
        let labels = self.complex.ground().to_vec();
        Ok(HMPair::from_raw(&labels, &self.weights, &self.complex.raw().delete(i)))
    }

    pub fn link_vertex(&self, v: &str) -> Result<HMPair> {
        let i = self.complex.index_of(v)?;
        let labels = self.complex.ground().to_vec();
        Ok(HMPair::from_raw(&labels, &self.weights, &self.complex.raw().link(i)))
    }

    pub fn reordered<S: AsRef<str>>(&self, order: &[S]) -> Result<HMPair> {
        let c = self.complex.reordered(order)?;
        let w = order
            .iter()
            .map(|l| self.weight(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        HMPair::new(c, w)
    }

    fn check_merge_face(&self, face: &[&str]) -> Result<Mask> {
        let e = self.complex.mask_of(face)?;
        let raw = self.complex.raw();
        if e == 0 || !raw.is_face(e) {
            return Err(Error::NotAFace(face.iter().map(|s| s.to_string()).collect()));
        }
        if raw.facets.iter().any(|&f| f & e != 0 && f & e != e) {
            return Err(Error::FaceCondition(face.iter().map(|s| s.to_string()).collect()));
        }
        Ok(e)
    }

    /// Replaces the face `E` by a single vertex whose number of states is the
    /// product of the weights on `E`. Requires that every facet meeting `E`
    /// contains it. The new vertex takes the position of the first vertex of
    /// `E` and is labeled by joining the labels of `E` with `+` (a singleton
    /// keeps its label). The integer kernel of the design matrix is unchanged
    /// under the column bijection of [`HMPair::merge_column_map`].
    pub fn merge_face(&self, face: &[&str]) -> Result<HMPair> {
        let e = self.check_merge_face(face)?;
        let n = self.len();
        let first = e.trailing_zeros() as usize;
        let merged_label = bits(e)
            .map(|i| self.ground()[i].as_str())
            .collect::<Vec<_>>()
            .join("+");
        let merged_weight: u64 = bits(e).map(|i| self.weights[i]).product();

        let mut labels = Vec::new();
        let mut weights = Vec::new();
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            if i == first {
                pos[i] = labels.len();
                labels.push(merged_label.clone());
                weights.push(merged_weight);
            } else if e & (1 << i) == 0 {
                pos[i] = labels.len();
                labels.push(self.ground()[i].clone());
                weights.push(self.weights[i]);
            }
        }
        let v0 = pos[first];
        let facets = self.complex.raw().facets.iter().map(|&f| {
            let mut m: Mask = 0;
            for i in bits(f & !e) {
                m |= 1 << pos[i];
            }
            if f & e != 0 {
                m |= 1 << v0;
            }
            m
        });
        let raw = RawComplex::new(crate::complex::full_mask(labels.len()), facets);
        let complex = SimplicialComplex::from_raw(&labels, &raw);
        HMPair::new(complex, weights)
    }

    /// For each column of this pair, the index of the matching column of
    /// `merge_face(face)`. The merged vertex's state enumerates the states of
    /// `E` lexicographically.
    pub fn merge_column_map(&self, face: &[&str]) -> Result<Vec<usize>> {
        let e = self.check_merge_face(face)?;
        let merged = self.merge_face(face)?;
        let first = e.trailing_zeros() as usize;
        let ncols = self.n_columns() as usize;
        let mut out = Vec::with_capacity(ncols);
        for c in 0..ncols {
            let st = self.column_state(c);
            let mut new_state = Vec::with_capacity(merged.len());
            for i in 0..self.len() {
                if i == first {
                    let s = bits(e).fold(0u64, |acc, j| acc * self.weights[j] + (st[j] - 1));
                    new_state.push(s + 1);
                } else if e & (1 << i) == 0 {
                    new_state.push(st[i]);
                }
            }
            out.push(merged.column_index(&new_state));
        }
        Ok(out)
    }
}

impl fmt::Display for HMPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "{} d=({})", self.complex, w.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_must_be_at_least_two() {
        let c = SimplicialComplex::parse("1 2", "12").unwrap();
        assert!(matches!(HMPair::new(c.clone(), vec![2, 1]), Err(Error::InvalidWeight { .. })));
        assert!(HMPair::new(c, vec![2]).is_err());
    }

    #[test]
    fn column_states_round_trip() {
        let p = HMPair::parse("1 2 3", "12 23", &[3, 2, 2]).unwrap();
        assert_eq!(p.n_columns(), 12);
        assert_eq!(p.column_state(0), vec![1, 1, 1]);
        assert_eq!(p.column_state(1), vec![1, 1, 2]);
        assert_eq!(p.column_state(11), vec![3, 2, 2]);
        for c in 0..12 {
            assert_eq!(p.column_index(&p.column_state(c)), c);
        }
    }

    #[test]
    fn merge_two_faces_gives_weighted_triangle() {
        let p = HMPair::parse("1 2 3 4 5", "125 345 1234", &[2, 2, 2, 2, 3]).unwrap();
        let q = p.merge_face(&["1", "2"]).unwrap();
        let r = q.merge_face(&["3", "4"]).unwrap();
        assert_eq!(r.weights(), &[4, 4, 3]);
        let tri = SimplicialComplex::new(&["1+2", "3+4", "5"], &[
            vec!["1+2", "3+4"],
            vec!["1+2", "5"],
            vec!["3+4", "5"],
        ])
        .unwrap();
        assert_eq!(r.complex(), &tri);
    }

    #[test]
    fn merge_singleton_is_identity() {
        let p = HMPair::parse("1 2 3", "12 23", &[3, 2, 2]).unwrap();
        let q = p.merge_face(&["2"]).unwrap();
        assert_eq!(q, p);
        let map = p.merge_column_map(&["2"]).unwrap();
        assert!(map.iter().enumerate().all(|(i, &j)| i == j));
    }

    #[test]
    fn merge_rejects_face_crossing_a_facet() {
        let p = HMPair::parse("1 2 3", "12 23", &[2, 2, 2]).unwrap();
        assert!(matches!(p.merge_face(&["1", "2"]), Err(Error::FaceCondition(_))));
        assert!(matches!(p.merge_face(&["1", "3"]), Err(Error::NotAFace(_))));
    }

    #[test]
    fn merge_second_example() {
        let p = HMPair::parse("1 2 3 4", "124 34 123", &[2, 2, 3, 3]).unwrap();
        let q = p.merge_face(&["1", "2"]).unwrap();
        assert_eq!(q.weights(), &[4, 3, 3]);
        assert_eq!(q.complex().facets().len(), 3);
        assert!(q.complex().facets().iter().all(|f| f.len() == 2));
    }
}
