use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Sparse integer vector over column indices, with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedVector {
    entries: Vec<(usize, i64)>,
}

impl SignedVector {
    pub fn from_dense(x: &[i64]) -> Self {
        SignedVector {
            entries: x
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i, v))
                .collect(),
        }
    }

    pub fn from_entries(mut entries: Vec<(usize, i64)>) -> Self {
        entries.retain(|&(_, v)| v != 0);
        entries.sort_unstable();
        entries.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 += a.1;
                true
            } else {
                false
            }
        });
        entries.retain(|&(_, v)| v != 0);
        SignedVector { entries }
    }

    pub fn entries(&self) -> &[(usize, i64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(i, _)| i)
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.entries
            .binary_search_by_key(&i, |&(k, _)| k)
            .map_or(0, |p| self.entries[p].1)
    }

    pub fn to_dense(&self, n: usize) -> Vec<i64> {
        let mut x = vec![0; n];
        for &(i, v) in &self.entries {
            x[i] = v;
        }
        x
    }

    pub fn neg(&self) -> Self {
        SignedVector {
            entries: self.entries.iter().map(|&(i, v)| (i, -v)).collect(),
        }
    }

    /// Positive part as (index, value) pairs.
    pub fn positive(&self) -> Vec<(usize, i64)> {
        self.entries.iter().copied().filter(|&(_, v)| v > 0).collect()
    }

    pub fn negative(&self) -> Vec<(usize, i64)> {
        self.entries
            .iter()
            .filter(|&&(_, v)| v < 0)
            .map(|&(i, v)| (i, -v))
            .collect()
    }

    /// Sign convention: the entry at the smallest index of the support is
    /// positive.
    pub fn canonical(&self) -> Self {
        match self.entries.first() {
            Some(&(_, v)) if v < 0 => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.entries.first().is_none_or(|&(_, v)| v > 0)
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.iter().map(|&(_, v)| v.abs()).max().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.max_abs() <= 1
    }

    /// `self` is conformal to and below `other`: same signs, and
    /// `|self_i| <= |other_i|` everywhere.
    pub fn conformally_below(&self, other: &SignedVector) -> bool {
        self.entries.iter().all(|&(i, v)| {
            let w = other.get(i);
            (v > 0 && w >= v) || (v < 0 && w <= v)
        })
    }

    /// Relabel indices through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Self {
        SignedVector::from_entries(self.entries.iter().map(|&(i, v)| (map(i), v)).collect())
    }

    pub fn one_norm(&self) -> i64 {
        self.entries.iter().map(|&(_, v)| v.abs()).sum()
    }
}

impl fmt::Display for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(i, v)| format!("{i}:{v}")).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// A set of Graver elements stored by canonical representative. Each
/// element stands for itself and its negation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraverBasis {
    n_cols: usize,
    elements: BTreeSet<SignedVector>,
}

impl GraverBasis {
    pub fn new(n_cols: usize) -> Self {
        GraverBasis {
            n_cols,
            elements: BTreeSet::new(),
        }
    }

    pub fn from_vectors(n_cols: usize, vs: impl IntoIterator<Item = SignedVector>) -> Self {
        let mut b = GraverBasis::new(n_cols);
        for v in vs {
            b.insert(v);
        }
        b
    }

    pub fn insert(&mut self, v: SignedVector) -> bool {
        if v.is_zero() {
            return false;
        }
        self.elements.insert(v.canonical())
    }

    pub fn contains(&self, v: &SignedVector) -> bool {
        self.elements.contains(&v.canonical())
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SignedVector> {
        self.elements.iter()
    }

    pub fn to_vec(&self) -> Vec<SignedVector> {
        self.elements.iter().cloned().collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().all(SignedVector::is_unit)
    }

    /// Relabel columns through `map` into a space of `n_cols` columns.
    pub fn remap(&self, n_cols: usize, map: impl Fn(usize) -> usize) -> GraverBasis {
        GraverBasis::from_vectors(n_cols, self.elements.iter().map(|v| v.remap(&map)))
    }
}

impl<'a> IntoIterator for &'a GraverBasis {
    type Item = &'a SignedVector;
    type IntoIter = std::collections::btree_set::Iter<'a, SignedVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}
