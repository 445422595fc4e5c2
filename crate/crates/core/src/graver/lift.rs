//! Graver bases of block constructions from the Graver basis of the block.
//!
//! For a basis on `n` columns every lift uses the layout `block * n + col`:
//! `q` diagonal copies for a cone, `[A ... A]` for a ghost, and `p` parts of
//! a Lawrence lift. The three-part lift over a ghost uses
//! `part * (q * n) + slot * n + col`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::vector::{GraverBasis, SignedVector};

/// Graver basis of the block diagonal matrix with `q` copies.
pub fn lift_cone(b: &GraverBasis, q: usize) -> GraverBasis {
    let n = b.n_cols();
    let mut out = GraverBasis::new(q * n);
    for u in b.iter() {
        for slot in 0..q {
            out.insert(u.remap(|i| slot * n + i));
        }
    }
    out
}

/// Calls `f` with every assignment of `k` items to `q` slots.
fn for_each_assignment(k: usize, q: usize, mut f: impl FnMut(&[usize])) {
    let mut slots = vec![0usize; k];
    loop {
        f(&slots);
        let Some(i) = (0..k).rev().find(|&i| slots[i] + 1 < q) else {
            return;
        };
        slots[i] += 1;
        for s in &mut slots[i + 1..] {
            *s = 0;
        }
    }
}

/// Graver basis of `[A ... A]` (`q` copies) from a unimodular Graver basis
/// of `A`: swaps `e_{j,i} - e_{k,i}` and every spreading of every element.
pub fn lift_ghost(b: &GraverBasis, q: usize) -> Result<GraverBasis> {
    if !b.is_unit() {
        return Err(Error::NonUnimodularBasis);
    }
    let n = b.n_cols();
    let mut out = GraverBasis::new(q * n);
    for i in 0..n {
        for j in 0..q {
            for k in j + 1..q {
                out.insert(SignedVector::from_entries(vec![(j * n + i, 1), (k * n + i, -1)]));
            }
        }
    }
    for u in b.iter() {
        let e = u.entries();
        for_each_assignment(e.len(), q, |slots| {
            let v = e.iter().zip(slots).map(|(&(i, x), &s)| (s * n + i, x)).collect();
            out.insert(SignedVector::from_entries(v));
        });
    }
    Ok(out)
}

/// Graver basis of the two-part Lawrence lift: `(u, -u)`.
pub fn lift_lambda2(b: &GraverBasis) -> GraverBasis {
    let n = b.n_cols();
    let mut out = GraverBasis::new(2 * n);
    for u in b.iter() {
        let mut e = u.entries().to_vec();
        e.extend(u.entries().iter().map(|&(i, x)| (n + i, -x)));
        out.insert(SignedVector::from_entries(e));
    }
    out
}

/// Values of one column class of a three-part vector: `[part][slot]`.
type Class = [Vec<i64>; 3];

fn classes(v: &SignedVector, q: usize, n: usize) -> BTreeMap<usize, Class> {
    let mut out: BTreeMap<usize, Class> = BTreeMap::new();
    for &(idx, x) in v.entries() {
        let (part, rest) = (idx / (q * n), idx % (q * n));
        let (slot, col) = (rest / n, rest % n);
        out.entry(col).or_insert_with(|| [vec![0; q], vec![0; q], vec![0; q]])[part][slot] = x;
    }
    out
}

fn from_classes(c: &BTreeMap<usize, Class>, q: usize, n: usize) -> SignedVector {
    let mut e = Vec::new();
    for (&col, parts) in c {
        for (part, slots) in parts.iter().enumerate() {
            for (slot, &x) in slots.iter().enumerate() {
                if x != 0 {
                    e.push((part * q * n + slot * n + col, x));
                }
            }
        }
    }
    SignedVector::from_entries(e)
}

/// Single relocations: in one column class, a slot holding `-s` in one part
/// and `s` in another while the third part is empty on the whole class gets
/// the `s` moved to an empty slot, and the third part receives `s` at the
/// old slot and `-s` at the new one.
fn relocations(v: &SignedVector, q: usize, n: usize) -> Vec<SignedVector> {
    let c = classes(v, q, n);
    let mut out = Vec::new();
    for (&col, parts) in &c {
        let empty_slots: Vec<usize> = (0..q).filter(|&s| parts.iter().all(|p| p[s] == 0)).collect();
        if empty_slots.is_empty() {
            continue;
        }
        for z in 0..3 {
            if parts[z].iter().any(|&x| x != 0) {
                continue;
            }
            for j in 0..q {
                for y in (0..3).filter(|&y| y != z) {
                    let x = 3 - y - z;
                    if parts[y][j] == 0 || parts[x][j] != -parts[y][j] {
                        continue;
                    }
                    let s = parts[y][j];
                    for &k in &empty_slots {
                        let mut next = c.clone();
                        let cls = next.get_mut(&col).unwrap();
                        cls[y][j] = 0;
                        cls[y][k] = s;
                        cls[z][j] = s;
                        cls[z][k] = -s;
                        out.push(from_classes(&next, q, n));
                    }
                }
            }
        }
    }
    out
}

/// Graver basis of the three-part Lawrence lift of `[A ... A]` (`q` copies)
/// from the Graver basis of the three-part Lawrence lift of `A`, assuming
/// the result is unimodular. `b3` lives on `3n` columns in the layout
/// `part * n + col`.
pub fn lift_lambda3_over_ghost(b3: &GraverBasis, q: usize) -> Result<GraverBasis> {
    if b3.n_cols() % 3 != 0 {
        return Err(Error::InvalidArgument("three-part basis needs 3n columns".into()));
    }
    if !b3.is_unit() {
        return Err(Error::NonUnimodularBasis);
    }
    let n = b3.n_cols() / 3;
    let width = 3 * q * n;
    let mut found: BTreeSet<SignedVector> = BTreeSet::new();
    // swaps inside one column class between two parts
    for col in 0..n {
        for a in 0..3 {
            for b in a + 1..3 {
                for j in 0..q {
                    for k in j + 1..q {
                        let at = |part: usize, slot: usize| part * q * n + slot * n + col;
                        found.insert(
                            SignedVector::from_entries(vec![(at(a, j), 1), (at(a, k), -1), (at(b, j), -1), (at(b, k), 1)])
                                .canonical(),
                        );
                    }
                }
            }
        }
    }
    // spreadings: one slot per column class
    for w in b3.iter() {
        let mut cols: Vec<usize> = w.support().map(|i| i % n).collect();
        cols.sort_unstable();
        cols.dedup();
        for_each_assignment(cols.len(), q, |slots| {
            let slot_of = |c: usize| slots[cols.binary_search(&c).unwrap()];
            let e = w
                .entries()
                .iter()
                .map(|&(i, x)| {
                    let (part, col) = (i / n, i % n);
                    (part * q * n + slot_of(col) * n + col, x)
                })
                .collect();
            found.insert(SignedVector::from_entries(e).canonical());
        });
    }
    // closure under relocations; each fires at most once per column class
    let mut queue: Vec<SignedVector> = found.iter().cloned().collect();
    while let Some(v) = queue.pop() {
        for r in relocations(&v, q, n) {
            let r = r.canonical();
            if found.insert(r.clone()) {
                queue.push(r);
            }
        }
    }
    Ok(GraverBasis::from_vectors(width, minimal(found)))
}

/// Drops every vector that has another vector of the set conformally below
/// it.
pub(crate) fn minimal(set: BTreeSet<SignedVector>) -> Vec<SignedVector> {
    let mut all: Vec<SignedVector> = set.into_iter().collect();
    all.sort_by_key(|v| v.support_len());
    let words = all
        .iter()
        .flat_map(|v| v.support().last())
        .max()
        .map_or(1, |m| m / 64 + 1);
    let masks: Vec<Vec<u64>> = all
        .iter()
        .map(|v| {
            let mut m = vec![0u64; words];
            for i in v.support() {
                m[i / 64] |= 1 << (i % 64);
            }
            m
        })
        .collect();
    let mut keep = Vec::new();
    for (i, v) in all.iter().enumerate() {
        let dominated = (0..i).any(|j| {
            all[j].support_len() < v.support_len()
                && masks[j].iter().zip(&masks[i]).all(|(a, b)| a & !b == 0)
                && (all[j].conformally_below(v) || all[j].neg().conformally_below(v))
        });
        if !dominated {
            keep.push(v.clone());
        }
    }
    keep
}
