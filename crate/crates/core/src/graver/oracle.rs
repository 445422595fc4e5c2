//! Graver bases of integer matrices by project-and-lift completion.
//!
//! The kernel lattice is projected onto a coordinate set `J` on which the
//! projection is injective. Its Graver basis there is known (unit vectors)
//! or computed by a plain completion, and the remaining coordinates are then
//! lifted one at a time. Each lift is a completion under the conformal order
//! restricted to the coordinates seen so far, processed in order of
//! increasing norm.

use std::cell::Cell;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::kernel_lattice;
use crate::matrix::IntMatrix;
use crate::vector::{GraverBasis, SignedVector};

const WORDS: usize = 4;
/// Hard ceiling from the fixed-width support masks.
pub const MAX_SUPPORTED_COLUMNS: usize = WORDS * 64;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub max_columns: usize,
    /// Abort once the working set holds this many vectors (both signs).
    pub max_elements: usize,
    /// Abort once this many critical pairs are pending.
    pub max_pairs: usize,
    /// Abort once this many critical pairs have been processed in total.
    pub max_work: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_columns: 150,
            max_elements: 400_000,
            max_pairs: 60_000_000,
            max_work: usize::MAX,
        }
    }
}

type Bits = [u64; WORDS];

fn set_bit(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn disjoint(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

/// A working vector with its sign pattern on the active coordinates.
struct Elem {
    x: Vec<i64>,
    pos: Bits,
    neg: Bits,
    norm: i64,
    unit: bool,
}

impl Elem {
    fn new(x: Vec<i64>, active: &[usize]) -> Elem {
        let mut e = Elem {
            x,
            pos: [0; WORDS],
            neg: [0; WORDS],
            norm: 0,
            unit: true,
        };
        e.refresh(active);
        e
    }

    fn refresh(&mut self, active: &[usize]) {
        self.pos = [0; WORDS];
        self.neg = [0; WORDS];
        self.norm = 0;
        self.unit = true;
        for (k, &c) in active.iter().enumerate() {
            let v = self.x[c];
            if v > 0 {
                set_bit(&mut self.pos, k);
            } else if v < 0 {
                set_bit(&mut self.neg, k);
            }
            self.norm += v.abs();
            if v.abs() > 1 {
                self.unit = false;
            }
        }
    }

    /// `self` is conformally below `s` on the active coordinates.
    fn below(&self, s: &Elem, active: &[usize]) -> bool {
        if !subset(&self.pos, &s.pos) || !subset(&self.neg, &s.neg) {
            return false;
        }
        self.unit || active.iter().all(|&c| self.x[c].abs() <= s.x[c].abs())
    }
}

/// Ternary trie over the sign of each active coordinate, used to find a
/// reducer of a vector quickly.
enum Node {
    Leaf(Vec<u32>),
    Split([Option<Box<Node>>; 3]),
}

const LEAF_CAP: usize = 24;

fn sign_slot(v: i64) -> usize {
    match v.signum() {
        -1 => 0,
        0 => 1,
        _ => 2,
    }
}

struct Index {
    root: Node,
}

impl Index {
    fn new() -> Self {
        Index {
            root: Node::Leaf(Vec::new()),
        }
    }

    fn insert(&mut self, id: u32, elems: &[Elem], active: &[usize]) {
        let mut node = &mut self.root;
        let mut depth = 0;
        loop {
            match node {
                Node::Leaf(ids) => {
                    ids.push(id);
                    if ids.len() > LEAF_CAP && depth < active.len() {
                        let ids = std::mem::take(ids);
                        let mut children: [Option<Box<Node>>; 3] = [None, None, None];
                        for i in ids {
                            let s = sign_slot(elems[i as usize].x[active[depth]]);
                            match children[s].get_or_insert_with(|| Box::new(Node::Leaf(Vec::new()))).as_mut() {
                                Node::Leaf(v) => v.push(i),
                                Node::Split(_) => unreachable!(),
                            }
                        }
                        *node = Node::Split(children);
                    }
                    return;
                }
                Node::Split(children) => {
                    let s = sign_slot(elems[id as usize].x[active[depth]]);
                    node = children[s].get_or_insert_with(|| Box::new(Node::Leaf(Vec::new())));
                    depth += 1;
                }
            }
        }
    }

    /// Some element other than `skip` lying conformally below `s`.
    fn find_reducer(&self, s: &Elem, skip: Option<u32>, elems: &[Elem], active: &[usize]) -> Option<u32> {
        let mut stack: Vec<(&Node, usize)> = vec![(&self.root, 0)];
        while let Some((node, depth)) = stack.pop() {
            match node {
                Node::Leaf(ids) => {
                    for &i in ids {
                        if Some(i) != skip && elems[i as usize].below(s, active) {
                            return Some(i);
                        }
                    }
                }
                Node::Split(children) => {
                    let v = s.x[active[depth]];
                    if let Some(c) = &children[1] {
                        stack.push((c, depth + 1));
                    }
                    if v != 0 {
                        if let Some(c) = &children[sign_slot(v)] {
                            stack.push((c, depth + 1));
                        }
                    }
                }
            }
        }
        None
    }
}

/// What the completion should do when it meets a vector with an entry of
/// absolute value at least two on the active coordinates.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Full,
    StopOnNonUnit,
}

enum Outcome {
    Basis(Vec<Vec<i64>>),
    NonUnit(Vec<i64>),
}

struct Completion<'a> {
    cfg: &'a OracleConfig,
    work: &'a Cell<usize>,
    active: Vec<usize>,
    /// Coordinate being lifted; `None` for a plain completion.
    lift: Option<usize>,
    elems: Vec<Elem>,
    /// Elements negative on the lifted coordinate, in insertion order.
    negative: Vec<u32>,
    index: Index,
}

impl<'a> Completion<'a> {
    fn new(
        cfg: &'a OracleConfig,
        work: &'a Cell<usize>,
        active: Vec<usize>,
        lift: Option<usize>,
        start: Vec<Vec<i64>>,
    ) -> Self {
        let mut c = Completion {
            cfg,
            work,
            active,
            lift,
            elems: Vec::new(),
            negative: Vec::new(),
            index: Index::new(),
        };
        for x in start {
            c.push(x);
        }
        c
    }

    fn push(&mut self, x: Vec<i64>) -> u32 {
        let id = self.elems.len() as u32;
        if self.lift.is_some_and(|i| x[i] < 0) {
            self.negative.push(id);
        }
        self.elems.push(Elem::new(x, &self.active));
        self.index.insert(id, &self.elems, &self.active);
        id
    }

    fn reduce(&self, mut s: Elem) -> Elem {
        while let Some(g) = self.index.find_reducer(&s, None, &self.elems, &self.active) {
            let g = &self.elems[g as usize].x;
            for (a, b) in s.x.iter_mut().zip(g) {
                *a -= b;
            }
            s.refresh(&self.active);
            if s.norm == 0 {
                break;
            }
        }
        s
    }

    fn guard_elements(&self) -> Result<()> {
        if self.elems.len() > self.cfg.max_elements {
            return Err(Error::GuardExceeded {
                what: "graver working set",
                limit: self.cfg.max_elements,
                actual: self.elems.len(),
            });
        }
        Ok(())
    }

    /// Completes the working set. With `lift = Some(i)` only pairs that agree
    /// in sign on the earlier coordinates and disagree on `i` are formed;
    /// otherwise every pair is formed.
    fn run(&mut self) -> Result<()> {
        let mut buckets: BTreeMap<i64, Vec<(u32, u32)>> = BTreeMap::new();
        let mut pending = 0usize;
        let n0 = self.elems.len();
        for b in 0..n0 {
            self.queue_pairs(b as u32, &mut buckets, &mut pending)?;
        }
        while let Some((_, pairs)) = buckets.pop_first() {
            pending -= pairs.len();
            self.work.set(self.work.get().saturating_add(pairs.len()));
            if self.work.get() > self.cfg.max_work {
                return Err(Error::GuardExceeded {
                    what: "graver processed pairs",
                    limit: self.cfg.max_work,
                    actual: self.work.get(),
                });
            }
            for (u, v) in pairs {
                let x: Vec<i64> = self.elems[u as usize]
                    .x
                    .iter()
                    .zip(&self.elems[v as usize].x)
                    .map(|(a, b)| a + b)
                    .collect();
                let s = self.reduce(Elem::new(x, &self.active));
                if s.norm == 0 {
                    continue;
                }
                let neg: Vec<i64> = s.x.iter().map(|a| -a).collect();
                let a = self.push(s.x);
                let b = self.push(neg);
                self.guard_elements()?;
                self.queue_pairs(a, &mut buckets, &mut pending)?;
                self.queue_pairs(b, &mut buckets, &mut pending)?;
            }
        }
        Ok(())
    }

    /// Pairs `(a, g)` for earlier elements `g`. When lifting coordinate `i`
    /// only pairs that agree in sign on the earlier coordinates and disagree
    /// on `i` matter, and of each sign-symmetric pair only the one whose
    /// newer member is positive on `i` is kept.
    fn queue_pairs(&self, a: u32, buckets: &mut BTreeMap<i64, Vec<(u32, u32)>>, pending: &mut usize) -> Result<()> {
        let ea = &self.elems[a as usize];
        match self.lift {
            Some(i) => {
                let xa = ea.x[i];
                if xa <= 0 {
                    return Ok(());
                }
                // the last active coordinate is `i`; compare on the rest
                let (pa, na) = masks_without_last(ea, self.active.len());
                for &g in &self.negative {
                    if g >= a {
                        break;
                    }
                    let eg = &self.elems[g as usize];
                    if !disjoint(&pa, &eg.neg) || !disjoint(&na, &eg.pos) {
                        continue;
                    }
                    let xg = eg.x[i];
                    let norm = ea.norm - xa + eg.norm + xg + (xa + xg).abs();
                    buckets.entry(norm).or_default().push((a, g));
                    *pending += 1;
                }
            }
            None => {
                for g in 0..a {
                    let eg = &self.elems[g as usize];
                    if ea.x.iter().zip(&eg.x).all(|(p, q)| p + q == 0) {
                        continue;
                    }
                    let norm = self.active.iter().map(|&c| (ea.x[c] + eg.x[c]).abs()).sum();
                    buckets.entry(norm).or_default().push((a, g));
                    *pending += 1;
                }
            }
        }
        if *pending > self.cfg.max_pairs {
            return Err(Error::GuardExceeded {
                what: "graver critical pairs",
                limit: self.cfg.max_pairs,
                actual: *pending,
            });
        }
        Ok(())
    }

    /// Drops every element that has another element below it.
    fn minimal(self) -> Vec<Vec<i64>> {
        let mut keep = Vec::new();
        for (i, e) in self.elems.iter().enumerate() {
            if self.index.find_reducer(e, Some(i as u32), &self.elems, &self.active).is_none() {
                keep.push(i);
            }
        }
        let mut elems = self.elems;
        keep.into_iter().map(|i| std::mem::take(&mut elems[i].x)).collect()
    }
}

fn masks_without_last(e: &Elem, len: usize) -> (Bits, Bits) {
    let (mut p, mut n) = (e.pos, e.neg);
    let k = len - 1;
    p[k / 64] &= !(1 << (k % 64));
    n[k / 64] &= !(1 << (k % 64));
    (p, n)
}

fn check_columns(a: &IntMatrix, cfg: &OracleConfig) -> Result<()> {
    let limit = cfg.max_columns.min(MAX_SUPPORTED_COLUMNS);
    if a.ncols() > limit {
        return Err(Error::GuardExceeded {
            what: "graver oracle columns",
            limit,
            actual: a.ncols(),
        });
    }
    Ok(())
}

fn complete(a: &IntMatrix, cfg: &OracleConfig, mode: Mode) -> Result<Outcome> {
    check_columns(a, cfg)?;
    let k = kernel_lattice(a)?;
    if k.basis.is_empty() {
        return Ok(Outcome::Basis(Vec::new()));
    }
    let mut active = k.free.clone();
    let mut start: Vec<Vec<i64>> = Vec::new();
    for b in &k.basis {
        start.push(b.clone());
        start.push(b.iter().map(|x| -x).collect());
    }
    let work = Cell::new(0);
    let mut current = if k.unit_on_free {
        start
    } else {
        let mut c = Completion::new(cfg, &work, active.clone(), None, start);
        c.run()?;
        c.minimal()
    };
    if mode == Mode::StopOnNonUnit {
        if let Some(bad) = first_non_unit(&current, &active) {
            return Ok(Outcome::NonUnit(bad));
        }
    }
    for i in 0..a.ncols() {
        if active.contains(&i) {
            continue;
        }
        active.push(i);
        let mut c = Completion::new(cfg, &work, active.clone(), Some(i), current);
        c.guard_elements()?;
        c.run()?;
        current = c.minimal();
        if mode == Mode::StopOnNonUnit {
            if let Some(bad) = first_non_unit(&current, &active) {
                return Ok(Outcome::NonUnit(bad));
            }
        }
    }
    Ok(Outcome::Basis(current))
}

fn first_non_unit(v: &[Vec<i64>], active: &[usize]) -> Option<Vec<i64>> {
    v.iter().find(|x| active.iter().any(|&c| x[c].abs() > 1)).cloned()
}

/// Graver basis of `A` with the default guards.
pub fn graver_oracle(a: &IntMatrix) -> Result<GraverBasis> {
    graver_oracle_with(a, &OracleConfig::default())
}

pub fn graver_oracle_with(a: &IntMatrix, cfg: &OracleConfig) -> Result<GraverBasis> {
    match complete(a, cfg, Mode::Full)? {
        Outcome::Basis(v) => Ok(GraverBasis::from_vectors(
            a.ncols(),
            v.iter().map(|x| SignedVector::from_dense(x)),
        )),
        Outcome::NonUnit(_) => Err(Error::Internal("full completion stopped early".into())),
    }
}

/// Runs the completion but stops after the first lifting stage whose basis
/// has an entry of absolute value at least two. Such a vector on a projection
/// already rules out a `{0, ±1}` Graver basis, because a coordinate
/// projection of a lattice with a `{0, ±1}` Graver basis has one too.
/// Returns `None` when the full basis is `{0, ±1}`, otherwise the offending
/// vector (a Graver element of the projection, lifted to the kernel).
pub fn find_non_unit_graver_vector(a: &IntMatrix, cfg: &OracleConfig) -> Result<Option<Vec<i64>>> {
    match complete(a, cfg, Mode::StopOnNonUnit)? {
        Outcome::Basis(v) => Ok(v.into_iter().find(|x| x.iter().any(|c| c.abs() > 1))),
        Outcome::NonUnit(x) => Ok(Some(x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Every kernel vector in the box `[-b, b]^n` that is conformally
    /// minimal among the nonzero ones.
    fn brute_force(a: &IntMatrix, b: i64) -> GraverBasis {
        let n = a.ncols();
        let side = (2 * b + 1) as usize;
        let mut kernel = Vec::new();
        for code in 0..side.pow(n as u32) {
            let mut c = code;
            let x: Vec<i64> = (0..n)
                .map(|_| {
                    let v = (c % side) as i64 - b;
                    c /= side;
                    v
                })
                .collect();
            if x.iter().any(|&v| v != 0) && a.kills(&x) {
                kernel.push(SignedVector::from_dense(&x));
            }
        }
        let minimal = kernel
            .iter()
            .filter(|u| !kernel.iter().any(|w| w != *u && w.conformally_below(u)))
            .cloned();
        GraverBasis::from_vectors(n, minimal)
    }

    #[test]
    fn path_matrix() {
        let g = graver_oracle(&m(&[&[1, 1, 0], &[0, 1, 1]])).unwrap();
        assert_eq!(g.to_vec(), vec![SignedVector::from_dense(&[1, -1, 1])]);
    }

    #[test]
    fn invertible_matrix_has_empty_basis() {
        assert!(graver_oracle(&m(&[&[2, 1], &[1, 1]])).unwrap().is_empty());
    }

    #[test]
    fn twisted_cubic_matches_brute_force() {
        let a = m(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let g = graver_oracle(&a).unwrap();
        assert_eq!(g, brute_force(&a, 3));
        assert_eq!(g.len(), 5);
        assert!(!g.is_unit());
    }

    #[test]
    fn non_integral_echelon_form_uses_plain_completion() {
        let a = m(&[&[2, 1, 1]]);
        assert!(!kernel_lattice(&a).unwrap().unit_on_free);
        assert_eq!(graver_oracle(&a).unwrap(), brute_force(&a, 2));
    }

    #[test]
    fn small_random_matrices_match_brute_force() {
        let cases: [&[&[i64]]; 4] = [
            &[&[1, 2, 0, 1], &[0, 1, 1, 1]],
            &[&[1, 1, 1, 0], &[0, 1, 2, 1]],
            &[&[3, 1, 2, 1]],
            &[&[1, 0, 1, 1, 0], &[0, 1, 1, 0, 1]],
        ];
        for rows in cases {
            let a = m(rows);
            assert_eq!(graver_oracle(&a).unwrap(), brute_force(&a, 3), "{rows:?}");
        }
    }

    #[test]
    fn stops_on_first_non_unit_vector() {
        let a = m(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let bad = find_non_unit_graver_vector(&a, &OracleConfig::default()).unwrap().unwrap();
        assert!(a.kills(&bad));
        assert!(bad.iter().any(|x| x.abs() > 1));
        let b = m(&[&[1, 1, 0], &[0, 1, 1]]);
        assert!(find_non_unit_graver_vector(&b, &OracleConfig::default()).unwrap().is_none());
    }

    #[test]
    fn column_guard() {
        let a = IntMatrix::zeros(1, 200);
        assert!(matches!(graver_oracle(&a), Err(Error::GuardExceeded { .. })));
    }
}
