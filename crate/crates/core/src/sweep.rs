//! Exhaustive sweeps over small pairs comparing the classification with
//! the Graver oracle.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{Mask, RawComplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graver::oracle::{find_non_unit_graver_vector, OracleConfig};
use crate::matrix::DesignMatrix;
use crate::pair::HMPair;
use crate::unimodular::{classify, is_unimodular_by_minors, MINOR_TEST_MAX_COLUMNS};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

fn permute_mask(m: Mask, perm: &[usize]) -> Mask {
    perm.iter()
        .enumerate()
        .filter(|&(i, _)| m >> i & 1 == 1)
        .fold(0, |acc, (_, &j)| acc | 1 << j)
}

/// Smallest relabelling of facets and weights over all vertex permutations.
fn canonical_key(facets: &[Mask], weights: &[u64], perms: &[Vec<usize>]) -> (Vec<Mask>, Vec<u64>) {
    perms
        .iter()
        .map(|perm| {
            let mut f: Vec<Mask> = facets.iter().map(|&m| permute_mask(m, perm)).collect();
            f.sort_unstable();
            let mut w = weights.to_vec();
            for (i, &j) in perm.iter().enumerate().take(weights.len()) {
                w[j] = weights[i];
            }
            (f, w)
        })
        .min()
        .unwrap()
}

/// Antichains of subsets of `0..n`, the nonempty ones plus `{∅}`.
fn antichains(n: usize) -> Vec<Vec<Mask>> {
    let subsets: Vec<Mask> = (1..1u64 << n).collect();
    let mut out = vec![vec![0]];
    let mut cur = Vec::new();
    fn rec(i: usize, subsets: &[Mask], cur: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        if i == subsets.len() {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        rec(i + 1, subsets, cur, out);
        let s = subsets[i];
        if cur.iter().all(|&f| f & s != f && f & s != s) {
            cur.push(s);
            rec(i + 1, subsets, cur, out);
            cur.pop();
        }
    }
    rec(0, &subsets, &mut cur, &mut out);
    out
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Complexes on the ground set `1..=n`, one per isomorphism class.
pub fn complexes_up_to_isomorphism(n: usize) -> Vec<SimplicialComplex> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let ground = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for a in antichains(n) {
        let key = canonical_key(&a, &[], &perms);
        if seen.insert(key) {
            out.push(SimplicialComplex::from_raw(&labels(n), &RawComplex::new(ground, a)));
        }
    }
    out
}

/// Pairs on at most `max_vertices` vertices with weights from `weights` and
/// at most `max_columns` design-matrix columns, one per isomorphism class.
pub fn sweep_pairs(max_vertices: usize, weights: &[u64], max_columns: u64) -> Vec<HMPair> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for c in complexes_up_to_isomorphism(n) {
            let facets = c.facet_masks();
            let mut w = vec![0usize; n];
            loop {
                let ws: Vec<u64> = w.iter().map(|&i| weights[i]).collect();
                if ws.iter().product::<u64>() <= max_columns && seen.insert(canonical_key(&facets, &ws, &perms)) {
                    out.push(HMPair::new(c.clone(), ws).expect("weights are at least 2"));
                }
                let Some(i) = (0..n).rev().find(|&i| w[i] + 1 < weights.len()) else {
                    break;
                };
                w[i] += 1;
                for x in &mut w[i + 1..] {
                    *x = 0;
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SweepCase {
    pub pair: HMPair,
    pub classified_unimodular: bool,
    /// `None` when the oracle hit a guard.
    pub oracle_unimodular: Option<bool>,
    /// Maximal-minor test, run only within its column guard.
    pub minor_unimodular: Option<bool>,
}

impl SweepCase {
    /// `None` when the Graver test was not decided.
    pub fn agrees(&self) -> Option<bool> {
        let minors_agree = self.minor_unimodular.is_none_or(|m| m == self.classified_unimodular);
        self.oracle_unimodular.map(|o| o == self.classified_unimodular && minors_agree)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub cases: Vec<SweepCase>,
}

impl SweepReport {
    pub fn agreed(&self) -> usize {
        self.cases.iter().filter(|c| c.agrees() == Some(true)).count()
    }

    pub fn disagreed(&self) -> Vec<&SweepCase> {
        self.cases.iter().filter(|c| c.agrees() == Some(false)).collect()
    }

    pub fn exceeded(&self) -> Vec<&SweepCase> {
        self.cases.iter().filter(|c| c.agrees().is_none()).collect()
    }

    pub fn all_agree(&self) -> bool {
        self.agreed() == self.cases.len()
    }
}

/// Largest sub-box tried before the full matrix.
pub const SUB_BOX_MAX_COLUMNS: u64 = 64;

/// Random column subsets tried after the sub-boxes.
pub const RANDOM_SUBSETS: usize = 16;

/// Graver-entry test on the design matrix of `pair`.
///
/// Keeping only the first `e_v <= d_v` states of every vertex selects a
/// column submatrix; its kernel is the kernel of the pair with weights `e`
/// (with `e_v = 1` amounting to deleting `v`). A column submatrix of a
/// unimodular matrix is unimodular, so sub-boxes of at most
/// [`SUB_BOX_MAX_COLUMNS`] columns are searched first, smallest first, each
/// with a twentieth of the work budget; a sub-box that exceeds it is skipped.
/// Then [`RANDOM_SUBSETS`] seeded random subsets of five eighths of the
/// columns are tried the same way, for pairs whose sub-boxes are all
/// unimodular (binary minimal patterns, say).
/// Only the full matrix can certify unimodularity.
pub fn is_pair_unimodular_by_graver(pair: &HMPair, cfg: &OracleConfig) -> Result<bool> {
    let a = DesignMatrix::build(pair).matrix;
    let labels = pair.column_labels();
    let d = pair.weights();
    let mut boxes: Vec<Vec<u64>> = vec![vec![1; d.len()]];
    for (i, &di) in d.iter().enumerate() {
        boxes = boxes
            .into_iter()
            .flat_map(|b| {
                (1..=di).map(move |e| {
                    let mut b = b.clone();
                    b[i] = e;
                    b
                })
            })
            .collect();
    }
    boxes.retain(|b| b.as_slice() != d && b.iter().product::<u64>() <= SUB_BOX_MAX_COLUMNS);
    boxes.sort_by_key(|b| (b.iter().product::<u64>(), b.clone()));
    let sub_cfg = OracleConfig {
        max_work: (cfg.max_work / 20).max(1),
        ..cfg.clone()
    };
    for b in boxes {
        if b.iter().filter(|&&e| e > 1).count() < 2 {
            continue;
        }
        let cols: Vec<usize> = (0..labels.len())
            .filter(|&c| labels[c].iter().zip(&b).all(|(s, e)| s <= e))
            .collect();
        match find_non_unit_graver_vector(&a.select_columns(&cols), &sub_cfg) {
            Ok(Some(_)) => return Ok(false),
            Ok(None) | Err(Error::GuardExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let n = a.ncols();
    if n > 16 {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..RANDOM_SUBSETS {
            let mut cols = sample(&mut rng, n, n * 5 / 8).into_vec();
            cols.sort_unstable();
            match find_non_unit_graver_vector(&a.select_columns(&cols), &sub_cfg) {
                Ok(Some(_)) => return Ok(false),
                Ok(None) | Err(Error::GuardExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(find_non_unit_graver_vector(&a, cfg)?.is_none())
}

/// Classification against the Graver-entry test for one pair.
pub fn check_pair(pair: &HMPair, cfg: &OracleConfig) -> Result<SweepCase> {
    let classified_unimodular = classify(pair)?.is_unimodular();
    let oracle_unimodular = match is_pair_unimodular_by_graver(pair, cfg) {
        Ok(u) => Some(u),
        Err(Error::GuardExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let minor_unimodular = if pair.n_columns() <= MINOR_TEST_MAX_COLUMNS as u128 {
        Some(is_unimodular_by_minors(&DesignMatrix::build(pair).matrix)?)
    } else {
        None
    };
    Ok(SweepCase {
        pair: pair.clone(),
        classified_unimodular,
        oracle_unimodular,
        minor_unimodular,
    })
}

pub fn classification_sweep(
    max_vertices: usize,
    weights: &[u64],
    max_columns: u64,
    cfg: &OracleConfig,
    mut progress: impl FnMut(&SweepCase),
) -> Result<SweepReport> {
    let mut report = SweepReport::default();
    for pair in sweep_pairs(max_vertices, weights, max_columns) {
        let case = check_pair(&pair, cfg)?;
        progress(&case);
        report.cases.push(case);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_counts() {
        // inequivalent monotone Boolean functions 2, 3, 5, 10, 30 minus the
        // constant false function
        let counts: Vec<usize> = (0..=4).map(|n| complexes_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 9, 29]);
    }

    #[test]
    fn small_sweep_agrees() {
        let cfg = OracleConfig::default();
        let report = classification_sweep(3, &[2, 3], 27, &cfg, |_| {}).unwrap();
        assert!(report.cases.len() > 20);
        assert!(report.all_agree(), "{:?}", report.disagreed());
    }
}
