//! Graver bases of the nuclei: signed cycles of a complete bipartite graph
//! oriented left to right, and signed bonds of the binary bipartite graph
//! whose edges are reversed according to label parity.
//!
//! Edges are indexed `l + p * r` for left vertex `l < p` and right vertex
//! `r < q`. For a nucleus on ordered vertices `left ++ right` this is the
//! mixed-radix state index with the first vertex varying fastest.

use crate::error::{Error, Result};
use crate::pair::HMPair;
use crate::vector::{GraverBasis, SignedVector};

/// Signed simple cycles of `K_{p,q}` with every edge directed left to right.
pub fn bipartite_cycles(p: usize, q: usize) -> GraverBasis {
    let mut out = GraverBasis::new(p * q);
    let mut path_l = Vec::new();
    let mut path_r = Vec::new();
    let mut used_l = vec![false; p];
    let mut used_r = vec![false; q];
    // The cycle l0 r0 l1 r1 ... l_{k-1} r_{k-1} l0 with l0 the smallest left
    // vertex and r0 < r_{k-1} is emitted exactly once.
    for l0 in 0..p {
        used_l[l0] = true;
        path_l.push(l0);
        extend_cycle(p, q, l0, &mut path_l, &mut path_r, &mut used_l, &mut used_r, &mut out);
        path_l.pop();
        used_l[l0] = false;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_cycle(
    p: usize,
    q: usize,
    l0: usize,
    path_l: &mut Vec<usize>,
    path_r: &mut Vec<usize>,
    used_l: &mut [bool],
    used_r: &mut [bool],
    out: &mut GraverBasis,
) {
    for r in 0..q {
        if used_r[r] {
            continue;
        }
        used_r[r] = true;
        path_r.push(r);
        if path_r.len() >= 2 && path_r[0] < r {
            let k = path_l.len();
            let mut e = Vec::with_capacity(2 * k);
            for i in 0..k {
                e.push((path_l[i] + p * path_r[i], 1));
                e.push((path_l[(i + 1) % k] + p * path_r[i], -1));
            }
            out.insert(SignedVector::from_entries(e));
        }
        for l in l0 + 1..p {
            if !used_l[l] {
                used_l[l] = true;
                path_l.push(l);
                extend_cycle(p, q, l0, path_l, path_r, used_l, used_r, out);
                path_l.pop();
                used_l[l] = false;
            }
        }
        path_r.pop();
        used_r[r] = false;
    }
}

/// Graver basis of `Δm ⊔ Δn` with the given weights on the two simplices,
/// in the design-matrix column order of the pair on `left ++ right`.
pub fn graver_disjoint_nucleus(left: &[u64], right: &[u64]) -> Result<GraverBasis> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::InvalidArgument("both simplices need a vertex".into()));
    }
    let p: u64 = left.iter().product();
    let q: u64 = right.iter().product();
    let b = bipartite_cycles(p as usize, q as usize);
    let pair = nucleus_pair(left, right, false)?;
    Ok(to_pair_order(&b, &pair))
}

/// Signed bonds of the binary bipartite graph with `2^(m+1)` left and
/// `2^(n+1)` right vertices, an edge directed right to left iff its label
/// has an odd number of 2s.
pub fn parity_bonds(m: usize, n: usize) -> Result<GraverBasis> {
    let p = 1usize << (m + 1);
    let q = 1usize << (n + 1);
    if p + q > 24 {
        return Err(Error::GuardExceeded {
            what: "bond enumeration vertices",
            limit: 24,
            actual: p + q,
        });
    }
    let total = p + q;
    let left_all = (1u64 << p) - 1;
    let right_all = ((1u64 << q) - 1) << p;
    let connected = |s: u64| s.count_ones() == 1 || (s & left_all != 0 && s & right_all != 0);
    let mut out = GraverBasis::new(p * q);
    let full = (1u64 << total) - 1;
    // the complement gives the negated vector, so fix vertex 0 outside S
    for s in (2..=full).step_by(2) {
        let t = full & !s;
        if !connected(s) || !connected(t) {
            continue;
        }
        let mut e = Vec::new();
        for l in 0..p {
            for r in 0..q {
                let ls = s >> l & 1 == 1;
                let rs = s >> (p + r) & 1 == 1;
                if ls == rs {
                    continue;
                }
                let forward = (l.count_ones() + r.count_ones()) % 2 == 0;
                // forward edges go l -> r
                let from_s = if forward { ls } else { rs };
                e.push((l + p * r, if from_s { 1 } else { -1 }));
            }
        }
        out.insert(SignedVector::from_entries(e));
    }
    Ok(out)
}

/// Graver basis of the dual of `Δm ⊔ Δn` with two states everywhere, in the
/// design-matrix column order of the pair on `left ++ right`.
pub fn graver_dual_nucleus(m: usize, n: usize) -> Result<GraverBasis> {
    let b = parity_bonds(m, n)?;
    let pair = nucleus_pair(&vec![2; m + 1], &vec![2; n + 1], true)?;
    Ok(to_pair_order(&b, &pair))
}

fn nucleus_pair(left: &[u64], right: &[u64], dual: bool) -> Result<HMPair> {
    let labels: Vec<String> = (1..=left.len() + right.len()).map(|i| i.to_string()).collect();
    let (l, r) = labels.split_at(left.len());
    let facets: Vec<Vec<String>> = if dual {
        l.iter()
            .flat_map(|a| r.iter().map(move |b| (a, b)))
            .map(|(a, b)| labels.iter().filter(|v| *v != a && *v != b).cloned().collect())
            .collect()
    } else {
        vec![l.to_vec(), r.to_vec()]
    };
    let c = crate::complex::SimplicialComplex::new(&labels, &facets)?;
    HMPair::new(c, left.iter().chain(right).copied().collect())
}

/// Moves a basis from first-vertex-fastest order on the pair's ground set to
/// the pair's design-matrix order.
pub(crate) fn to_pair_order(b: &GraverBasis, pair: &HMPair) -> GraverBasis {
    let w = pair.weights();
    b.remap(b.n_cols(), |mut x| {
        let mut state = Vec::with_capacity(w.len());
        for &wi in w {
            state.push(x as u64 % wi + 1);
            x /= wi as usize;
        }
        pair.column_index(&state)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graver::graver_oracle;
    use crate::matrix::DesignMatrix;

    fn count_cycles(p: usize, q: usize) -> usize {
        // simple cycles of K_{p,q}: sum over k of C(p,k) C(q,k) k! (k-1)! / 2
        let fact = |n: usize| (1..=n).product::<usize>();
        let choose = |n: usize, k: usize| fact(n) / (fact(k) * fact(n - k));
        (2..=p.min(q)).map(|k| choose(p, k) * choose(q, k) * fact(k) * fact(k - 1) / 2).sum()
    }

    #[test]
    fn cycle_counts() {
        for (p, q) in [(2, 2), (2, 3), (3, 3), (4, 2), (4, 3), (4, 4)] {
            assert_eq!(bipartite_cycles(p, q).len(), count_cycles(p, q), "{p} {q}");
        }
    }

    #[test]
    fn disjoint_nucleus_matches_oracle() {
        for (l, r) in [(vec![2], vec![2]), (vec![2, 2], vec![2]), (vec![3], vec![2, 2]), (vec![3], vec![3])] {
            let g = graver_disjoint_nucleus(&l, &r).unwrap();
            let pair = nucleus_pair(&l, &r, false).unwrap();
            let oracle = graver_oracle(&DesignMatrix::build(&pair).matrix).unwrap();
            assert_eq!(g, oracle, "{l:?} {r:?}");
        }
    }

    #[test]
    fn dual_nucleus_matches_oracle() {
        for (m, n) in [(0, 0), (1, 0), (1, 1), (2, 0)] {
            let g = graver_dual_nucleus(m, n).unwrap();
            let pair = nucleus_pair(&vec![2; m + 1], &vec![2; n + 1], true).unwrap();
            let a = DesignMatrix::build(&pair).matrix;
            for v in g.iter() {
                assert!(a.kills(&v.to_dense(a.ncols())));
            }
            assert_eq!(g, graver_oracle(&a).unwrap(), "{m} {n}");
        }
        assert_eq!(graver_dual_nucleus(0, 0).unwrap().len(), 6);
    }
}
