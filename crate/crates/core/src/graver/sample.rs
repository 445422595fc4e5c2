//! Random Graver elements of a unimodular pair without enumerating the
//! basis: a random cycle or bond of the nucleus graph pushed through
//! randomly parameterized lifts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::VertexKind;
use crate::error::{Error, Result};
use crate::graver::pipeline::{lambda3_chain, nucleus_layout, ordered_steps, sides, three_state_step, Layout};
use crate::lattice::rank;
use crate::matrix::IntMatrix;
use crate::nuclear::{weighted_decompose, Nucleus};
use crate::pair::HMPair;
use crate::vector::SignedVector;

/// Loop-erased random walk on `K_{p,q}` until a cycle of length at least
/// four closes. Vertices `0..p` are left, `p..p+q` right.
fn random_cycle(p: usize, q: usize, rng: &mut impl Rng) -> SignedVector {
    let mut path = vec![rng.gen_range(0..p)];
    loop {
        let last = *path.last().unwrap();
        let next = if last < p { p + rng.gen_range(0..q) } else { rng.gen_range(0..p) };
        match path.iter().position(|&x| x == next) {
            Some(k) if path.len() - k >= 4 => {
                let cycle = &path[k..];
                let e = (0..cycle.len())
                    .map(|i| {
                        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                        if a < p {
                            (a + p * (b - p), 1)
                        } else {
                            (b + p * (a - p), -1)
                        }
                    })
                    .collect();
                return SignedVector::from_entries(e);
            }
            Some(k) => path.truncate(k + 1),
            None => path.push(next),
        }
    }
}

/// Uniform vertex bipartition of the binary parity graph, redrawn until
/// both sides induce connected subgraphs.
fn random_bond(m: usize, n: usize, rng: &mut impl Rng) -> SignedVector {
    let p = 1usize << (m + 1);
    let q = 1usize << (n + 1);
    let connected = |side: &[bool]| {
        let l = side[..p].iter().filter(|&&x| x).count();
        let r = side[p..].iter().filter(|&&x| x).count();
        l + r == 1 || (l > 0 && r > 0)
    };
    loop {
        let s: Vec<bool> = (0..p + q).map(|_| rng.gen()).collect();
        let t: Vec<bool> = s.iter().map(|x| !x).collect();
        if !connected(&s) || !connected(&t) {
            continue;
        }
        let mut e = Vec::new();
        for l in 0..p {
            for r in 0..q {
                if s[l] == s[p + r] {
                    continue;
                }
                let forward = (l.count_ones() + r.count_ones()) % 2 == 0;
                let from_s = if forward { s[l] } else { s[p + r] };
                e.push((l + p * r, if from_s { 1 } else { -1 }));
            }
        }
        return SignedVector::from_entries(e);
    }
}

/// One Graver element of the design matrix of a unimodular pair,
/// determined by `seed`. The distribution is not uniform.
pub fn sample_graver(pair: &HMPair, seed: u64) -> Result<SignedVector> {
    let cert = weighted_decompose(pair).ok_or(Error::NotUnimodular)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = ordered_steps(&cert);
    let (mut layout, mut cur, rest): (Layout, Option<SignedVector>, _) = match three_state_step(&steps, pair)? {
        Some(t) => {
            let l = lambda3_chain(&cert, pair, &steps[..t], steps[t])?;
            let all = l.basis.to_vec();
            let pick = (!all.is_empty()).then(|| all[rng.gen_range(0..all.len())].clone());
            (l.layout, pick, &steps[t + 1..])
        }
        None => {
            let layout = nucleus_layout(&cert, pair)?;
            let (p, q) = sides(&cert, &layout);
            let v = match cert.nucleus {
                Nucleus::Simplex { .. } => None,
                Nucleus::DisjointSimplices { .. } => Some(random_cycle(p, q, &mut rng)),
                Nucleus::DualDisjoint { m, n } => Some(random_bond(m, n, &mut rng)),
            };
            (layout, v, &steps[..])
        }
    };
    for s in rest {
        let n = layout.n_cols();
        let q = pair.weight(&s.vertex)? as usize;
        cur = match s.op {
            VertexKind::Cone => {
                let slot = rng.gen_range(0..q);
                cur.map(|u| u.remap(|i| slot * n + i))
            }
            VertexKind::Ghost => match cur {
                Some(u) if rng.gen_bool(0.5) => {
                    let e = u.entries().iter().map(|&(i, x)| (rng.gen_range(0..q) * n + i, x)).collect();
                    Some(SignedVector::from_entries(e))
                }
                _ => {
                    let i = rng.gen_range(0..n);
                    let j = rng.gen_range(0..q);
                    let k = (j + rng.gen_range(1..q)) % q;
                    Some(SignedVector::from_entries(vec![(j * n + i, 1), (k * n + i, -1)]))
                }
            },
            VertexKind::Lawrence if q == 2 => cur.map(|u| {
                let mut e = u.entries().to_vec();
                e.extend(u.entries().iter().map(|&(i, x)| (n + i, -x)));
                SignedVector::from_entries(e)
            }),
            _ => return Err(Error::Internal(format!("unexpected step {} with {q} states", s.vertex))),
        };
        layout = layout.pushed(&s.vertex, q as u64);
    }
    let v = cur.ok_or(Error::EmptyGraverBasis)?;
    let map = layout.map_to_pair(pair)?;
    Ok(v.remap(|i| map[i]).canonical())
}

/// Kernel vector with entries in `{0, ±1}` whose support is a circuit of
/// the columns of `a`.
pub fn is_graver_circuit(a: &IntMatrix, v: &SignedVector) -> bool {
    if v.is_zero() || !v.is_unit() || v.support().any(|i| i >= a.ncols()) {
        return false;
    }
    if !a.kills(&v.to_dense(a.ncols())) {
        return false;
    }
    let cols: Vec<usize> = v.support().collect();
    rank(&a.select_columns(&cols)) + 1 == cols.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graver::graver_for_unimodular_pair;
    use crate::matrix::DesignMatrix;

    #[test]
    fn samples_lie_in_the_basis() {
        for (g, f, w) in [
            ("1 2 3", "12 3", vec![2, 2, 2]),
            ("1 2 3", "12 13 23", vec![3, 2, 2]),
            ("1 2 3 4", "12 23 34 14", vec![2, 2, 2, 2]),
            ("1 2 3", "1 2", vec![2, 2, 3]),
            ("1 2 3 4", "123 14 24", vec![2, 2, 2, 3]),
        ] {
            let pair = HMPair::parse(g, f, &w).unwrap();
            let basis = graver_for_unimodular_pair(&pair).unwrap();
            let a = DesignMatrix::build(&pair).matrix;
            for seed in 0..200 {
                let v = sample_graver(&pair, seed).unwrap();
                assert!(basis.contains(&v), "{pair} seed {seed}: {v}");
                assert!(is_graver_circuit(&a, &v));
            }
        }
    }

    #[test]
    fn deterministic_and_empty_cases() {
        let pair = HMPair::parse("1 2 3", "12 3", &[2, 2, 2]).unwrap();
        assert_eq!(sample_graver(&pair, 7).unwrap(), sample_graver(&pair, 7).unwrap());
        let simplex = HMPair::parse("1 2 3", "123", &[2, 2, 2]).unwrap();
        assert!(matches!(sample_graver(&simplex, 0), Err(Error::EmptyGraverBasis)));
    }

    #[test]
    fn validator_rejects_non_circuits() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1, 1]]).unwrap();
        assert!(is_graver_circuit(&a, &SignedVector::from_dense(&[1, -1, 0, 0])));
        assert!(!is_graver_circuit(&a, &SignedVector::from_dense(&[1, -1, 1, -1])));
        assert!(!is_graver_circuit(&a, &SignedVector::from_dense(&[1, 1, 0, 0])));
    }
}
