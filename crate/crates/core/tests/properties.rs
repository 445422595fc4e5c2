use proptest::prelude::*;

use hmuni_core::graver::{
    graver_for_unimodular_pair, graver_oracle, is_graver_circuit, lift_cone, lift_ghost, lift_lambda2, sample_graver,
};
use hmuni_core::matrix::{ghost_repeat, lambda_lift};
use hmuni_core::minor::{embed_as_minor, one_step_minors};
use hmuni_core::{classify, DesignMatrix, HMPair, IntMatrix, SignedVector, SimplicialComplex, Verdict, VertexKind};

fn arb_pair(max_vertices: usize, max_weight: u64) -> impl Strategy<Value = HMPair> {
    (1..=max_vertices)
        .prop_flat_map(move |n| {
            (
                Just(n),
                prop::collection::vec(1u64..(1 << n), 1..=4),
                prop::collection::vec(2..=max_weight, n),
            )
        })
        .prop_map(|(n, masks, weights)| {
            let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let facets: Vec<Vec<String>> = masks
                .iter()
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| labels[i].clone()).collect())
                .collect();
            HMPair::new(SimplicialComplex::new(&labels, &facets).unwrap(), weights).unwrap()
        })
}

fn unimodular(p: &HMPair) -> bool {
    classify(p).unwrap().is_unimodular()
}

/// `g` is the conformal sum of two other elements of the basis.
fn conformal_sum_of_others(g: &SignedVector, all: &[SignedVector], n: usize) -> bool {
    let x = g.to_dense(n);
    let conformal = |u: &[i64]| u.iter().zip(&x).all(|(a, b)| a * b >= 0 && a.abs() <= b.abs());
    let dense: Vec<Vec<i64>> = all.iter().filter(|u| *u != g).map(|u| u.to_dense(n)).collect();
    dense.iter().any(|u| {
        conformal(u) && {
            let rest: Vec<i64> = x.iter().zip(u).map(|(a, b)| a - b).collect();
            rest.iter().any(|&r| r != 0) && conformal(&rest) && dense.contains(&rest)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn minors_of_unimodular_pairs_are_unimodular(p in arb_pair(4, 3)) {
        if unimodular(&p) {
            for m in one_step_minors(&p).unwrap() {
                prop_assert!(unimodular(&m), "{} has minor {}", p, m);
            }
        }
    }

    #[test]
    fn verdicts_revalidate(p in arb_pair(5, 3)) {
        match classify(&p).unwrap() {
            Verdict::Unimodular { certificate } => {
                prop_assert!(certificate.replays_to(p.complex()));
                prop_assert!(certificate.weights_satisfied(&p));
            }
            Verdict::NotUnimodular { witness } => prop_assert!(witness.validates(&p)),
        }
    }

    #[test]
    fn pipeline_gives_the_circuits(p in arb_pair(4, 3)) {
        prop_assume!(p.n_columns() <= 36 && unimodular(&p));
        let a = DesignMatrix::build(&p).matrix;
        let g = graver_for_unimodular_pair(&p).unwrap();
        prop_assert_eq!(&g, &graver_oracle(&a).unwrap());
        for v in g.iter() {
            prop_assert!(is_graver_circuit(&a, v));
        }
    }

    #[test]
    fn samples_are_basis_elements(p in arb_pair(4, 3), seed in any::<u64>()) {
        prop_assume!(p.n_columns() <= 54 && unimodular(&p));
        let g = graver_for_unimodular_pair(&p).unwrap();
        prop_assume!(!g.is_empty());
        let v = sample_graver(&p, seed).unwrap();
        prop_assert!(g.contains(&v));
        prop_assert_eq!(v, sample_graver(&p, seed).unwrap());
    }

    #[test]
    fn matrix_text_round_trips(p in arb_pair(4, 4)) {
        let d = DesignMatrix::build(&p);
        prop_assert_eq!(&DesignMatrix::from_json(&d.to_json()).unwrap(), &d);
        prop_assert_eq!(IntMatrix::from_csv(&d.to_csv()).unwrap(), d.matrix);
    }

    #[test]
    fn minor_embedding_is_reflexive_and_transitive(p in arb_pair(4, 3), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let e = embed_as_minor(&p, &p);
        prop_assert!(e.is_some_and(|e| e.validates(&p, &p)));
        let first = one_step_minors(&p).unwrap();
        prop_assume!(!first.is_empty());
        let m = &first[i.index(first.len())];
        let second = one_step_minors(m).unwrap();
        prop_assume!(!second.is_empty());
        let m2 = &second[j.index(second.len())];
        let e = embed_as_minor(&p, m2);
        prop_assert!(e.is_some_and(|e| e.validates(&p, m2)), "{} not below {}", m2, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_elements_are_kernel_vectors_and_not_conformal_sums(p in arb_pair(3, 3)) {
        let a = DesignMatrix::build(&p).matrix;
        let g = graver_oracle(&a).unwrap();
        prop_assume!(g.len() <= 400);
        let both: Vec<SignedVector> = g.iter().flat_map(|v| [v.clone(), v.neg()]).collect();
        for v in g.iter() {
            prop_assert!(a.kills(&v.to_dense(a.ncols())));
            prop_assert!(!conformal_sum_of_others(v, &both, a.ncols()));
        }
    }

    #[test]
    fn lift_counts(p in arb_pair(3, 3), q in 2usize..=3) {
        prop_assume!(p.n_columns() <= 12 && unimodular(&p));
        let a = DesignMatrix::build(&p).matrix;
        let b = graver_oracle(&a).unwrap();
        let n = a.ncols();

        let cone = p.complex().extend(VertexKind::Cone, "new").unwrap();
        let order: Vec<String> = std::iter::once("new".to_string()).chain(p.ground().iter().cloned()).collect();
        let w: Vec<u64> = std::iter::once(q as u64).chain(p.weights().iter().copied()).collect();
        let cone_pair = HMPair::new(cone.reordered(&order).unwrap(), w).unwrap();
        let cone_basis = graver_oracle(&DesignMatrix::build(&cone_pair).matrix).unwrap();
        prop_assert_eq!(lift_cone(&b, q).len(), q * b.len());
        prop_assert_eq!(cone_basis.len(), q * b.len());

        prop_assert_eq!(lift_lambda2(&b).len(), b.len());
        prop_assert_eq!(graver_oracle(&lambda_lift(&a, 2).unwrap()).unwrap().len(), b.len());

        let spread: usize = b.iter().map(|u| q.pow(u.support_len() as u32)).sum();
        let expected = n * q * (q - 1) / 2 + spread;
        let ghost = lift_ghost(&b, q).unwrap();
        prop_assert_eq!(ghost.len(), expected);
        prop_assert_eq!(&ghost, &graver_oracle(&ghost_repeat(&a, q).unwrap()).unwrap());
    }
}

#[test]
fn lift_counts_on_the_path_matrix() {
    let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
    let b = graver_oracle(&a).unwrap();
    for q in 2..=3 {
        assert_eq!(graver_oracle(&ghost_repeat(&a, q).unwrap()).unwrap().len(), 3 * q * (q - 1) / 2 + q.pow(3));
        assert_eq!(lift_ghost(&b, q).unwrap().len(), 3 * q * (q - 1) / 2 + q.pow(3));
        assert_eq!(lift_cone(&b, q).len(), q);
    }
    assert_eq!(lift_lambda2(&b).len(), 1);
}
