use hmuni_core::lattice::{integer_kernel_basis, kernels_equal, rank};
use hmuni_core::matrix::{ghost_repeat, lambda_lift};
use hmuni_core::sweep::sweep_pairs;
use hmuni_core::{DesignMatrix, HMPair, SimplicialComplex, VertexKind};

fn pairs() -> Vec<HMPair> {
    let mut v = sweep_pairs(4, &[2, 3, 4], 256);
    v.extend(sweep_pairs(5, &[2, 3], 243).into_iter().filter(|p| p.len() == 5));
    v
}

#[test]
fn row_and_column_counts() {
    for p in pairs() {
        let d = DesignMatrix::build(&p);
        let rows: u64 = p
            .complex()
            .faces()
            .iter()
            .map(|f| f.iter().map(|v| p.weight(v).unwrap() - 1).product::<u64>())
            .sum();
        assert_eq!(d.matrix.nrows() as u64, rows, "{p}");
        assert_eq!(d.matrix.ncols() as u128, p.n_columns(), "{p}");
        assert_eq!(d.rows.len(), d.matrix.nrows());
        assert_eq!(d.cols.len(), d.matrix.ncols());
    }
}

#[test]
fn full_row_rank() {
    for p in sweep_pairs(4, &[2, 3, 4], 144) {
        let a = DesignMatrix::build(&p).matrix;
        assert_eq!(rank(&a), a.nrows(), "{p}");
    }
}

#[test]
fn one_entry_per_matching_face_block() {
    for p in pairs() {
        let d = DesignMatrix::build(&p);
        let ground = p.ground();
        let w = p.weights();
        assert!(d.matrix.row(0).iter().all(|&x| x == 1), "{p}");
        for face in p.complex().faces() {
            let idx: Vec<usize> = face.iter().map(|v| ground.iter().position(|u| u == v).unwrap()).collect();
            let block: Vec<usize> = (0..d.rows.len()).filter(|&r| d.rows[r].face == face).collect();
            for (c, state) in d.cols.iter().enumerate() {
                let matches = idx.iter().all(|&i| state[i] < w[i]);
                let ones = block.iter().filter(|&&r| d.matrix[(r, c)] == 1).count();
                assert_eq!(ones, matches as usize, "{p} face {face:?} column {state:?}");
            }
        }
    }
}

fn with_new_first(c: &SimplicialComplex, kind: VertexKind) -> SimplicialComplex {
    let e = c.extend(kind, "new").unwrap();
    let order: Vec<String> = std::iter::once("new".to_string()).chain(c.ground().iter().cloned()).collect();
    e.reordered(&order).unwrap()
}

#[test]
fn ghost_repeat_is_the_ghost_vertex_matrix() {
    for p in sweep_pairs(3, &[2, 3], 27) {
        let a = DesignMatrix::build(&p).matrix;
        for q in [2u64, 3] {
            let g = with_new_first(p.complex(), VertexKind::Ghost);
            let w: Vec<u64> = std::iter::once(q).chain(p.weights().iter().copied()).collect();
            let gp = HMPair::new(g, w).unwrap();
            assert_eq!(ghost_repeat(&a, q as usize).unwrap(), DesignMatrix::build(&gp).matrix, "{p} q={q}");
        }
    }
}

#[test]
fn lawrence_lift_has_the_lawrence_vertex_kernel() {
    for p in sweep_pairs(3, &[2, 3], 27) {
        let a = DesignMatrix::build(&p).matrix;
        for q in [2u64, 3] {
            let l = with_new_first(p.complex(), VertexKind::Lawrence);
            let w: Vec<u64> = std::iter::once(q).chain(p.weights().iter().copied()).collect();
            let lp = HMPair::new(l, w).unwrap();
            let lifted = lambda_lift(&a, q as usize).unwrap();
            assert!(kernels_equal(&lifted, &DesignMatrix::build(&lp).matrix).unwrap(), "{p} q={q}");
        }
    }
}

#[test]
fn kernel_bases() {
    for p in sweep_pairs(4, &[2, 3], 81) {
        let a = DesignMatrix::build(&p).matrix;
        let k = integer_kernel_basis(&a).unwrap();
        assert_eq!(k.len(), a.ncols() - rank(&a), "{p}");
        for x in &k {
            assert!(a.kills(x), "{p}");
        }
    }
}
