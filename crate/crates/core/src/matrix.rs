//! Integer matrices and the design matrix of an HM pair.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::bits;
use crate::error::{Error, Result};
use crate::pair::HMPair;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Column submatrix in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                m[(r, k)] = self[(r, c)];
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            m.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(r));
        }
        m
    }

    /// Column `j` of the result is column `i` of `self` where `map[i] = j`.
    pub fn permute_columns(&self, map: &[usize]) -> Result<IntMatrix> {
        if map.len() != self.cols {
            return Err(Error::ColumnMismatch(map.len(), self.cols));
        }
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (i, &j) in map.iter().enumerate() {
                m[(r, j)] = self[(r, i)];
            }
        }
        Ok(m)
    }

    /// `A x` in i128 arithmetic.
    pub fn mul_vec(&self, x: &[i64]) -> Vec<i128> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum()
            })
            .collect()
    }

    pub fn kills(&self, x: &[i64]) -> bool {
        x.len() == self.cols && self.mul_vec(x).iter().all(|&v| v == 0)
    }

    /// Row-major CSV: decimal entries separated by commas, rows separated by
    /// newlines, no trailing separator.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            if r > 0 {
                s.push('\n');
            }
            for (k, v) in self.row(r).iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                write!(s, "{v}").unwrap();
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|e| Error::InvalidArgument(format!("bad entry `{t}`: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_rows(&rows)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i64 {
        &mut self.data[r * self.cols + c]
    }
}

/// `[A A ... A]` with `q` copies.
pub fn ghost_repeat(a: &IntMatrix, q: usize) -> Result<IntMatrix> {
    if q < 1 {
        return Err(Error::InvalidArgument("ghost repeat needs q >= 1".into()));
    }
    let mut m = IntMatrix::zeros(a.rows, a.cols * q);
    for r in 0..a.rows {
        for b in 0..q {
            for c in 0..a.cols {
                m[(r, b * a.cols + c)] = a[(r, c)];
            }
        }
    }
    Ok(m)
}

/// Block matrix with `p - 1` diagonal copies of `A` above a row of `p`
/// identity blocks.
pub fn lambda_lift(a: &IntMatrix, p: usize) -> Result<IntMatrix> {
    if p < 2 {
        return Err(Error::InvalidArgument("Lawrence lift needs p >= 2".into()));
    }
    let (d, n) = (a.rows, a.cols);
    let mut m = IntMatrix::zeros((p - 1) * d + n, p * n);
    for b in 0..p - 1 {
        for r in 0..d {
            for c in 0..n {
                m[(b * d + r, b * n + c)] = a[(r, c)];
            }
        }
    }
    for b in 0..p {
        for c in 0..n {
            m[((p - 1) * d + c, b * n + c)] = 1;
        }
    }
    Ok(m)
}

/// Row label of a design matrix: a face and a reduced index tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowLabel {
    pub face: Vec<String>,
    pub index: Vec<u64>,
}

/// The 0/1 design matrix of an HM pair with labeled rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignMatrix {
    pub vertices: Vec<String>,
    pub rows: Vec<RowLabel>,
    pub cols: Vec<Vec<u64>>,
    pub matrix: IntMatrix,
}

/// Iterate all tuples of a mixed-radix box, lexicographically, 1-based.
fn tuples(radices: &[u64]) -> Vec<Vec<u64>> {
    let total: u64 = radices.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![1u64; radices.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for k in (0..radices.len()).rev() {
            if cur[k] < radices[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 1;
        }
    }
    out
}

impl DesignMatrix {
    /// Rows ordered by face (cardinality, then lexicographic) and then by
    /// index tuple; columns are joint states in lexicographic order.
    pub fn build(pair: &HMPair) -> Self {
        let w = pair.weights();
        let cols = pair.column_labels();
        let mut rows = Vec::new();
        let mut data: Vec<Vec<i64>> = Vec::new();
        for face in pair.complex().face_masks() {
            let verts: Vec<usize> = bits(face).collect();
            let radices: Vec<u64> = verts.iter().map(|&v| w[v] - 1).collect();
            for j in tuples(&radices) {
                let entries = cols
                    .iter()
                    .map(|st| verts.iter().zip(&j).all(|(&v, &jj)| st[v] == jj) as i64)
                    .collect();
                data.push(entries);
                rows.push(RowLabel {
                    face: pair.complex().mask_labels(face),
                    index: j,
                });
            }
        }
        let matrix = IntMatrix::from_rows(&data).expect("rectangular by construction");
        DesignMatrix {
            vertices: pair.ground().to_vec(),
            rows,
            cols,
            matrix,
        }
    }

    pub fn to_csv(&self) -> String {
        self.matrix.to_csv()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("design matrices serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: DesignMatrix =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        if m.rows.len() != m.matrix.nrows() || m.cols.len() != m.matrix.ncols() {
            return Err(Error::InvalidArgument("labels do not match matrix shape".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIGURE_ONE: &str = "\
1,1,1,1,1,1,1,1,1,1,1,1
1,1,1,1,0,0,0,0,0,0,0,0
0,0,0,0,1,1,1,1,0,0,0,0
1,1,0,0,1,1,0,0,1,1,0,0
1,0,1,0,1,0,1,0,1,0,1,0
1,1,0,0,0,0,0,0,0,0,0,0
0,0,0,0,1,1,0,0,0,0,0,0
1,0,0,0,1,0,0,0,1,0,0,0";

    #[test]
    fn path_with_weights_322() {
        let p = HMPair::parse("1 2 3", "12 23", &[3, 2, 2]).unwrap();
        let d = DesignMatrix::build(&p);
        assert_eq!(d.matrix.nrows(), 8);
        assert_eq!(d.matrix.ncols(), 12);
        assert_eq!(d.to_csv(), FIGURE_ONE);
        assert_eq!(d.rows[6].face, vec!["1", "2"]);
        assert_eq!(d.rows[6].index, vec![2, 1]);
    }

    #[test]
    fn edge_plus_point_binary() {
        let p = HMPair::parse("1 2 3", "12 3", &[2, 2, 2]).unwrap();
        let d = DesignMatrix::build(&p);
        let want = "\
1,1,1,1,1,1,1,1
1,1,1,1,0,0,0,0
1,1,0,0,1,1,0,0
1,0,1,0,1,0,1,0
1,1,0,0,0,0,0,0";
        assert_eq!(d.to_csv(), want);
    }

    #[test]
    fn ghost_only_is_a_row_of_ones() {
        let p = HMPair::parse("1", "-", &[5]).unwrap();
        let d = DesignMatrix::build(&p);
        assert_eq!(d.to_csv(), "1,1,1,1,1");
    }

    #[test]
    fn ghost_repeat_and_lambda_shapes() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let g = ghost_repeat(&a, 2).unwrap();
        assert_eq!(g.to_csv(), "1,1,0,1,1,0\n0,1,1,0,1,1");
        assert_eq!(ghost_repeat(&a, 1).unwrap(), a);
        let l = lambda_lift(&a, 2).unwrap();
        assert_eq!(
            l.to_csv(),
            "1,1,0,0,0,0\n0,1,1,0,0,0\n1,0,0,1,0,0\n0,1,0,0,1,0\n0,0,1,0,0,1"
        );
        let l3 = lambda_lift(&a, 3).unwrap();
        assert_eq!((l3.nrows(), l3.ncols()), (7, 9));
        assert_eq!(l3.row(2), &[0, 0, 0, 1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn ghost_repeat_matches_ghost_vertex() {
        let p = HMPair::parse("1", "1", &[2]).unwrap();
        let a = DesignMatrix::build(&p).matrix;
        // the new vertex is listed first so that it varies slowest
        let g = HMPair::parse("g 1", "1", &[2, 2]).unwrap();
        assert_eq!(ghost_repeat(&a, 2).unwrap(), DesignMatrix::build(&g).matrix);
    }

    #[test]
    fn csv_round_trip() {
        let a = IntMatrix::from_rows(&[vec![1, -2, 0], vec![0, 13, 1]]).unwrap();
        assert_eq!(IntMatrix::from_csv(&a.to_csv()).unwrap(), a);
    }

    #[test]
    fn json_round_trip() {
        let p = HMPair::parse("1 2 3", "12 23", &[3, 2, 2]).unwrap();
        let d = DesignMatrix::build(&p);
        assert_eq!(DesignMatrix::from_json(&d.to_json()).unwrap(), d);
    }
}
