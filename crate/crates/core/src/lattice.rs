//! Exact integer linear algebra: rank, determinants, integer kernels.
//!
//! Everything is carried out over `BigInt`; no floating point is involved.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

fn to_big(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..a.nrows())
        .map(|r| a.row(r).iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}

fn normalize_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| gcd(&g, x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Gauss-Jordan elimination with integer rows. Returns the reduced rows and
/// the pivot column of each.
fn reduced_echelon(a: &IntMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m = to_big(a);
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let piv = m[r][c].clone();
            for k in 0..cols {
                let v = &m[i][k] * &piv - &f * &m[r][k];
                m[i][k] = v;
            }
            normalize_row(&mut m[i]);
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(a: &IntMatrix) -> usize {
    reduced_echelon(a).1.len()
}

/// Indices of `rank(A)` linearly independent rows, chosen greedily.
pub fn independent_rows(a: &IntMatrix) -> Vec<usize> {
    reduced_echelon(&transpose(a)).1
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let mut t = IntMatrix::zeros(a.ncols(), a.nrows());
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            t[(c, r)] = a[(r, c)];
        }
    }
    t
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = to_big(a);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// A lattice basis of the integer kernel together with a set of coordinates
/// on which the projection of the kernel is injective.
#[derive(Clone, Debug)]
pub struct KernelLattice {
    pub basis: Vec<Vec<i64>>,
    /// Free columns of the reduced echelon form; `|free| = basis.len()`.
    pub free: Vec<usize>,
    /// True when the basis restricted to `free` is the identity.
    pub unit_on_free: bool,
}

fn big_vec_to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()
}

/// Lattice basis of `{x integer : A x = 0}`.
pub fn kernel_lattice(a: &IntMatrix) -> Result<KernelLattice> {
    let n = a.ncols();
    let (rref, pivots) = reduced_echelon(a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();

    // Rational kernel basis with identity on the free columns; it is a
    // lattice basis whenever it is integral.
    let mut integral = true;
    let mut basis = Vec::with_capacity(free.len());
    'outer: for &j in &free {
        let mut x = vec![BigInt::zero(); n];
        x[j] = BigInt::one();
        for (row, &pc) in rref.iter().zip(&pivots) {
            let num = -&row[j];
            let den = &row[pc];
            if !(&num % den).is_zero() {
                integral = false;
                break 'outer;
            }
            x[pc] = num / den;
        }
        basis.push(big_vec_to_i64(&x)?);
    }
    if integral {
        return Ok(KernelLattice {
            basis,
            free,
            unit_on_free: true,
        });
    }
    Ok(KernelLattice {
        basis: hermite_kernel(a)?,
        free,
        unit_on_free: false,
    })
}

/// Kernel basis via column-style Hermite reduction of `[A; I]`.
fn hermite_kernel(a: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let (rows, n) = (a.nrows(), a.ncols());
    // columns of the stacked matrix [A; I], stored column-major
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|c| {
            let mut v: Vec<BigInt> = a.column(c).into_iter().map(BigInt::from).collect();
            v.extend((0..n).map(|k| if k == c { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let mut piv = 0;
    for r in 0..rows {
        if piv == n {
            break;
        }
        loop {
            // smallest nonzero |entry| in row r among columns piv..
            let best = (piv..n)
                .filter(|&c| !cols[c][r].is_zero())
                .min_by(|&x, &y| cols[x][r].abs().cmp(&cols[y][r].abs()));
            let Some(b) = best else { break };
            cols.swap(piv, b);
            let mut done = true;
            for c in piv + 1..n {
                if cols[c][r].is_zero() {
                    continue;
                }
                let q = &cols[c][r] / &cols[piv][r];
                let (head, tail) = cols.split_at_mut(c);
                for (x, y) in tail[0].iter_mut().zip(&head[piv]) {
                    *x -= &q * y;
                }
                if !cols[c][r].is_zero() {
                    done = false;
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    cols[piv..]
        .iter()
        .map(|c| big_vec_to_i64(&c[rows..]))
        .collect()
}

pub fn integer_kernel_basis(a: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    Ok(kernel_lattice(a)?.basis)
}

/// Whether `A` and `B` (with aligned columns) have the same integer kernel.
pub fn kernels_equal(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.ncols() != b.ncols() {
        return Err(Error::ColumnMismatch(a.ncols(), b.ncols()));
    }
    let ka = integer_kernel_basis(a)?;
    let kb = integer_kernel_basis(b)?;
    Ok(ka.len() == kb.len() && ka.iter().all(|x| b.kills(x)) && kb.iter().all(|x| a.kills(x)))
}
