//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here is exact: integer entries are `i64`, intermediate
//! elimination runs over `Ratio<i128>`. Matrices are tiny (at most the
//! rank of an affine Dynkin diagram), so no attempt is made at blocking or
//! fraction-free tricks beyond Bareiss for determinants.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational scalar used across the crate.
pub type Q = Ratio<i128>;

/// Builds a rational from a numerator and denominator.
pub fn q(num: i128, den: i128) -> Q {
    Q::new(num, den)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n as i128)
}

/// Renders a rational as `p/q` (always with an explicit denominator).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i128 = a.trim().parse().ok()?;
            let b: i128 = b.trim().parse().ok()?;
            if b == 0 {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse::<i128>().ok().map(Q::from_integer),
    }
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the gcd, keeping signs. The zero vector is returned as is.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Primitive representative with the first nonzero entry positive.
pub fn canonical(v: &[i64]) -> Vec<i64> {
    let mut p = primitive(v);
    if let Some(first) = p.iter().find(|x| **x != 0) {
        if *first < 0 {
            p.iter_mut().for_each(|x| *x = -*x);
        }
    }
    p
}

/// Clears denominators of a rational vector and returns the primitive
/// integer vector pointing the same way.
pub fn clear_denominators(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g == 0 { *x } else { x / g };
            i64::try_from(y).expect("integer overflow while clearing denominators")
        })
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[i64], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + Q::from_integer(*x as i128) * y)
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<i64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[i64]) {
        for (r, x) in v.iter().enumerate() {
            self.set(r, c, *x);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: i128 = (0..self.cols)
                    .map(|k| self.get(r, k) as i128 * other.get(k, c) as i128)
                    .sum();
                out.set(r, c, i64::try_from(s).expect("matrix product overflow"));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows).map(|r| dot(&self.row(r), v)).collect()
    }

    pub fn mul_vec_q(&self, v: &[Q]) -> Vec<Q> {
        (0..self.rows).map(|r| dot_q(&self.row(r), v)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> =
            self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
    }

    /// Rational inverse, or `None` when singular.
    pub fn inverse_q(&self) -> Option<Vec<Vec<Q>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<Q>> = (0..n)
            .map(|r| {
                let mut row: Vec<Q> = self.row(r).into_iter().map(|x| Q::from_integer(x as i128)).collect();
                row.extend((0..n).map(|c| if c == r { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let p = a[col][col];
            for x in a[col].iter_mut() {
                *x /= p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    let pivot_row = a[col].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Integer inverse, or `None` when the matrix is not unimodular.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let inv = self.inverse_q()?;
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for (r, row) in inv.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if !x.is_integer() {
                    return None;
                }
                out.set(r, c, i64::try_from(x.to_integer()).ok()?);
            }
        }
        Some(out)
    }

    /// Solves `self * x = v` exactly.
    pub fn solve_q(&self, v: &[Q]) -> Option<Vec<Q>> {
        let inv = self.inverse_q()?;
        Some(inv.iter().map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b)).collect())
    }

    /// Column permutation: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> IntMatrix {
        let cols: Vec<Vec<i64>> = perm.iter().map(|&j| self.column(j)).collect();
        IntMatrix::from_columns(&cols)
    }
}

/// Basis of the rational kernel of the matrix whose rows are `rows`, acting
/// on vectors of length `ncols`.
pub fn kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> =
        rows.iter().map(|r| r.iter().map(|x| Q::from_integer(*x as i128)).collect()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let p = a[rank][col];
        for x in a[rank].iter_mut() {
            *x /= p;
        }
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f];
            }
            v
        })
        .collect()
}

/// Primitive integer generator of a one-dimensional kernel, if it is one
/// dimensional.
pub fn kernel_line(rows: &[Vec<i64>], ncols: usize) -> Option<Vec<i64>> {
    let k = kernel(rows, ncols);
    (k.len() == 1).then(|| clear_denominators(&k[0]))
}

/// Sign of a rational as -1, 0, 1.
pub fn sign_q(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_orientation_and_primitivity() {
        assert_eq!(canonical(&[0, -2, 4]), vec![0, 1, -2]);
        assert_eq!(canonical(&[3, 6]), vec![1, 2]);
        assert_eq!(canonical(&[0, 0]), vec![0, 0]);
    }

    #[test]
    fn det_and_inverse() {
        let m = IntMatrix::from_rows(&[vec![-2, -9], vec![1, 4]]);
        assert_eq!(m.det(), 1);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = IntMatrix::from_rows(&[vec![2, 4], vec![1, 2]]);
        assert_eq!(s.det(), 0);
        assert!(s.inverse().is_none());
        let half = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(half.inverse().is_none());
    }

    #[test]
    fn det_needs_pivoting() {
        let m = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(m.det(), -1);
    }

    #[test]
    fn kernel_of_affine_a1_cartan() {
        let k = kernel_line(&[vec![2, -2], vec![-2, 2]], 2).unwrap();
        assert_eq!(canonical(&k), vec![1, 1]);
    }

    #[test]
    fn kernel_of_empty_system_is_everything() {
        assert_eq!(kernel(&[], 1).len(), 1);
        assert_eq!(kernel_line(&[], 1).map(|v| canonical(&v)), Some(vec![1]));
    }

    #[test]
    fn rational_round_trip() {
        let x = q(-4, 6);
        assert_eq!(fmt_q(&x), "-2/3");
        assert_eq!(parse_q("-2/3"), Some(x));
        assert_eq!(parse_q("5"), Some(qi(5)));
        assert_eq!(parse_q("1/0"), None);
    }
}
