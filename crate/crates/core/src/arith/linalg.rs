//! Small exact linear algebra over the integers and rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("integer overflow in matrix arithmetic")]
    Overflow,
    #[error("ragged matrix rows")]
    Ragged,
}

/// Square integer matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = MatrixError;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        Self::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows().map(|r| r.to_vec()).collect()
    }
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            let cols = rows.first().map_or(0, |r| r.len());
            if rows.iter().all(|r| r.len() == cols) {
                return Err(MatrixError::NotSquare { rows: n, cols });
            }
            return Err(MatrixError::Ragged);
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let n = cols.len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(MatrixError::Ragged);
        }
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        Ok(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    pub fn scalar(n: usize, s: i64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>, MatrixError> {
        if v.len() != self.n {
            return Err(MatrixError::Dimension {
                expected: self.n,
                got: v.len(),
            });
        }
        self.rows()
            .map(|row| {
                let s: i128 = row
                    .iter()
                    .zip(v)
                    .map(|(a, b)| *a as i128 * *b as i128)
                    .sum();
                i64::try_from(s).map_err(|_| MatrixError::Overflow)
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if other.n != self.n {
            return Err(MatrixError::Dimension {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let s: i128 = (0..self.n)
                    .map(|k| self.get(i, k) as i128 * other.get(k, j) as i128)
                    .sum();
                out.set(i, j, i64::try_from(s).map_err(|_| MatrixError::Overflow)?);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self, MatrixError> {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Exact determinant (Bareiss elimination over big integers).
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(
            self.rows()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, x| acc.gcd(x))
}

/// Divides by the gcd of the entries; zero vectors are returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Returns `Some(s)` with `b = s * a` for a rational `s`, or `None`.
pub fn proportionality(a: &[i64], b: &[i64]) -> Option<BigRational> {
    let pivot = a.iter().position(|x| *x != 0)?;
    let s = BigRational::new(BigInt::from(b[pivot]), BigInt::from(a[pivot]));
    let ok = a
        .iter()
        .zip(b)
        .all(|(x, y)| BigRational::from_integer(BigInt::from(*y)) == &s * BigInt::from(*x));
    ok.then_some(s)
}

/// Rank of a rational matrix given by integer rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect()
        })
        .collect();
    row_reduce(&mut m).len()
}

/// Fraction-free determinant of a square big-integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn row_reduce(m: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
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
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// Integer basis (primitive vectors) of the kernel `{x : rows · x = 0}`,
/// in a canonical order determined by the reduced echelon form.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect()
        })
        .collect();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![BigRational::zero(); n];
            x[fc] = BigRational::from_integer(1.into());
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = -row[fc].clone();
            }
            clear_denominators(&x)
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn clear_denominators(x: &[BigRational]) -> Vec<i64> {
    let den = x.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|v| (v * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| {
            let q = if g.is_zero() { v.clone() } else { v / &g };
            q.to_i64().expect("kernel vector entry exceeds i64")
        })
        .collect()
}

/// Solves `A x = b` for square invertible `A`; `None` when singular.
pub fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r: Vec<BigRational> = row
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect();
            r.push(BigRational::from_integer(bi.into()));
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.iter().map(|r| r[n].clone()).collect())
}

pub fn is_nonneg(x: &BigRational) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(2 * (3 - 2) + (1 - 3)));
        assert_eq!(IntMatrix::identity(5).determinant(), BigInt::from(1));
        let singular = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert!(singular.determinant().is_zero());
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let k = integer_kernel(&[vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn proportional_vectors() {
        assert_eq!(
            proportionality(&[1, -1, 0], &[3, -3, 0]),
            Some(BigRational::from_integer(3.into()))
        );
        assert_eq!(proportionality(&[1, -1, 0], &[3, -2, 0]), None);
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]),
            Err(MatrixError::NotSquare { .. })
        ));
    }
}
