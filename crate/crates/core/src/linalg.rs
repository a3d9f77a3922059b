//! Exact rational linear algebra and small dense solvers.
//!
//! Rank, kernel, and solve over the rationals are reduced to fraction-free
//! (Bareiss) elimination on integer matrices, so no floating-point decision is
//! ever made about the rank of an exact matrix. A small generic LU with
//! partial pivoting serves the dense complex systems of the Newton solver and
//! determinant evaluation over any [`Scalar`].

use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense matrix of exact rationals, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: Vec<Vec<i64>>) -> Self {
        RatMat::from_rows(
            rows.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|x| BigRational::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for j in 0..self.cols {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        acc += self.at(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Clears denominators row by row, producing an integer matrix with the
    /// same row space and kernel.
    fn to_int_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self.at(i, j).denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let q = self.at(i, j);
                        q.numer() * (&lcm / q.denom())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let (_, pivots) = bareiss_echelon(self.to_int_rows());
        pivots.len()
    }

    /// Basis of the right kernel, computed exactly.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let (ech, pivots) = bareiss_echelon(self.to_int_rows());
        let pivot_set: Vec<Option<usize>> = {
            let mut set = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                set[col] = Some(row);
            }
            set
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![BigRational::zero(); self.cols];
            x[free] = BigRational::one();
            // Back-substitute pivot variables from the bottom pivot row up.
            for (row, &pcol) in pivots.iter().enumerate().rev() {
                let mut acc = BigRational::zero();
                for j in pcol + 1..self.cols {
                    if !ech[row][j].is_zero() && !x[j].is_zero() {
                        acc += BigRational::from_integer(ech[row][j].clone()) * &x[j];
                    }
                }
                x[pcol] = -acc / BigRational::from_integer(ech[row][pcol].clone());
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of `self * x = rhs` with free variables set to zero, or
    /// `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = RatMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = rhs[i].clone();
        }
        let (ech, pivots) = bareiss_echelon(aug.to_int_rows());
        if pivots.iter().any(|&c| c == self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (row, &pcol) in pivots.iter().enumerate().rev() {
            let mut acc = BigRational::from_integer(ech[row][self.cols].clone());
            for j in pcol + 1..self.cols {
                if !ech[row][j].is_zero() && !x[j].is_zero() {
                    acc -= BigRational::from_integer(ech[row][j].clone()) * &x[j];
                }
            }
            x[pcol] = acc / BigRational::from_integer(ech[row][pcol].clone());
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a.at(i, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    self::swap_entries(&mut a, pivot, col, j);
                    self::swap_entries(&mut inv, pivot, col, j);
                }
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) /= p.clone();
                *inv.at_mut(col, j) /= p.clone();
            }
            for i in 0..n {
                if i == col || a.at(i, col).is_zero() {
                    continue;
                }
                let f = a.at(i, col).clone();
                for j in 0..n {
                    let t = &f * a.at(col, j);
                    *a.at_mut(i, j) -= t;
                    let t = &f * inv.at(col, j);
                    *inv.at_mut(i, j) -= t;
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&i| !a.at(i, col).is_zero()) {
                Some(p) => p,
                None => return BigRational::zero(),
            };
            if pivot != col {
                for j in 0..n {
                    self::swap_entries(&mut a, pivot, col, j);
                }
                det = -det;
            }
            let p = a.at(col, col).clone();
            det *= p.clone();
            for i in col + 1..n {
                if a.at(i, col).is_zero() {
                    continue;
                }
                let f = a.at(i, col) / &p;
                for j in col..n {
                    let t = &f * a.at(col, j);
                    *a.at_mut(i, j) -= t;
                }
            }
        }
        det
    }
}

fn swap_entries(m: &mut RatMat, r1: usize, r2: usize, j: usize) {
    let cols = m.cols;
    m.data.swap(r1 * cols + j, r2 * cols + j);
}

/// Fraction-free row echelon form of an integer matrix (Bareiss). Returns the
/// echelon rows and the pivot column of each nonzero row. All divisions are
/// exact by the Sylvester determinant identity.
fn bareiss_echelon(mut m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // Prefer small pivots to slow coefficient growth.
        let pivot = (rank..rows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].magnitude().clone());
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        m.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        pivots.push(col);
        rank += 1;
    }
    (m, pivots)
}

/// LU determinant with partial pivoting over any scalar. Consumes the matrix.
pub fn lu_det<K: Scalar>(mut a: Vec<Vec<K>>) -> K {
    let n = a.len();
    if n == 0 {
        return K::one();
    }
    assert!(a.iter().all(|r| r.len() == n));
    let mut det = K::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .approx_abs()
                    .partial_cmp(&a[j][col].approx_abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot][col].is_zero() || a[pivot][col].approx_abs() == 0.0 {
            return K::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det = det * a[col][col].clone();
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone() / a[col][col].clone();
            for j in col + 1..n {
                let t = f.clone() * a[col][j].clone();
                a[i][j] = a[i][j].clone() - t;
            }
            a[i][col] = K::zero();
        }
    }
    det
}

/// Solves the dense square system `a x = b` by LU with partial pivoting.
/// Returns `None` when a pivot vanishes.
pub fn lu_solve<K: Scalar>(mut a: Vec<Vec<K>>, mut b: Vec<K>) -> Option<Vec<K>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    assert!(a.iter().all(|r| r.len() == n));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .approx_abs()
                    .partial_cmp(&a[j][col].approx_abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot][col].is_zero() || a[pivot][col].approx_abs() == 0.0 {
            return None;
        }
        if pivot != col {
            a.swap(pivot, col);
            b.swap(pivot, col);
        }
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone() / a[col][col].clone();
            for j in col + 1..n {
                let t = f.clone() * a[col][j].clone();
                a[i][j] = a[i][j].clone() - t;
            }
            let t = f * b[col].clone();
            b[i] = b[i].clone() - t;
            a[i][col] = K::zero();
        }
    }
    let mut x = vec![K::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for j in row + 1..n {
            let t = a[row][j].clone() * x[j].clone();
            acc = acc - t;
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}
