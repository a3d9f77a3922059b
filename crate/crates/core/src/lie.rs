//! Cartan data and weights.
//!
//! Weights live in fundamental-weight coordinates with exact rational entries.
//! The invariant bilinear form is normalized so that short roots (all roots,
//! in type A) have square length 2; concretely `(alpha_i, alpha_j) = d_i a_ij`
//! and `(w_i, alpha_j) = d_j delta_ij`, where `a` is the Cartan matrix and `d`
//! its symmetrizers. Pairings between arbitrary weights go through the inverse
//! Cartan matrix and stay exact.

use crate::linalg::RatMat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("Cartan matrix is not square or empty")]
    BadShape,
    #[error("Cartan matrix entry ({0},{1}) violates Cartan conditions")]
    BadEntry(usize, usize),
    #[error("matrix is not symmetrizable by the given d")]
    NotSymmetrizable,
    #[error("Cartan matrix is singular")]
    Singular,
}

/// A symmetrizable Cartan matrix together with its symmetrizers and the
/// precomputed pairing of fundamental weights.
#[derive(Clone, Debug)]
pub struct CartanData {
    rank: usize,
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
    inv_a: RatMat,
    gram_w: RatMat,
}

impl CartanData {
    /// General symmetrizable Cartan data: `a[i][j]` is the pairing of the
    /// j-th simple root with the i-th coroot, `d` the positive symmetrizers
    /// with `d_i a_ij = d_j a_ji`.
    pub fn new(a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self, LieError> {
        let rank = a.len();
        if rank == 0 || a.iter().any(|row| row.len() != rank) || d.len() != rank {
            return Err(LieError::BadShape);
        }
        for i in 0..rank {
            if a[i][i] != 2 {
                return Err(LieError::BadEntry(i, i));
            }
            for j in 0..rank {
                if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                    return Err(LieError::BadEntry(i, j));
                }
            }
        }
        if d.iter().any(|&x| x <= 0) {
            return Err(LieError::NotSymmetrizable);
        }
        for i in 0..rank {
            for j in 0..rank {
                if d[i] * a[i][j] != d[j] * a[j][i] {
                    return Err(LieError::NotSymmetrizable);
                }
            }
        }
        let inv = RatMat::from_int_rows(a.clone())
            .inverse()
            .ok_or(LieError::Singular)?;
        // (w_i, w_j) = d_j (A^{-1})_{ji}
        let mut gram_w = RatMat::zeros(rank, rank);
        for i in 0..rank {
            for j in 0..rank {
                *gram_w.at_mut(i, j) =
                    inv.at(j, i) * BigRational::from_integer(BigInt::from(d[j]));
            }
        }
        Ok(CartanData {
            rank,
            a,
            d,
            inv_a: inv,
            gram_w,
        })
    }

    /// Type A_r, the Cartan data of sl(r+1). All symmetrizers are 1.
    pub fn type_a(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be positive");
        let mut a = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            a[i][i] = 2;
            if i + 1 < rank {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        CartanData::new(a, vec![1; rank]).expect("type A data is always valid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn sym_d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn zero_weight(&self) -> Weight {
        Weight {
            coords: vec![BigRational::zero(); self.rank],
        }
    }

    /// The i-th fundamental weight (0-based).
    pub fn fundamental(&self, i: usize) -> Weight {
        assert!(i < self.rank);
        let mut w = self.zero_weight();
        w.coords[i] = BigRational::one();
        w
    }

    /// The i-th simple root (0-based) in fundamental-weight coordinates.
    pub fn alpha(&self, i: usize) -> Weight {
        assert!(i < self.rank);
        Weight {
            coords: (0..self.rank)
                .map(|j| BigRational::from_integer(BigInt::from(self.a[j][i])))
                .collect(),
        }
    }

    /// `alpha(l) = sum_i l_i alpha_i`.
    pub fn alpha_of(&self, l: &[usize]) -> Weight {
        assert_eq!(l.len(), self.rank);
        let mut w = self.zero_weight();
        for (i, &li) in l.iter().enumerate() {
            if li > 0 {
                w = w + self.alpha(i) * BigRational::from_integer(BigInt::from(li));
            }
        }
        w
    }

    /// Half the sum of positive roots; in fundamental coordinates all ones.
    pub fn rho(&self) -> Weight {
        Weight {
            coords: vec![BigRational::one(); self.rank],
        }
    }

    /// Invariant bilinear form on the weight space.
    pub fn pair(&self, x: &Weight, y: &Weight) -> BigRational {
        assert_eq!(x.coords.len(), self.rank);
        assert_eq!(y.coords.len(), self.rank);
        let mut acc = BigRational::zero();
        for i in 0..self.rank {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if y.coords[j].is_zero() {
                    continue;
                }
                acc += &x.coords[i] * self.gram_w.at(i, j) * &y.coords[j];
            }
        }
        acc
    }

    /// `(alpha_i, y)`, cheaper than the generic pairing.
    pub fn pair_alpha(&self, i: usize, y: &Weight) -> BigRational {
        assert!(i < self.rank);
        &y.coords[i] * BigRational::from_integer(BigInt::from(self.d[i]))
    }

    /// Entry (i, j) of the inverse Cartan matrix.
    pub fn inv_cartan(&self, i: usize, j: usize) -> &BigRational {
        self.inv_a.at(i, j)
    }

    /// Coordinates of `w` in the simple-root basis, i.e. the unique `c` with
    /// `w = sum_i c_i alpha_i`.
    pub fn root_coordinates(&self, w: &Weight) -> Vec<BigRational> {
        assert_eq!(w.coords.len(), self.rank);
        // coords(w) = A c, so c = A^{-1} coords(w)
        self.inv_a.mul_vec(&w.coords)
    }

    /// Height of `w` in the root lattice: the sum of its simple-root
    /// coordinates.
    pub fn height(&self, w: &Weight) -> BigRational {
        self.root_coordinates(w).into_iter().sum()
    }

    pub fn is_dominant_integral(&self, w: &Weight) -> bool {
        w.coords
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Dimension of the irreducible module with the given dominant highest
    /// weight, by the Weyl dimension formula. Type A only.
    pub fn weyl_dim(&self, w: &Weight) -> BigRational {
        assert!(self.is_type_a(), "dimension formula implemented for type A");
        assert!(self.is_dominant_integral(w));
        let mut num = BigRational::one();
        let mut den = BigRational::one();
        for a in 0..self.rank {
            for b in a..self.rank {
                // positive root alpha_a + ... + alpha_b
                let mut s = BigRational::zero();
                for j in a..=b {
                    s += &w.coords[j] + BigRational::one();
                }
                num *= s;
                den *= BigRational::from_integer(BigInt::from((b - a + 1) as i64));
            }
        }
        num / den
    }

    pub fn is_type_a(&self) -> bool {
        self.d.iter().all(|&x| x == 1)
            && (0..self.rank).all(|i| {
                (0..self.rank).all(|j| {
                    let expect = if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    };
                    self.a[i][j] == expect
                })
            })
    }
}

/// A weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<BigRational>,
}

impl Weight {
    pub fn from_ints(coords: &[i64]) -> Self {
        Weight {
            coords: coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Integer coordinates, if all of them are integers.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.numer().try_into().ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Image under the diagram automorphism of type A reversing the nodes.
    pub fn reversed(&self) -> Weight {
        Weight {
            coords: self.coords.iter().rev().cloned().collect(),
        }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        assert_eq!(self.coords.len(), rhs.coords.len());
        Weight {
            coords: self
                .coords
                .into_iter()
                .zip(rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        assert_eq!(self.coords.len(), rhs.coords.len());
        Weight {
            coords: self
                .coords
                .into_iter()
                .zip(rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight {
            coords: self.coords.into_iter().map(|a| -a).collect(),
        }
    }
}

impl Mul<BigRational> for Weight {
    type Output = Weight;
    fn mul(self, rhs: BigRational) -> Weight {
        Weight {
            coords: self.coords.into_iter().map(|a| a * &rhs).collect(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn simple_root_pairings_match_cartan_matrix() {
        for r in 1..=6 {
            let sys = CartanData::type_a(r);
            for i in 0..r {
                for j in 0..r {
                    let p = sys.pair(&sys.alpha(i), &sys.alpha(j));
                    assert_eq!(p, rat(sys.cartan(i, j), 1), "r={} i={} j={}", r, i, j);
                    let q = sys.pair(&sys.fundamental(i), &sys.alpha(j));
                    assert_eq!(q, rat(if i == j { 1 } else { 0 }, 1));
                }
            }
        }
    }

    #[test]
    fn fundamental_weight_pairings_for_rank_two() {
        let sys = CartanData::type_a(2);
        let w1 = sys.fundamental(0);
        assert_eq!(sys.pair(&w1, &w1), rat(2, 3));
        let w2 = sys.fundamental(1);
        assert_eq!(sys.pair(&w2, &w2), rat(2, 3));
        assert_eq!(sys.pair(&w1, &w2), rat(1, 3));
    }

    #[test]
    fn alpha_of_expands_in_fundamental_coordinates() {
        let sys = CartanData::type_a(1);
        assert_eq!(sys.alpha_of(&[1]), Weight::from_ints(&[2]));
        let sys = CartanData::type_a(2);
        assert_eq!(sys.alpha_of(&[1, 1]), Weight::from_ints(&[1, 1]));
    }

    #[test]
    fn dominance_checks() {
        let sys = CartanData::type_a(2);
        assert!(sys.is_dominant_integral(&Weight::from_ints(&[1, 1])));
        let sys3 = CartanData::type_a(3);
        let mu = sys3.fundamental(1) - sys3.alpha_of(&[1, 1, 1]);
        assert!(!sys3.is_dominant_integral(&mu));
        let half = Weight {
            coords: vec![rat(1, 2)],
        };
        assert!(!CartanData::type_a(1).is_dominant_integral(&half));
    }

    #[test]
    fn weyl_dimensions_of_small_modules() {
        let sys = CartanData::type_a(2);
        assert_eq!(sys.weyl_dim(&Weight::from_ints(&[1, 0])), rat(3, 1));
        assert_eq!(sys.weyl_dim(&Weight::from_ints(&[1, 1])), rat(8, 1));
        let sys4 = CartanData::type_a(3);
        assert_eq!(sys4.weyl_dim(&Weight::from_ints(&[0, 1, 0])), rat(6, 1));
        assert_eq!(sys4.weyl_dim(&Weight::from_ints(&[1, 1, 1])), rat(64, 1));
    }

    #[test]
    fn general_symmetrizable_data_is_accepted() {
        // Type B_2: d = (2, 1).
        let b2 = CartanData::new(vec![vec![2, -1], vec![-2, 2]], vec![2, 1]).unwrap();
        assert_eq!(b2.pair(&b2.alpha(0), &b2.alpha(0)), rat(4, 1));
        assert_eq!(b2.pair(&b2.alpha(1), &b2.alpha(1)), rat(2, 1));
        assert_eq!(b2.pair(&b2.alpha(0), &b2.alpha(1)), rat(-2, 1));
        assert_eq!(b2.pair(&b2.alpha(1), &b2.alpha(0)), rat(-2, 1));
        assert!(CartanData::new(vec![vec![2, -1], vec![-2, 2]], vec![1, 1]).is_err());
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_bilinear(
            rank in 1usize..5,
            xs in proptest::collection::vec(-4i64..5, 4),
            ys in proptest::collection::vec(-4i64..5, 4),
            c in -3i64..4,
        ) {
            let sys = CartanData::type_a(rank);
            let x = Weight::from_ints(&xs[..rank]);
            let y = Weight::from_ints(&ys[..rank]);
            prop_assert_eq!(sys.pair(&x, &y), sys.pair(&y, &x));
            let scaled = x.clone() * rat(c, 1);
            prop_assert_eq!(sys.pair(&scaled, &y), sys.pair(&x, &y) * rat(c, 1));
            let sum = x.clone() + y.clone();
            prop_assert_eq!(
                sys.pair(&sum, &y),
                sys.pair(&x, &y) + sys.pair(&y, &y)
            );
        }

        #[test]
        fn alpha_of_is_additive(
            rank in 1usize..5,
            l1 in proptest::collection::vec(0usize..4, 4),
            l2 in proptest::collection::vec(0usize..4, 4),
        ) {
            let sys = CartanData::type_a(rank);
            let sum: Vec<usize> = (0..rank).map(|i| l1[i] + l2[i]).collect();
            let lhs = sys.alpha_of(&sum);
            let rhs = sys.alpha_of(&l1[..rank]) + sys.alpha_of(&l2[..rank]);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
