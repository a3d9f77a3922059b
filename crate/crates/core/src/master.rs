//! Master functions of Gaudin type and their critical-point equations.
//!
//! For Cartan data with invariant pairing `( , )`, dominant weights
//! `Lambda_1..Lambda_n` attached to distinct points `z_1..z_n`, and a color
//! multiplicity vector `l = (l_1..l_r)`, the master function in the variables
//! `t_1..t_l` (ordered by color, `l_1` variables of color 1 first, and so on)
//! is
//!
//! ```text
//! Phi(t, z) =  prod_{s<s'} (z_s - z_s')^(Lambda_s, Lambda_s')
//!            * prod_{i,s}  (t_i - z_s)^-(alpha_{c(i)}, Lambda_s)
//!            * prod_{i<j}  (t_i - t_j)^(alpha_{c(i)}, alpha_{c(j)})
//! ```
//!
//! where `c(i)` is the color of `t_i`. Critical points of `log Phi` in `t` are
//! solutions of the Bethe ansatz equations; [`MasterProblem::bethe_residual`]
//! is the gradient of `log Phi` and [`MasterProblem::log_phi_hessian`] its
//! matrix of second partial derivatives, both plain rational expressions that
//! evaluate in any [`Scalar`].

use crate::lie::{CartanData, Weight};
use crate::linalg::lu_det;
use crate::scalar::{rational_to_f64, Scalar};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// Relative threshold below which two evaluation points are treated as
/// coincident in floating-point arithmetic.
pub const COINCIDENCE_RTOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum MasterError {
    #[error("l has length {got}, expected rank {rank}")]
    BadColorCount { got: usize, rank: usize },
    #[error("got {weights} weights but {points} marked points")]
    WeightCountMismatch { weights: usize, points: usize },
    #[error("weight {0} does not match the rank of the Cartan data")]
    BadWeightRank(usize),
    #[error("marked points z_{0} and z_{1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("t has length {got}, expected {expected}")]
    BadArity { got: usize, expected: usize },
    #[error("evaluation hits the pole t_{0} = z_{1}")]
    PoleTz(usize, usize),
    #[error("evaluation hits the pole t_{0} = t_{1}")]
    PoleTt(usize, usize),
}

/// The color of each `t` variable (0-based), ordered by color blocks.
pub fn color_map(l: &[usize]) -> Vec<usize> {
    let mut colors = Vec::with_capacity(l.iter().sum());
    for (color, &count) in l.iter().enumerate() {
        colors.extend(std::iter::repeat(color).take(count));
    }
    colors
}

/// A master function with all pairing coefficients precomputed.
#[derive(Clone, Debug)]
pub struct MasterProblem<K: Scalar> {
    sys: CartanData,
    weights: Vec<Weight>,
    l: Vec<usize>,
    z: Vec<K>,
    colors: Vec<usize>,
    pair_tz: Vec<Vec<BigRational>>,
    pair_tt: Vec<Vec<BigRational>>,
}

impl<K: Scalar> MasterProblem<K> {
    pub fn new(
        sys: CartanData,
        weights: Vec<Weight>,
        l: Vec<usize>,
        z: Vec<K>,
    ) -> Result<Self, MasterError> {
        if l.len() != sys.rank() {
            return Err(MasterError::BadColorCount {
                got: l.len(),
                rank: sys.rank(),
            });
        }
        if weights.len() != z.len() {
            return Err(MasterError::WeightCountMismatch {
                weights: weights.len(),
                points: z.len(),
            });
        }
        for (s, w) in weights.iter().enumerate() {
            if w.rank() != sys.rank() {
                return Err(MasterError::BadWeightRank(s));
            }
        }
        for s in 0..z.len() {
            for s2 in s + 1..z.len() {
                if coincide(&z[s], &z[s2]) {
                    return Err(MasterError::CoincidentPoints(s, s2));
                }
            }
        }
        let colors = color_map(&l);
        let pair_tz = colors
            .iter()
            .map(|&c| weights.iter().map(|w| sys.pair_alpha(c, w)).collect())
            .collect();
        let pair_tt: Vec<Vec<BigRational>> = colors
            .iter()
            .map(|&ci| {
                colors
                    .iter()
                    .map(|&cj| sys.pair(&sys.alpha(ci), &sys.alpha(cj)))
                    .collect()
            })
            .collect();
        Ok(MasterProblem {
            sys,
            weights,
            l,
            z,
            colors,
            pair_tz,
            pair_tt,
        })
    }

    pub fn sys(&self) -> &CartanData {
        &self.sys
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn z(&self) -> &[K] {
        &self.z
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn n_points(&self) -> usize {
        self.z.len()
    }

    pub fn l_total(&self) -> usize {
        self.colors.len()
    }

    /// `sum_s Lambda_s - alpha(l)`, the weight of the singular vectors the
    /// critical points correspond to.
    pub fn singular_weight(&self) -> Weight {
        let mut acc = self.sys.zero_weight();
        for w in &self.weights {
            acc = acc + w.clone();
        }
        acc - self.sys.alpha_of(&self.l)
    }

    /// Gradient of `log Phi` with respect to `t`. Zero exactly at the Bethe
    /// ansatz solutions.
    pub fn bethe_residual(&self, t: &[K]) -> Result<Vec<K>, MasterError> {
        self.check_arity(t)?;
        let mut res = Vec::with_capacity(t.len());
        for i in 0..t.len() {
            let mut acc = K::zero();
            for (s, zs) in self.z.iter().enumerate() {
                let p = &self.pair_tz[i][s];
                if p.is_zero() {
                    continue;
                }
                let diff = t[i].clone() - zs.clone();
                if coincide_zero(&diff, &t[i], zs) {
                    return Err(MasterError::PoleTz(i, s));
                }
                acc = acc - K::from_rational(p) / diff;
            }
            for j in 0..t.len() {
                if j == i {
                    continue;
                }
                let p = &self.pair_tt[i][j];
                if p.is_zero() {
                    continue;
                }
                let diff = t[i].clone() - t[j].clone();
                if coincide_zero(&diff, &t[i], &t[j]) {
                    return Err(MasterError::PoleTt(i.min(j), i.max(j)));
                }
                acc = acc + K::from_rational(p) / diff;
            }
            res.push(acc);
        }
        Ok(res)
    }

    /// Matrix of second partial derivatives of `log Phi` with respect to `t`.
    /// For `l = 0` this is the empty 0 x 0 matrix.
    pub fn log_phi_hessian(&self, t: &[K]) -> Result<Vec<Vec<K>>, MasterError> {
        self.check_arity(t)?;
        let m = t.len();
        let mut h = vec![vec![K::zero(); m]; m];
        for i in 0..m {
            let mut diag = K::zero();
            for (s, zs) in self.z.iter().enumerate() {
                let p = &self.pair_tz[i][s];
                if p.is_zero() {
                    continue;
                }
                let diff = t[i].clone() - zs.clone();
                if coincide_zero(&diff, &t[i], zs) {
                    return Err(MasterError::PoleTz(i, s));
                }
                diag = diag + K::from_rational(p) / (diff.clone() * diff);
            }
            for j in 0..m {
                if j == i {
                    continue;
                }
                let p = &self.pair_tt[i][j];
                if p.is_zero() {
                    continue;
                }
                let diff = t[i].clone() - t[j].clone();
                if coincide_zero(&diff, &t[i], &t[j]) {
                    return Err(MasterError::PoleTt(i.min(j), i.max(j)));
                }
                let sq = diff.clone() * diff;
                diag = diag - K::from_rational(p) / sq.clone();
                h[i][j] = K::from_rational(p) / sq;
            }
            h[i][i] = diag;
        }
        Ok(h)
    }

    /// Determinant of [`Self::log_phi_hessian`]; 1 for `l = 0`.
    pub fn hessian_det(&self, t: &[K]) -> Result<K, MasterError> {
        Ok(lu_det(self.log_phi_hessian(t)?))
    }

    /// Sup norm of the residual in the numeric embedding.
    pub fn residual_norm(&self, t: &[K]) -> Result<f64, MasterError> {
        Ok(self
            .bethe_residual(t)?
            .iter()
            .map(|x| x.approx_abs())
            .fold(0.0, f64::max))
    }

    /// Sum of the absolute values of the residual's constituent terms,
    /// maximized over the variables. Cancellation caps the accuracy of a
    /// computed residual at roughly machine epsilon times this number, so
    /// residual smallness should be judged relative to it.
    pub fn residual_scale(&self, t: &[K]) -> Result<f64, MasterError> {
        self.check_arity(t)?;
        let tc: Vec<Complex64> = t.iter().map(Scalar::to_c64).collect();
        let zc: Vec<Complex64> = self.z.iter().map(Scalar::to_c64).collect();
        let mut worst = 0.0f64;
        for i in 0..tc.len() {
            let mut acc = 0.0;
            for (s, zs) in zc.iter().enumerate() {
                let p = &self.pair_tz[i][s];
                if p.is_zero() {
                    continue;
                }
                let dist = (tc[i] - zs).norm();
                if dist == 0.0 {
                    return Err(MasterError::PoleTz(i, s));
                }
                acc += rational_to_f64(p).abs() / dist;
            }
            for j in 0..tc.len() {
                if j == i {
                    continue;
                }
                let p = &self.pair_tt[i][j];
                if p.is_zero() {
                    continue;
                }
                let dist = (tc[i] - tc[j]).norm();
                if dist == 0.0 {
                    return Err(MasterError::PoleTt(i.min(j), i.max(j)));
                }
                acc += rational_to_f64(p).abs() / dist;
            }
            worst = worst.max(acc);
        }
        Ok(worst)
    }

    /// Sorts each color block by (re, im) of the numeric embedding. Critical
    /// points related by permutations of same-color variables represent the
    /// same orbit and get the same canonical form.
    pub fn canonicalize(&self, t: &[K]) -> Vec<K> {
        let mut out = Vec::with_capacity(t.len());
        let mut offset = 0;
        for &count in &self.l {
            let mut block: Vec<K> = t[offset..offset + count].to_vec();
            block.sort_by(|a, b| {
                let (a, b) = (a.to_c64(), b.to_c64());
                (a.re, a.im)
                    .partial_cmp(&(b.re, b.im))
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            out.extend(block);
            offset += count;
        }
        out
    }

    /// Whether two points are equal up to permutations of same-color
    /// coordinates, compared in the numeric embedding.
    pub fn same_orbit(&self, a: &[K], b: &[K], tol: f64) -> bool {
        let ca = self.canonicalize(a);
        let cb = self.canonicalize(b);
        ca.iter()
            .zip(&cb)
            .all(|(x, y)| (x.to_c64() - y.to_c64()).norm() <= tol)
    }

    pub fn critical_point(&self, t: Vec<K>) -> Result<CriticalPoint<K>, MasterError> {
        let residual_norm = self.residual_norm(&t)?;
        let hessian = self.log_phi_hessian(&t)?;
        let hessian_det = lu_det(hessian.clone());
        let canonical = self.canonicalize(&t);
        Ok(CriticalPoint {
            t,
            canonical,
            residual_norm,
            hessian,
            hessian_det,
        })
    }

    fn check_arity(&self, t: &[K]) -> Result<(), MasterError> {
        if t.len() != self.colors.len() {
            return Err(MasterError::BadArity {
                got: t.len(),
                expected: self.colors.len(),
            });
        }
        Ok(())
    }
}

impl MasterProblem<Complex64> {
    /// `log Phi` on the principal branch of each logarithm. Branch jumps
    /// cancel in all derivative-based identities, so only derivatives of this
    /// function are ever compared across evaluation points.
    pub fn log_phi(&self, t: &[Complex64]) -> Result<Complex64, MasterError> {
        self.check_arity(t)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..self.z.len() {
            for s2 in s + 1..self.z.len() {
                let p = self.sys.pair(&self.weights[s], &self.weights[s2]);
                if p.is_zero() {
                    continue;
                }
                acc += Complex64::from_rational(&p) * (self.z[s] - self.z[s2]).ln();
            }
        }
        for i in 0..t.len() {
            for (s, zs) in self.z.iter().enumerate() {
                let p = &self.pair_tz[i][s];
                if p.is_zero() {
                    continue;
                }
                let diff = t[i] - zs;
                if coincide_zero(&diff, &t[i], zs) {
                    return Err(MasterError::PoleTz(i, s));
                }
                acc -= Complex64::from_rational(p) * diff.ln();
            }
            for j in i + 1..t.len() {
                let p = &self.pair_tt[i][j];
                if p.is_zero() {
                    continue;
                }
                let diff = t[i] - t[j];
                if coincide_zero(&diff, &t[i], &t[j]) {
                    return Err(MasterError::PoleTt(i, j));
                }
                acc += Complex64::from_rational(p) * diff.ln();
            }
        }
        Ok(acc)
    }
}

impl<K: Scalar> MasterProblem<K> {
    /// The same problem with all data pushed into `Complex64`.
    pub fn to_complex(&self) -> MasterProblem<Complex64> {
        MasterProblem::new(
            self.sys.clone(),
            self.weights.clone(),
            self.l.clone(),
            self.z.iter().map(|z| z.to_c64()).collect(),
        )
        .expect("complex embedding of a valid problem is valid")
    }
}

/// A critical point with its Hessian data.
#[derive(Clone, Debug)]
pub struct CriticalPoint<K: Scalar> {
    pub t: Vec<K>,
    /// `t` with each color block sorted; the orbit representative.
    pub canonical: Vec<K>,
    pub residual_norm: f64,
    pub hessian: Vec<Vec<K>>,
    pub hessian_det: K,
}

impl<K: Scalar> CriticalPoint<K> {
    pub fn to_complex(&self) -> CriticalPoint<Complex64> {
        CriticalPoint {
            t: self.t.iter().map(Scalar::to_c64).collect(),
            canonical: self.canonical.iter().map(Scalar::to_c64).collect(),
            residual_norm: self.residual_norm,
            hessian: self
                .hessian
                .iter()
                .map(|row| row.iter().map(Scalar::to_c64).collect())
                .collect(),
            hessian_det: self.hessian_det.to_c64(),
        }
    }
}

pub(crate) fn coincide<K: Scalar>(a: &K, b: &K) -> bool {
    let diff = a.clone() - b.clone();
    coincide_zero(&diff, a, b)
}

/// Pole test. Exact zero for exact scalars; for floating-point scalars a
/// difference below `COINCIDENCE_RTOL` relative to the operand scale counts
/// as a coincidence.
pub(crate) fn coincide_zero<K: Scalar>(diff: &K, a: &K, b: &K) -> bool {
    if diff.is_zero() {
        return true;
    }
    if K::EXACT {
        return false;
    }
    let scale = 1.0f64.max(a.approx_abs()).max(b.approx_abs());
    diff.approx_abs() < COINCIDENCE_RTOL * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuadExt;
    use num_bigint::BigInt;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sl2_two_points() -> MasterProblem<BigRational> {
        MasterProblem::new(
            CartanData::type_a(1),
            vec![Weight::from_ints(&[1]), Weight::from_ints(&[1])],
            vec![1],
            vec![rat(0, 1), rat(1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn residual_vanishes_at_the_midpoint_seed() {
        let p = sl2_two_points();
        let res = p.bethe_residual(&[rat(1, 2)]).unwrap();
        assert!(res[0].is_zero());
        let res = p.bethe_residual(&[rat(1, 4)]).unwrap();
        assert_eq!(res[0], rat(-8, 3));
    }

    #[test]
    fn hessian_at_the_midpoint_is_eight() {
        let p = sl2_two_points();
        let h = p.log_phi_hessian(&[rat(1, 2)]).unwrap();
        assert_eq!(h[0][0], rat(8, 1));
        assert_eq!(p.hessian_det(&[rat(1, 2)]).unwrap(), rat(8, 1));
    }

    #[test]
    fn empty_t_has_unit_hessian_determinant() {
        let p = MasterProblem::new(
            CartanData::type_a(1),
            vec![Weight::from_ints(&[1])],
            vec![0],
            vec![rat(0, 1)],
        )
        .unwrap();
        assert!(p.bethe_residual(&[]).unwrap().is_empty());
        assert_eq!(p.hessian_det(&[]).unwrap(), rat(1, 1));
    }

    #[test]
    fn log_phi_of_a_single_linear_factor() {
        let p = MasterProblem::new(
            CartanData::type_a(1),
            vec![Weight::from_ints(&[1])],
            vec![1],
            vec![Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        let v = p.log_phi(&[Complex64::new(2.0, 0.0)]).unwrap();
        assert!((v.re + 2.0f64.ln()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn residual_is_the_gradient_of_log_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let sys = CartanData::type_a(2);
        let p = MasterProblem::new(
            sys.clone(),
            vec![
                Weight::from_ints(&[1, 0]),
                Weight::from_ints(&[0, 1]),
                Weight::from_ints(&[1, 1]),
            ],
            vec![2, 1],
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.3, 0.9),
            ],
        )
        .unwrap();
        for _ in 0..10 {
            let t: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0)))
                .collect();
            let grad = p.bethe_residual(&t).unwrap();
            let h = 1e-6;
            for i in 0..t.len() {
                let mut tp = t.clone();
                let mut tm = t.clone();
                tp[i] += Complex64::new(h, 0.0);
                tm[i] -= Complex64::new(h, 0.0);
                let fd = (p.log_phi(&tp).unwrap() - p.log_phi(&tm).unwrap())
                    / Complex64::new(2.0 * h, 0.0);
                assert!(
                    (fd - grad[i]).norm() < 1e-5 * (1.0 + grad[i].norm()),
                    "component {}: fd {} vs analytic {}",
                    i,
                    fd,
                    grad[i]
                );
            }
        }
    }

    #[test]
    fn hessian_is_the_jacobian_of_the_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = MasterProblem::new(
            CartanData::type_a(2),
            vec![Weight::from_ints(&[1, 0]), Weight::from_ints(&[1, 0])],
            vec![1, 1],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        for _ in 0..10 {
            let t: Vec<Complex64> = (0..2)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0)))
                .collect();
            let hess = p.log_phi_hessian(&t).unwrap();
            let h = 1e-6;
            for j in 0..t.len() {
                let mut tp = t.clone();
                let mut tm = t.clone();
                tp[j] += Complex64::new(h, 0.0);
                tm[j] -= Complex64::new(h, 0.0);
                let rp = p.bethe_residual(&tp).unwrap();
                let rm = p.bethe_residual(&tm).unwrap();
                for i in 0..t.len() {
                    let fd = (rp[i] - rm[i]) / Complex64::new(2.0 * h, 0.0);
                    assert!(
                        (fd - hess[i][j]).norm() < 1e-4 * (1.0 + hess[i][j].norm()),
                        "entry ({},{}): fd {} vs analytic {}",
                        i,
                        j,
                        fd,
                        hess[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn same_color_variables_enter_symmetrically() {
        let p = MasterProblem::new(
            CartanData::type_a(1),
            vec![Weight::from_ints(&[2]), Weight::from_ints(&[2])],
            vec![2],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let t = [Complex64::new(0.3, 0.1), Complex64::new(0.8, -0.2)];
        let swapped = [t[1], t[0]];
        let r = p.bethe_residual(&t).unwrap();
        let rs = p.bethe_residual(&swapped).unwrap();
        assert!((r[0] - rs[1]).norm() < 1e-15);
        assert!((r[1] - rs[0]).norm() < 1e-15);
        let c = p.canonicalize(&t);
        let cs = p.canonicalize(&swapped);
        assert_eq!(c, cs);
        assert!(p.same_orbit(&t, &swapped, 1e-12));
    }

    #[test]
    fn cube_roots_of_unity_give_a_degenerate_hessian() {
        let eta = QuadExt::cbrt_unity();
        let z = vec![
            QuadExt::one(),
            eta.clone(),
            eta.clone() * eta.clone(),
        ];
        let p = MasterProblem::new(
            CartanData::type_a(1),
            vec![Weight::from_ints(&[1]); 3],
            vec![1],
            z,
        )
        .unwrap();
        let t = [QuadExt::zero()];
        let res = p.bethe_residual(&t).unwrap();
        assert!(res[0].is_zero(), "t = 0 is a critical point");
        let det = p.hessian_det(&t).unwrap();
        assert!(det.is_zero(), "the critical point is degenerate");
    }

    #[test]
    fn poles_are_reported() {
        let p = sl2_two_points();
        assert!(matches!(
            p.bethe_residual(&[rat(0, 1)]),
            Err(MasterError::PoleTz(0, 0))
        ));
        let p2 = MasterProblem::new(
            CartanData::type_a(1),
            vec![Weight::from_ints(&[2]), Weight::from_ints(&[2])],
            vec![2],
            vec![rat(0, 1), rat(1, 1)],
        )
        .unwrap();
        assert!(matches!(
            p2.bethe_residual(&[rat(1, 3), rat(1, 3)]),
            Err(MasterError::PoleTt(0, 1))
        ));
        assert!(matches!(
            MasterProblem::new(
                CartanData::type_a(1),
                vec![Weight::from_ints(&[1]), Weight::from_ints(&[1])],
                vec![1],
                vec![rat(1, 1), rat(1, 1)],
            ),
            Err(MasterError::CoincidentPoints(0, 1))
        ));
    }
}
