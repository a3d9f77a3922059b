//! The universal weight function and its verification at critical points.
//!
//! For a tuple `t` of auxiliary variables the weight function assigns to
//! every way of distributing the variables over the tensor factors a chain
//! of simple poles and a word of lowering operators. Summed up, this gives a
//! vector `omega(t, z)` in the weight space `V[Lambda - alpha(l)]`. At a
//! critical point of the master function, `omega` is a singular vector and a
//! common eigenvector of the Gaudin Hamiltonians, and its Shapovalov norm
//! equals the Hessian determinant of `log Phi`. Those are the statements the
//! verification below measures.

use crate::gaudin::{gaudin_apply, GaudinError};
use crate::master::{coincide, MasterProblem};
use crate::reps::{iterated_singular_vector, ColorBlocks, TensorSpace, TensorVector};
use crate::scalar::Scalar;
use itertools::Itertools;
use thiserror::Error;

/// One assignment of color words to the tensor factors: block `s` carries
/// the ordered colors of the lowering word applied to the `s`-th factor.
pub type IndexSequence = ColorBlocks;

#[derive(Debug, Error)]
pub enum BetheError {
    #[error("expected {expected} variables, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("variables {0} and {1} coincide")]
    CoincidentVariables(usize, usize),
    #[error("variable {0} collides with marked point {1}")]
    VariableAtPoint(usize, usize),
    #[error("tensor space does not match the problem weights")]
    SpaceMismatch,
    #[error("the weight function vanished identically")]
    ZeroWeightFunction,
    #[error(transparent)]
    Gaudin(#[from] GaudinError),
}

/// Enumerates all assignments of `l_i` copies of color `i` to `n` ordered
/// blocks, each block being an ordered word. For a single variable of a
/// single color this is just a choice of block; repeated colors are not
/// distinguished here, their permutations enter through the bijections in
/// [`omega_blocks`].
pub fn enumerate_p(l: &[usize], n: usize) -> Vec<IndexSequence> {
    let mut out = Vec::new();
    let mut blocks: IndexSequence = Vec::with_capacity(n);
    let mut remaining = l.to_vec();
    fn go(
        n: usize,
        blocks: &mut IndexSequence,
        word: &mut Vec<usize>,
        remaining: &mut [usize],
        out: &mut Vec<IndexSequence>,
    ) {
        if blocks.len() == n {
            if remaining.iter().all(|&c| c == 0) && word.is_empty() {
                out.push(blocks.clone());
            }
            return;
        }
        // Close the current block first, then try every extension.
        blocks.push(word.clone());
        let stash = std::mem::take(word);
        go(n, blocks, word, remaining, out);
        *word = stash;
        blocks.pop();
        for c in 0..remaining.len() {
            if remaining[c] == 0 {
                continue;
            }
            remaining[c] -= 1;
            word.push(c);
            go(n, blocks, word, remaining, out);
            word.pop();
            remaining[c] += 1;
        }
    }
    let mut word = Vec::new();
    go(n, &mut blocks, &mut word, &mut remaining, &mut out);
    out
}

/// Coefficients of the weight function, grouped by block assignment: the
/// coefficient of the block assignment `I` is the sum over all bijections
/// between same-colored variables and the color slots of `I` of the product
/// over blocks of the pole chain
/// `1/((t_{a_1}-t_{a_2}) .. (t_{a_{j-1}}-t_{a_j})(t_{a_j}-z_s))`.
pub fn omega_blocks<K: Scalar>(
    mp: &MasterProblem<K>,
    t: &[K],
) -> Result<Vec<(IndexSequence, K)>, BetheError> {
    let colors = mp.colors();
    if t.len() != colors.len() {
        return Err(BetheError::VariableCount {
            expected: colors.len(),
            got: t.len(),
        });
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if coincide(&t[i], &t[j]) {
                return Err(BetheError::CoincidentVariables(i, j));
            }
        }
        for (s, zs) in mp.z().iter().enumerate() {
            if coincide(&t[i], zs) {
                return Err(BetheError::VariableAtPoint(i, s));
            }
        }
    }
    let r = mp.l().len();
    let per_color: Vec<Vec<usize>> = (0..r)
        .map(|c| {
            colors
                .iter()
                .enumerate()
                .filter(|(_, &ci)| ci == c)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    for blocks in enumerate_p(mp.l(), mp.n_points()) {
        // The slots of each color, scanned block by block.
        let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r];
        for (s, word) in blocks.iter().enumerate() {
            for (p, &c) in word.iter().enumerate() {
                slots[c].push((s, p));
            }
        }
        let choices: Vec<Vec<Vec<usize>>> = (0..r)
            .map(|c| {
                per_color[c]
                    .iter()
                    .copied()
                    .permutations(per_color[c].len())
                    .collect()
            })
            .collect();
        let mut coeff = K::zero();
        for assignment in choices.into_iter().multi_cartesian_product() {
            // assignment[c][q] is the variable sitting in slot q of color c.
            let mut var_at: Vec<Vec<usize>> =
                blocks.iter().map(|w| vec![0; w.len()]).collect();
            for c in 0..r {
                for (q, &(s, p)) in slots[c].iter().enumerate() {
                    var_at[s][p] = assignment[c][q];
                }
            }
            let mut term = K::one();
            for (s, vars) in var_at.iter().enumerate() {
                if vars.is_empty() {
                    continue;
                }
                for m in 0..vars.len() - 1 {
                    term = term / (t[vars[m]].clone() - t[vars[m + 1]].clone());
                }
                let last = vars[vars.len() - 1];
                term = term / (t[last].clone() - mp.z()[s].clone());
            }
            coeff = coeff + term;
        }
        if !coeff.is_zero() {
            out.push((blocks, coeff));
        }
    }
    Ok(out)
}

/// The weight function `omega(t, z)` as a vector in the tensor product.
pub fn omega_weight_function<K: Scalar>(
    space: &TensorSpace,
    mp: &MasterProblem<K>,
    t: &[K],
) -> Result<TensorVector<K>, BetheError> {
    if space.n_factors() != mp.n_points() {
        return Err(BetheError::SpaceMismatch);
    }
    for (s, fac) in space.factors().iter().enumerate() {
        if fac.highest_weight() != &mp.weights()[s] {
            return Err(BetheError::SpaceMismatch);
        }
    }
    let coeffs = omega_blocks(mp, t)?;
    let parts: Vec<TensorVector<K>> = (0..space.n_factors())
        .map(|s| TensorVector::unit(vec![space.factor(s).hw_index() as u32]))
        .collect();
    let ones = vec![1usize; space.n_factors()];
    Ok(iterated_singular_vector(space, &ones, &coeffs, &parts))
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Relative threshold below which the Shapovalov norm of the weight
    /// function counts as zero. Exact scalars ignore it and test exactly.
    pub degenerate_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            degenerate_tol: 1e-10,
        }
    }
}

/// Everything measured about the weight function at one point.
#[derive(Clone, Debug)]
pub struct BetheReport<K: Scalar> {
    pub omega: TensorVector<K>,
    /// S(omega, omega).
    pub norm_sq: K,
    /// max_i ||e_i omega|| / ||omega||, in sup norms.
    pub singular_defect: f64,
    /// The norm vanished: no eigenvalues are extracted in this case.
    pub degenerate: bool,
    /// Rayleigh quotients S(K_s omega, omega) / S(omega, omega).
    pub eigenvalues: Vec<K>,
    /// max_s ||K_s omega - c_s omega|| / ||omega||.
    pub eigen_defect: f64,
    /// |sum_s c_s|; the Hamiltonians sum to zero.
    pub eigen_sum_defect: f64,
}

/// Builds the weight function at `t` and measures how well it behaves as a
/// singular vector and common eigenvector of the Gaudin Hamiltonians. All
/// defects vanish identically when `t` is a critical point and the scalars
/// are exact.
pub fn verify_bethe<K: Scalar>(
    space: &TensorSpace,
    mp: &MasterProblem<K>,
    t: &[K],
    opts: &VerifyOptions,
) -> Result<BetheReport<K>, BetheError> {
    let omega = omega_weight_function(space, mp, t)?;
    if omega.is_zero_vector() {
        return Err(BetheError::ZeroWeightFunction);
    }
    let scale = omega.sup_norm();
    let mut singular_defect = 0.0f64;
    for i in 0..space.sys().rank() {
        let image = space.apply_e(i, &omega);
        singular_defect = singular_defect.max(image.sup_norm() / scale);
    }
    let norm_sq = space.shapovalov_pair(&omega, &omega);
    let degenerate = if K::EXACT {
        norm_sq.is_zero()
    } else {
        norm_sq.approx_abs() <= opts.degenerate_tol * scale * scale
    };

    let mut eigenvalues = Vec::new();
    let mut eigen_defect = 0.0f64;
    let mut eigen_sum_defect = 0.0f64;
    if !degenerate {
        let mut sum = K::zero();
        for s in 0..space.n_factors() {
            let image = gaudin_apply(space, mp.z(), s, &omega)?;
            let c = space.shapovalov_pair(&image, &omega) / norm_sq.clone();
            let defect = image.sub(&omega.scale(&c)).sup_norm() / scale;
            eigen_defect = eigen_defect.max(defect);
            sum = sum + c.clone();
            eigenvalues.push(c);
        }
        eigen_sum_defect = sum.approx_abs();
    }
    Ok(BetheReport {
        omega,
        norm_sq,
        singular_defect,
        degenerate,
        eigenvalues,
        eigen_defect,
        eigen_sum_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::CartanData;
    use crate::reps::ModuleRealization;
    use crate::scalar::QuadExt;
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use std::sync::Arc;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn sl2_power_space(n: usize) -> TensorSpace {
        let sys = CartanData::type_a(1);
        let v = Arc::new(ModuleRealization::exterior_rep(&sys, 1).unwrap());
        TensorSpace::new(vec![v; n]).unwrap()
    }

    #[test]
    fn block_assignment_counts() {
        assert_eq!(enumerate_p(&[1, 1], 2).len(), 6);
        assert_eq!(enumerate_p(&[2], 2).len(), 3);
        assert_eq!(enumerate_p(&[2, 1], 2).len(), 12);
        assert_eq!(enumerate_p(&[0, 0], 3).len(), 1);
        assert_eq!(enumerate_p(&[1], 1).len(), 1);
        let all = enumerate_p(&[2, 1], 2);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn two_point_weight_function_is_exact() {
        let sys = CartanData::type_a(1);
        let space = sl2_power_space(2);
        let w1 = sys.fundamental(0);
        let mp = MasterProblem::new(
            sys.clone(),
            vec![w1.clone(), w1],
            vec![1],
            vec![int(0), int(1)],
        )
        .unwrap();
        let t = vec![rat(1, 2)];
        assert!(mp.bethe_residual(&t).unwrap().iter().all(|r| r.is_zero()));
        let report = verify_bethe(&space, &mp, &t, &VerifyOptions::default()).unwrap();
        assert_eq!(report.omega.coeff(&[1, 0]), Some(&int(2)));
        assert_eq!(report.omega.coeff(&[0, 1]), Some(&int(-2)));
        assert_eq!(report.norm_sq, int(8));
        assert_eq!(report.singular_defect, 0.0);
        assert!(!report.degenerate);
        // K_1 = -Omega acting on the trivial summand, with Casimir value
        // -3/2 there, so the eigenvalues are (3/2, -3/2).
        assert_eq!(report.eigenvalues, vec![rat(3, 2), rat(-3, 2)]);
        assert_eq!(report.eigen_defect, 0.0);
        assert_eq!(report.eigen_sum_defect, 0.0);
        // The norm matches the Hessian determinant of log Phi.
        assert_eq!(mp.hessian_det(&t).unwrap(), int(8));
    }

    #[test]
    fn cube_roots_of_unity_degenerate_point() {
        // Three points at the cube roots of unity, t = 0: the weight
        // function is a nonzero singular vector of Shapovalov norm zero.
        let sys = CartanData::type_a(1);
        let space = sl2_power_space(3);
        let w1 = sys.fundamental(0);
        let eta = QuadExt::cbrt_unity();
        let one = QuadExt::one();
        let z = vec![one.clone(), eta.clone(), eta.clone() * eta.clone()];
        let mp = MasterProblem::new(sys, vec![w1.clone(), w1.clone(), w1], vec![1], z).unwrap();
        let t = vec![QuadExt::zero()];
        assert!(mp.bethe_residual(&t).unwrap().iter().all(|r| r.is_zero()));
        let report = verify_bethe(&space, &mp, &t, &VerifyOptions::default()).unwrap();
        assert!(!report.omega.is_zero_vector());
        let eta2 = eta.clone() * eta.clone();
        assert_eq!(report.omega.coeff(&[1, 0, 0]), Some(&-one));
        assert_eq!(report.omega.coeff(&[0, 1, 0]), Some(&-eta2));
        assert_eq!(report.omega.coeff(&[0, 0, 1]), Some(&-eta));
        assert!(report.norm_sq.is_zero());
        assert!(report.degenerate);
        assert!(report.eigenvalues.is_empty());
        assert_eq!(report.singular_defect, 0.0);
    }

    #[test]
    fn weight_function_away_from_critical_points_is_not_singular() {
        let sys = CartanData::type_a(1);
        let space = sl2_power_space(2);
        let w1 = sys.fundamental(0);
        let mp = MasterProblem::new(
            sys,
            vec![w1.clone(), w1],
            vec![1],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let t = vec![Complex64::new(0.3, 0.0)];
        let omega = omega_weight_function(&space, &mp, &t).unwrap();
        let defect = space.apply_e(0, &omega).sup_norm() / omega.sup_norm();
        assert!(defect > 0.1, "defect {defect} should be visibly nonzero");
    }

    #[test]
    fn norm_factorizes_through_clusters() {
        // Four sl2 points grouped as {z1}, {z2}, {z3, z4}: the composite
        // vector built from a critical point downstairs and one inside the
        // big cluster has Shapovalov norm 8 * 8 = 64.
        let sys = CartanData::type_a(1);
        let w1 = sys.fundamental(0);
        let space = sl2_power_space(4);

        // Inside the cluster: the standard two point problem at (0, 1).
        let cluster_mp = MasterProblem::new(
            sys.clone(),
            vec![w1.clone(), w1.clone()],
            vec![1],
            vec![int(0), int(1)],
        )
        .unwrap();
        let cluster_space = space.sub_space(2, 2);
        let part3 =
            omega_weight_function(&cluster_space, &cluster_mp, &[rat(1, 2)]).unwrap();

        // Downstairs: the cluster contributes its singular weight, which is
        // zero, so the third downstairs weight is trivial.
        let down_mp = MasterProblem::new(
            sys.clone(),
            vec![w1.clone(), w1.clone(), sys.zero_weight()],
            vec![1],
            vec![int(0), int(1), int(3)],
        )
        .unwrap();
        let u = vec![rat(1, 2)];
        assert!(down_mp.bethe_residual(&u).unwrap().iter().all(|r| r.is_zero()));
        let coeffs = omega_blocks(&down_mp, &u).unwrap();

        let hw1: TensorVector<BigRational> = space.sub_space(0, 1).hw_vector();
        let parts = vec![hw1.clone(), hw1, part3.clone()];
        let w = iterated_singular_vector(&space, &[1, 1, 2], &coeffs, &parts);
        assert!(space.apply_e(0, &w).is_zero_vector());
        assert_eq!(space.shapovalov_pair(&w, &w), int(64));

        // The downstairs norm in V tensor V tensor V_0 is 8, matching the
        // factorization of 64 into the cluster norm times the base norm.
        let trivial = Arc::new(
            ModuleRealization::embed_irreducible(&sys, &sys.zero_weight()).unwrap(),
        );
        let down_space = TensorSpace::new(vec![
            space.factors()[0].clone(),
            space.factors()[1].clone(),
            trivial,
        ])
        .unwrap();
        let down_omega = omega_weight_function(&down_space, &down_mp, &u).unwrap();
        let down_norm = down_space.shapovalov_pair(&down_omega, &down_omega);
        let cluster_norm = cluster_space.shapovalov_pair(&part3, &part3);
        assert_eq!(down_norm, int(8));
        assert_eq!(cluster_norm, int(8));
        assert_eq!(down_norm * cluster_norm, int(64));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let sys = CartanData::type_a(1);
        let w1 = sys.fundamental(0);
        let mp = MasterProblem::new(
            sys.clone(),
            vec![w1.clone(), w1.clone()],
            vec![2],
            vec![int(0), int(1)],
        )
        .unwrap();
        let err = omega_blocks(&mp, &[rat(1, 3), rat(1, 3)]).unwrap_err();
        assert!(matches!(err, BetheError::CoincidentVariables(0, 1)));
        let err = omega_blocks(&mp, &[rat(1, 3), int(1)]).unwrap_err();
        assert!(matches!(err, BetheError::VariableAtPoint(1, 1)));
        let err = omega_blocks(&mp, &[rat(1, 3)]).unwrap_err();
        assert!(matches!(err, BetheError::VariableCount { .. }));
        // A three factor space cannot host a two point problem.
        let wrong = sl2_power_space(3);
        let err = omega_weight_function(&wrong, &mp, &[rat(1, 3), rat(2, 3)]).unwrap_err();
        assert!(matches!(err, BetheError::SpaceMismatch));
    }
}
