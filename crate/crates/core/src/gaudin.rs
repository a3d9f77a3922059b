//! The quadratic Casimir element and the Gaudin Hamiltonians acting on
//! tensor products.
//!
//! The Casimir is written entirely over the rationals: the off-diagonal part
//! pairs the gl elementary matrices E_ab with E_ba (dual with respect to the
//! trace form), and the Cartan part pairs the h_i through the inverse Cartan
//! matrix. No orthonormalization is involved, so exact scalars stay exact.

use crate::reps::{TensorSpace, TensorVector};
use crate::scalar::Scalar;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaudinError {
    #[error("marked points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("expected {expected} marked points, got {got}")]
    PointCountMismatch { expected: usize, got: usize },
}

/// Applies the two-site Casimir `Omega^(s,j)` to a tensor vector.
pub fn casimir_apply<K: Scalar>(
    space: &TensorSpace,
    s: usize,
    j: usize,
    v: &TensorVector<K>,
) -> TensorVector<K> {
    assert_ne!(s, j, "Casimir acts on two distinct factors");
    let sys = space.sys();
    let mut out = TensorVector::new();
    for (a, b, m_s) in space.factor(s).gl_pairs() {
        let m_j = space.factor(j).gl_mat(*b, *a);
        let tmp = space.apply_at(j, m_j, v);
        if tmp.is_empty() {
            continue;
        }
        out = out.add(&space.apply_at(s, m_s, &tmp));
    }
    let r = sys.rank();
    for i in 0..r {
        for k in 0..r {
            let c = sys.inv_cartan(i, k);
            if c.is_zero() {
                continue;
            }
            let tmp = space.apply_at(j, space.factor(j).h_mat(k), v);
            if tmp.is_empty() {
                continue;
            }
            let tmp = space.apply_at(s, space.factor(s).h_mat(i), &tmp);
            out = out.add(&tmp.scale(&K::from_rational(c)));
        }
    }
    out
}

/// Applies the Gaudin Hamiltonian
/// `K_s(z) = sum_{j != s} Omega^(s,j) / (z_s - z_j)`.
pub fn gaudin_apply<K: Scalar>(
    space: &TensorSpace,
    z: &[K],
    s: usize,
    v: &TensorVector<K>,
) -> Result<TensorVector<K>, GaudinError> {
    let n = space.n_factors();
    if z.len() != n {
        return Err(GaudinError::PointCountMismatch {
            expected: n,
            got: z.len(),
        });
    }
    let mut out = TensorVector::new();
    for j in 0..n {
        if j == s {
            continue;
        }
        let denom = z[s].clone() - z[j].clone();
        if denom.is_zero() {
            return Err(GaudinError::CoincidentPoints(s, j));
        }
        let term = casimir_apply(space, s, j, v).scale(&(K::one() / denom));
        out = out.add(&term);
    }
    Ok(out)
}
