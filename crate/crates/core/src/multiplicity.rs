//! Multiplicities of irreducible summands in tensor products, computed two
//! independent ways: exactly, as dimensions of singular weight spaces, and
//! combinatorially through the Pieri rule for fundamental factors.

use crate::lie::{CartanData, Weight};
use crate::reps::{ModuleRealization, RepsError, TensorSpace};
use itertools::Itertools;
use std::collections::HashMap;
use std::sync::Arc;

/// Realizes the irreducible module with the given highest weight, using the
/// subset model directly when the weight is fundamental.
pub fn realize(sys: &CartanData, lambda: &Weight) -> Result<ModuleRealization, RepsError> {
    if let Some(ints) = lambda.to_ints() {
        if ints.iter().all(|&c| c >= 0) && ints.iter().sum::<i64>() == 1 {
            let k = ints.iter().position(|&c| c == 1).unwrap() + 1;
            return ModuleRealization::exterior_rep(sys, k);
        }
    }
    ModuleRealization::embed_irreducible(sys, lambda)
}

/// Builds the tensor product of irreducibles with the given highest weights,
/// sharing the realization of repeated factors.
pub fn tensor_of_irreducibles(
    sys: &CartanData,
    lambdas: &[Weight],
) -> Result<TensorSpace, RepsError> {
    let mut cache: HashMap<Weight, Arc<ModuleRealization>> = HashMap::new();
    let mut factors = Vec::with_capacity(lambdas.len());
    for lam in lambdas {
        let fac = match cache.get(lam) {
            Some(f) => f.clone(),
            None => {
                let f = Arc::new(realize(sys, lam)?);
                cache.insert(lam.clone(), f.clone());
                f
            }
        };
        factors.push(fac);
    }
    TensorSpace::new(factors)
}

/// The multiplicity of the irreducible with highest weight `mu` in the
/// tensor product of the irreducibles with highest weights `lambdas`,
/// as the dimension of the singular subspace of weight `mu`.
pub fn sing_dim(sys: &CartanData, lambdas: &[Weight], mu: &Weight) -> Result<usize, RepsError> {
    let space = tensor_of_irreducibles(sys, lambdas)?;
    Ok(space.singular_subspace(mu).len())
}

/// Pieri rule: the highest weights of the summands of
/// `V_lambda tensor V_{w_p}`, each occurring exactly once. The summands are
/// `lambda` plus a sum of `p` distinct weights of the defining module,
/// filtered for dominance.
pub fn decompose_fundamental(sys: &CartanData, lambda: &Weight, p: usize) -> Vec<Weight> {
    assert!(sys.is_type_a());
    assert!(p >= 1 && p <= sys.rank(), "fundamental index out of range");
    assert!(sys.is_dominant_integral(lambda));
    let r = sys.rank();
    let mut eps = Vec::with_capacity(r + 1);
    let mut cur = sys.fundamental(0);
    eps.push(cur.clone());
    for a in 0..r {
        cur = cur - sys.alpha(a);
        eps.push(cur.clone());
    }
    (0..=r)
        .combinations(p)
        .filter_map(|s| {
            let mu = s.iter().fold(lambda.clone(), |w, &a| w + eps[a].clone());
            sys.is_dominant_integral(&mu).then_some(mu)
        })
        .collect()
}
