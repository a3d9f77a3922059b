//! Critical points of Gaudin master functions for sl(r+1), the Bethe vectors
//! attached to them, and the identity between the Shapovalov norm of a Bethe
//! vector and the Hessian determinant of the logarithm of the master function.
//!
//! The crate is organized in layers:
//!
//! * [`lie`] - Cartan data, weights, and invariant pairings for type A (and
//!   general symmetrizable Cartan matrices where the master function needs them).
//! * [`linalg`] - exact rational linear algebra (fraction-free elimination) and
//!   small dense solvers generic over the scalar type.
//! * [`scalar`] - the scalar abstraction shared by the exact and floating-point
//!   evaluation paths, including a small quadratic extension field.
//! * [`reps`] - explicit realizations of irreducible representations, tensor
//!   products with factor-local operator actions, Shapovalov forms, singular
//!   vectors.
//! * [`master`] - the master function, its logarithmic gradient (Bethe
//!   equations) and Hessian.
//! * [`bethe`] - the universal weight function producing Bethe vectors, and the
//!   verification of their eigenvector and norm properties.
//! * [`gaudin`] - Casimir element and Gaudin Hamiltonians acting matrix-free on
//!   tensor products, with cluster-asymptotics checks.
//! * [`multiplicity`] - singular-weight-space dimensions and tensor product
//!   decompositions with fundamental factors.
//! * [`solver`] - closed-form seed critical points, Newton refinement, cluster
//!   continuation in a scaling parameter, and the recursive enumeration of all
//!   critical-point orbits.
//! * [`schubert`] - spaces of polynomials, Wronskians, ramification data, and
//!   the correspondence between weight data and Schubert intersection
//!   conditions.

pub mod bethe;
pub mod gaudin;
pub mod lie;
pub mod linalg;
pub mod master;
pub mod multiplicity;
pub mod reps;
pub mod scalar;
pub mod schubert;
pub mod solver;

pub use lie::{CartanData, Weight};
pub use master::{CriticalPoint, MasterProblem};
pub use reps::{ModuleRealization, TensorSpace, TensorVector};
pub use scalar::{QuadExt, Scalar};
