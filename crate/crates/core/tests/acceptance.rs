//! Acceptance gate: one test per headline property, each ending in a single
//! printed PASS line with its measured margins. All tolerances are pinned
//! here as constants.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bethevec::bethe::{omega_weight_function, verify_bethe, VerifyOptions};
use bethevec::linalg::lu_det;
use bethevec::multiplicity::{sing_dim, tensor_of_irreducibles};
use bethevec::schubert::{weights_to_ramification, Poly, PolynomialPlane};
use bethevec::solver::{newton_refine, solve_all, two_point_seed, SolverOptions};
use bethevec::{CartanData, MasterProblem, QuadExt, TensorSpace, TensorVector, Weight};

/// Float-mode agreement of the norm and the Hessian in the smallest example.
const SMALL_IDENTITY_TOL: f64 = 1e-12;
/// Norm/Hessian ratio across all orbits of the four-point rank-two family.
const SCALE_IDENTITY_TOL: f64 = 1e-8;
/// Eigenvector defect ||K_s w - c_s w|| / ||w||.
const EIGEN_TOL: f64 = 1e-9;
/// Singular-vector defect ||E_i w|| / ||w||.
const SINGULAR_TOL: f64 = 1e-10;
/// Defect of sum_s c_s = 0.
const EIGEN_SUM_TOL: f64 = 1e-10;
/// Relative drift of the scaled cluster limits between eps = 1e-2 and 1e-3.
const CLUSTER_DRIFT_TOL: f64 = 1e-3;
/// Lower bound for |det Gram| relative to the product of diagonal entries.
const GRAM_DET_TOL: f64 = 1e-8;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn fundamentals(sys: &CartanData, pattern: &[usize]) -> Vec<Weight> {
    pattern.iter().map(|&k| sys.fundamental(k)).collect()
}

fn space_for(sys: &CartanData, weights: &[Weight]) -> TensorSpace {
    tensor_of_irreducibles(sys, weights).expect("tensor space fits the realization cap")
}

fn total_weight(sys: &CartanData, weights: &[Weight]) -> Weight {
    weights
        .iter()
        .fold(sys.zero_weight(), |acc, w| acc + w.clone())
}

struct Problem {
    rank: usize,
    pattern: Vec<usize>,
    l: Vec<usize>,
}

/// The orbit-counting families: rank-one chains of w_1 up to six points and
/// rank-two mixes of w_1 and w_2 up to four points, over every color count
/// with a dominant target weight.
fn counting_problems() -> Vec<Problem> {
    let mut out = Vec::new();
    for n in 2..=6usize {
        for l in 0..=n / 2 {
            out.push(Problem {
                rank: 1,
                pattern: vec![0; n],
                l: vec![l],
            });
        }
    }
    let sys = CartanData::type_a(2);
    let mut patterns: Vec<Vec<usize>> = Vec::new();
    for n in 2..=4usize {
        for ones in 0..=n {
            let mut p = vec![0usize; ones];
            p.resize(n, 1);
            patterns.push(p);
        }
    }
    patterns.push(vec![0, 1, 0]);
    for pattern in patterns {
        let weights = fundamentals(&sys, &pattern);
        let total = total_weight(&sys, &weights);
        for l1 in 0..=2usize {
            for l2 in 0..=2usize {
                let mu = total.clone() - sys.alpha_of(&[l1, l2]);
                if sys.is_dominant_integral(&mu) {
                    out.push(Problem {
                        rank: 2,
                        pattern: pattern.clone(),
                        l: vec![l1, l2],
                    });
                }
            }
        }
    }
    out
}

#[test]
fn criterion_1_norm_equals_hessian_in_the_smallest_example() {
    let start = Instant::now();
    let sys = CartanData::type_a(1);
    let w1 = sys.fundamental(0);
    let weights = vec![w1.clone(), w1.clone()];

    // Rational mode: the critical point t = 1/2 gives both sides exactly 8.
    let mp = MasterProblem::new(
        sys.clone(),
        weights.clone(),
        vec![1],
        vec![BigRational::zero(), BigRational::one()],
    )
    .unwrap();
    let t = vec![rat(1, 2)];
    for r in mp.bethe_residual(&t).unwrap() {
        assert!(r.is_zero(), "t = 1/2 must be an exact critical point");
    }
    let hess = mp.hessian_det(&t).unwrap();
    let space = space_for(&sys, &weights);
    let omega = omega_weight_function(&space, &mp, &t).unwrap();
    let norm = space.shapovalov_pair(&omega, &omega);
    let eight = BigRational::from_integer(8.into());
    assert_eq!(hess, eight);
    assert_eq!(norm, eight);

    // Float mode: the same point, compared as a ratio.
    let mpf = MasterProblem::new(
        sys.clone(),
        weights,
        vec![1],
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    )
    .unwrap();
    let tf = vec![Complex64::new(0.5, 0.0)];
    let hess_f = mpf.hessian_det(&tf).unwrap();
    let omega_f = omega_weight_function(&space, &mpf, &tf).unwrap();
    let norm_f = space.shapovalov_pair(&omega_f, &omega_f);
    let ratio_gap = (norm_f / hess_f - Complex64::new(1.0, 0.0)).norm();
    assert!(ratio_gap < SMALL_IDENTITY_TOL);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 1 PASS: S = Hess = 8 exactly, float ratio gap {ratio_gap:.2e}, {elapsed:?}"
    );
}

#[test]
fn criterion_2_norm_hessian_ratio_across_the_four_point_family() {
    let start = Instant::now();
    let sys = CartanData::type_a(2);
    let weights = fundamentals(&sys, &[0, 0, 0, 0]);
    let total = total_weight(&sys, &weights);

    // Enumerate the color counts with a dominant target weight and pin the
    // expected four.
    let mut dominant = Vec::new();
    for l1 in 0..=4usize {
        for l2 in 0..=4usize {
            if sys.is_dominant_integral(&(total.clone() - sys.alpha_of(&[l1, l2]))) {
                dominant.push([l1, l2]);
            }
        }
    }
    assert_eq!(dominant, vec![[0, 0], [1, 0], [2, 0], [2, 1]]);

    let space = space_for(&sys, &weights);
    let opts = SolverOptions {
        seed: 11,
        ..SolverOptions::default()
    };
    let mut worst = 0.0f64;
    let mut orbit_total = 0;
    for l in &dominant {
        let res = solve_all(&sys, &weights, l, None, &opts).unwrap();
        let mp = MasterProblem::new(sys.clone(), weights.clone(), l.to_vec(), res.z.clone())
            .unwrap();
        for orbit in &res.orbits {
            let omega = omega_weight_function(&space, &mp, &orbit.t).unwrap();
            let norm = space.shapovalov_pair(&omega, &omega);
            let gap = (norm / orbit.hessian_det - Complex64::new(1.0, 0.0)).norm();
            worst = worst.max(gap);
            orbit_total += 1;
        }
    }
    assert!(worst < SCALE_IDENTITY_TOL, "worst ratio gap {worst:.2e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 2 PASS: {orbit_total} orbits, worst |S/Hess - 1| = {worst:.2e}, {elapsed:?}"
    );
}

#[test]
fn criterion_3_orbit_counts_equal_singular_multiplicities() {
    let mut problems = 0;
    let mut solves = 0;
    for p in counting_problems() {
        let sys = CartanData::type_a(p.rank);
        let weights = fundamentals(&sys, &p.pattern);
        let mu = total_weight(&sys, &weights) - sys.alpha_of(&p.l);
        let expected = sing_dim(&sys, &weights, &mu).unwrap();
        for seed in 0..5u64 {
            let opts = SolverOptions {
                seed,
                ..SolverOptions::default()
            };
            let res = solve_all(&sys, &weights, &p.l, None, &opts).unwrap();
            assert_eq!(
                res.orbits.len(),
                expected,
                "rank {} pattern {:?} l {:?} seed {seed}",
                p.rank,
                p.pattern,
                p.l
            );
            solves += 1;
        }
        problems += 1;
    }
    println!(
        "criterion 3 PASS: {problems} problems x 5 seeds ({solves} solves), all counts exact"
    );
}

#[test]
fn criterion_4_bethe_vectors_are_singular_eigenvectors() {
    let opts = SolverOptions::default();
    let verify = VerifyOptions::default();
    let mut worst_eigen = 0.0f64;
    let mut worst_singular = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut orbit_total = 0;
    for p in counting_problems() {
        let sys = CartanData::type_a(p.rank);
        let weights = fundamentals(&sys, &p.pattern);
        let res = solve_all(&sys, &weights, &p.l, None, &opts).unwrap();
        if res.orbits.is_empty() {
            continue;
        }
        let space = space_for(&sys, &weights);
        let mp = MasterProblem::new(sys.clone(), weights.clone(), p.l.clone(), res.z.clone())
            .unwrap();
        for orbit in &res.orbits {
            let report = verify_bethe(&space, &mp, &orbit.t, &verify).unwrap();
            assert!(!report.degenerate, "unexpected degenerate orbit");
            worst_eigen = worst_eigen.max(report.eigen_defect);
            worst_singular = worst_singular.max(report.singular_defect);
            worst_sum = worst_sum.max(report.eigen_sum_defect);
            orbit_total += 1;
        }
    }
    assert!(worst_eigen < EIGEN_TOL, "eigen defect {worst_eigen:.2e}");
    assert!(
        worst_singular < SINGULAR_TOL,
        "singular defect {worst_singular:.2e}"
    );
    assert!(worst_sum < EIGEN_SUM_TOL, "eigenvalue sum {worst_sum:.2e}");
    println!(
        "criterion 4 PASS: {orbit_total} orbits, defects eigen {worst_eigen:.2e} / singular {worst_singular:.2e} / sum {worst_sum:.2e}"
    );
}

#[test]
fn criterion_5_closed_form_seeds_have_exactly_zero_residuals() {
    let mut checked = 0;
    for rank in 1..=4usize {
        let sys = CartanData::type_a(rank);
        let mut shapes: Vec<(usize, Vec<usize>)> = Vec::new();
        for m in 1..=rank {
            let mut l0 = vec![1usize; m];
            l0.resize(rank, 0);
            shapes.push((1, l0));
        }
        if rank > 1 {
            for m in 1..=rank {
                let mut l0 = vec![0usize; rank - m];
                l0.resize(rank, 1);
                shapes.push((rank, l0));
            }
        }
        if rank == 3 {
            for l0 in [[0, 1, 0], [1, 1, 0], [0, 1, 1], [1, 1, 1], [1, 2, 1]] {
                shapes.push((2, l0.to_vec()));
            }
        }

        let mut coeffs = vec![0i64; rank];
        loop {
            let lambda = Weight::from_ints(&coeffs);
            for (p, l0) in &shapes {
                let Some(seed) = two_point_seed(&sys, &lambda, *p, l0) else {
                    continue;
                };
                let weights = vec![lambda.clone(), sys.fundamental(p - 1)];
                let mp = MasterProblem::new(
                    sys.clone(),
                    weights,
                    l0.clone(),
                    vec![QuadExt::zero(), QuadExt::one()],
                )
                .unwrap();
                for r in mp.bethe_residual(&seed).unwrap() {
                    assert!(
                        r.is_zero(),
                        "nonzero residual for lambda {coeffs:?}, p = {p}, l0 = {l0:?}"
                    );
                }
                checked += 1;
            }
            // Advance the odometer over all coefficient vectors with entries <= 3.
            let mut k = 0;
            while k < rank && coeffs[k] == 3 {
                coeffs[k] = 0;
                k += 1;
            }
            if k == rank {
                break;
            }
            coeffs[k] += 1;
        }
    }
    assert!(checked > 500, "only {checked} admissible seed cases");
    println!("criterion 5 PASS: {checked} seeds, every residual exactly zero");
}

#[test]
fn criterion_6_cube_root_configuration_degenerates_exactly() {
    let sys = CartanData::type_a(1);
    let w1 = sys.fundamental(0);
    let eta = QuadExt::cbrt_unity();
    let eta2 = eta.clone() * eta.clone();
    let z = vec![QuadExt::one(), eta.clone(), eta2.clone()];
    let mp = MasterProblem::new(sys.clone(), vec![w1.clone(); 3], vec![1], z).unwrap();
    let t = vec![QuadExt::zero()];
    for r in mp.bethe_residual(&t).unwrap() {
        assert!(r.is_zero(), "t = 0 must be an exact critical point");
    }
    assert_eq!(mp.hessian_det(&t).unwrap(), QuadExt::zero());

    let space = space_for(&sys, &[w1.clone(), w1.clone(), w1]);
    let report = verify_bethe(&space, &mp, &t, &VerifyOptions::default()).unwrap();
    assert!(!report.omega.is_zero_vector());
    assert_eq!(report.norm_sq, QuadExt::zero());
    assert!(report.degenerate);
    assert_eq!(report.singular_defect, 0.0);

    // The vector is -F^(1) - eta^2 F^(2) - eta F^(3) on the highest weight.
    let lowered = space.apply_f(0, &space.hw_vector::<QuadExt>());
    let hw = space.hw_multi_index();
    let minus = |q: QuadExt| QuadExt::zero() - q;
    for (idx, _) in lowered.iter() {
        let slot = (0..3)
            .find(|&s| idx[s] != hw[s])
            .expect("lowered in exactly one factor");
        let expected = match slot {
            0 => minus(QuadExt::one()),
            1 => minus(eta2.clone()),
            _ => minus(eta.clone()),
        };
        assert_eq!(report.omega.coeff(idx), Some(&expected));
    }
    println!(
        "criterion 6 PASS: omega nonzero, S(omega, omega) = 0 and Hess = 0 exactly, flagged degenerate"
    );
}

#[test]
fn criterion_7_two_plus_one_clustering_reaches_its_limits() {
    let sys = CartanData::type_a(1);
    let w1 = sys.fundamental(0);
    let weights = vec![w1.clone(), w1.clone(), w1];
    let space = space_for(&sys, &weights);
    let opts = SolverOptions::default();

    // Points 1 and 2 collapse onto 0 at relative positions +/- 1/16 while
    // point 3 stays at 1; the single variable follows the cluster.
    let y = [1.0 / 16.0, -1.0 / 16.0];
    let gap = y[0] - y[1];
    let mut scaled_hess = Vec::new();
    let mut scaled_omega = Vec::new();
    let mut scaled_eigen = Vec::new();
    for eps in [1e-2, 1e-3] {
        let z = vec![
            Complex64::new(eps * y[0], 0.0),
            Complex64::new(eps * y[1], 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let mp = MasterProblem::new(sys.clone(), weights.clone(), vec![1], z.clone()).unwrap();
        let t = newton_refine(&mp, vec![Complex64::new(0.0, 0.0)], &opts).unwrap();
        let e2 = Complex64::new(eps * eps, 0.0);
        scaled_hess.push(mp.hessian_det(&t).unwrap() * e2);
        let omega = omega_weight_function(&space, &mp, &t).unwrap();
        scaled_omega.push(omega.scale(&Complex64::new(eps, 0.0)));
        let report = verify_bethe(&space, &mp, &t, &VerifyOptions::default()).unwrap();
        let c = &report.eigenvalues;
        scaled_eigen.push([c[0] * eps, c[1] * eps, c[2]]);
    }

    // Hessian: eps^2 Hess -> product over the two sub-problems, 8 / gap^2.
    let hess_limit = 8.0 / (gap * gap);
    let hess_drift = (scaled_hess[0] - scaled_hess[1]).norm() / scaled_hess[1].norm();
    let hess_gap = (scaled_hess[1] - hess_limit).norm() / hess_limit;
    assert!(hess_drift < CLUSTER_DRIFT_TOL, "Hessian drift {hess_drift:.2e}");
    assert!(hess_gap < CLUSTER_DRIFT_TOL, "Hessian limit gap {hess_gap:.2e}");

    // Vector: eps omega -> the iterated singular vector of the cluster, the
    // two-point weight function in slots 1-2 and nothing in slot 3.
    let hw = space.hw_multi_index();
    let lowered = space.apply_f(0, &space.hw_vector::<Complex64>());
    let mut limit = TensorVector::<Complex64>::new();
    for (idx, _) in lowered.iter() {
        let slot = (0..3).find(|&s| idx[s] != hw[s]).unwrap();
        let u_minus_y = match slot {
            0 => -y[0],
            1 => -y[1],
            _ => continue,
        };
        limit.add_term(idx.clone(), Complex64::new(1.0 / u_minus_y, 0.0));
    }
    let omega_scale = scaled_omega[1].sup_norm();
    let omega_drift = scaled_omega[0].sub(&scaled_omega[1]).sup_norm() / omega_scale;
    let omega_gap = scaled_omega[1].sub(&limit).sup_norm() / limit.sup_norm();
    assert!(omega_drift < CLUSTER_DRIFT_TOL, "vector drift {omega_drift:.2e}");
    assert!(omega_gap < CLUSTER_DRIFT_TOL, "vector limit gap {omega_gap:.2e}");

    // Eigenvalues: eps c_{1,2} -> -/+ (3/2) / gap from the cluster pair,
    // c_3 -> 0 from the coarse problem with a trivial cluster factor.
    let eig_limits = [-1.5 / gap, 1.5 / gap, 0.0];
    let eig_scale = 1.5 / gap;
    let mut eig_drift = 0.0f64;
    let mut eig_gap = 0.0f64;
    for k in 0..3 {
        eig_drift = eig_drift.max((scaled_eigen[0][k] - scaled_eigen[1][k]).norm() / eig_scale);
        eig_gap = eig_gap.max((scaled_eigen[1][k] - eig_limits[k]).norm() / eig_scale);
    }
    assert!(eig_drift < CLUSTER_DRIFT_TOL, "eigenvalue drift {eig_drift:.2e}");
    assert!(eig_gap < CLUSTER_DRIFT_TOL, "eigenvalue limit gap {eig_gap:.2e}");

    println!(
        "criterion 7 PASS: drifts hess {hess_drift:.2e} / vector {omega_drift:.2e} / eigen {eig_drift:.2e}, limits to {CLUSTER_DRIFT_TOL:.0e}"
    );
}

#[test]
fn criterion_8_plucker_identity_and_weight_dictionary() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut checked = 0;
    while checked < 50 {
        let r = rng.gen_range(1..=3usize);
        let d = rng.gen_range(r + 1..=8usize);
        let basis: Vec<Poly> = (0..=r)
            .map(|_| {
                Poly::from_coeffs(
                    (0..=d)
                        .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                        .collect(),
                )
            })
            .collect();
        let Ok(plane) = PolynomialPlane::new(basis, d) else {
            continue;
        };
        assert!(
            plane.plucker_holds().unwrap(),
            "Pluecker identity failed for r = {r}, d = {d}"
        );
        checked += 1;
    }

    // The dictionary's fundamental sequences, printed for the record.
    let mut printed = Vec::new();
    for rank in 1..=3usize {
        let sys = CartanData::type_a(rank);
        let w1 = sys.fundamental(0);
        let wr = sys.fundamental(rank - 1);
        let d = 2 * rank + 2;
        for (name, w) in [("w_1", &w1), ("w_r", &wr)] {
            let data = weights_to_ramification(&sys, &[w.clone()], w, d).unwrap();
            let mut expected = vec![0usize; rank + 1];
            if name == "w_1" {
                expected[..rank].fill(1);
            } else {
                expected[0] = 1;
            }
            assert_eq!(data.at_points[0], expected);
            printed.push(format!("sl{} a({name}) = {:?}", rank + 1, data.at_points[0]));
        }
    }
    println!(
        "criterion 8 PASS: 50 random rational planes exact; {}",
        printed.join(", ")
    );
}

#[test]
fn criterion_9_bethe_gram_determinants_stay_away_from_zero() {
    let opts = SolverOptions::default();
    let mut min_ratio = f64::INFINITY;
    let mut largest = 0;
    for p in counting_problems() {
        let sys = CartanData::type_a(p.rank);
        let weights = fundamentals(&sys, &p.pattern);
        let res = solve_all(&sys, &weights, &p.l, None, &opts).unwrap();
        let m = res.orbits.len();
        if m == 0 {
            continue;
        }
        let space = space_for(&sys, &weights);
        let mp = MasterProblem::new(sys.clone(), weights.clone(), p.l.clone(), res.z.clone())
            .unwrap();
        let vectors: Vec<TensorVector<Complex64>> = res
            .orbits
            .iter()
            .map(|orbit| {
                let omega = omega_weight_function(&space, &mp, &orbit.t).unwrap();
                let sup = omega.sup_norm();
                omega.scale(&Complex64::new(1.0 / sup, 0.0))
            })
            .collect();
        let gram: Vec<Vec<Complex64>> = vectors
            .iter()
            .map(|u| vectors.iter().map(|v| space.shapovalov_pair(u, v)).collect())
            .collect();
        let mut diag_product = 1.0f64;
        for (k, row) in gram.iter().enumerate() {
            diag_product *= row[k].norm();
        }
        let det = lu_det(gram);
        let ratio = det.norm() / diag_product;
        assert!(
            ratio > GRAM_DET_TOL,
            "rank {} pattern {:?} l {:?}: |det| ratio {ratio:.2e}",
            p.rank,
            p.pattern,
            p.l
        );
        min_ratio = min_ratio.min(ratio);
        largest = largest.max(m);
    }
    println!(
        "criterion 9 PASS: min |det Gram| / prod diag = {min_ratio:.2e} (up to {largest}x{largest})"
    );
}
