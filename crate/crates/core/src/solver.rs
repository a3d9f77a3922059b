//! Finds all critical point orbits of a master function.
//!
//! The strategy is induction on the number of marked points. A two point
//! problem whose second weight is a fundamental weight has at most one orbit,
//! and that orbit is given by closed form rational (or real quadratic)
//! expressions; see [`two_point_seed`]. A problem with more points is solved
//! by degenerating its first `n - 1` points into a cluster: in the limit the
//! critical point splits into a critical point of the cluster problem and a
//! critical point of a two point problem, one pair for every way `l` can be
//! divided between the two levels. Each pair is assembled at a small cluster
//! scale `eps` and continued numerically to `eps = 1`, where the
//! configuration is an affine image of the requested one.
//!
//! Orbit representatives are deduplicated and, when the dimension of the
//! relevant singular weight space is small enough to compute, counted
//! against it.

use std::cmp::Ordering;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lie::{CartanData, Weight};
use crate::linalg::lu_solve;
use crate::master::{CriticalPoint, MasterError, MasterProblem};
use crate::multiplicity;
use crate::reps::RepsError;
use crate::scalar::{QuadExt, Scalar};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Master(#[from] MasterError),
    #[error(transparent)]
    Reps(#[from] RepsError),
    #[error("weight {0} is not dominant integral")]
    NotDominant(usize),
    #[error("no factor can be peeled; each step needs a w_1 or w_r factor, or w_2 in rank 3")]
    NoPeelableFactor,
    #[error("Newton iteration stalled at residual {residual:.3e}")]
    NewtonStalled { residual: f64 },
    #[error("singular Jacobian along the continuation path")]
    SingularJacobian,
    #[error("continuation step jumped between solution branches")]
    PathJump,
    #[error("could not sample {0} separated points in the unit disk")]
    Sampling(usize),
    #[error("found {found} orbit(s) but the singular weight space has dimension {expected}")]
    OrbitCount { found: usize, expected: usize },
    #[error("solving failed for the supplied marked points: {0}")]
    FixedPoints(Box<SolverError>),
    #[error("solving failed after {attempts} attempt(s): {last}")]
    Exhausted {
        attempts: usize,
        last: Box<SolverError>,
    },
}

impl SolverError {
    /// Failures that a fresh choice of marked points can plausibly cure.
    fn is_recoverable(&self) -> bool {
        matches!(
            self,
            SolverError::Master(_)
                | SolverError::NewtonStalled { .. }
                | SolverError::SingularJacobian
                | SolverError::PathJump
                | SolverError::OrbitCount { .. }
        )
    }
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Sup norm of the residual accepted as converged.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Cluster scale at which continuation starts.
    pub eps0: f64,
    /// Geometric steps from `eps0` to 1.
    pub continuation_steps: usize,
    /// Height (radians) of the arc the continuation parameter takes through
    /// the complex plane. Branch points of the path have real codimension
    /// two there, so a bowed arc generically avoids the collisions a real
    /// segment can graze.
    pub arc_phase: f64,
    /// Distance under which two canonical points are the same orbit.
    pub orbit_tol: f64,
    /// How many times `solve_all` may resample the marked points.
    pub max_attempts: usize,
    /// Seed for sampling marked points.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            newton_tol: 1e-12,
            newton_max_iter: 100,
            eps0: 1e-3,
            continuation_steps: 40,
            arc_phase: 0.35,
            orbit_tol: 1e-8,
            max_attempts: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// The marked points actually used (relevant when they were sampled).
    pub z: Vec<Complex64>,
    /// One representative per orbit, sorted by canonical coordinates.
    pub orbits: Vec<CriticalPoint<Complex64>>,
    /// Dimension of the singular weight space, when small enough to compute.
    pub expected: Option<usize>,
    pub attempts: usize,
}

/// Finds every critical point orbit of the master function for `weights` and
/// `l`. With `z = None` the marked points are sampled from the unit disk and
/// resampled if a continuation path fails; supplied points are never changed,
/// a failure is then reported as [`SolverError::FixedPoints`].
pub fn solve_all(
    sys: &CartanData,
    weights: &[Weight],
    l: &[usize],
    z: Option<&[Complex64]>,
    opts: &SolverOptions,
) -> Result<SolveResult, SolverError> {
    for (s, w) in weights.iter().enumerate() {
        if !sys.is_dominant_integral(w) {
            return Err(SolverError::NotDominant(s));
        }
    }
    if l.len() != sys.rank() {
        return Err(MasterError::BadColorCount {
            got: l.len(),
            rank: sys.rank(),
        }
        .into());
    }

    let target = weights
        .iter()
        .fold(sys.zero_weight(), |acc, w| acc + w.clone())
        - sys.alpha_of(l);
    let expected = match multiplicity::sing_dim(sys, weights, &target) {
        Ok(d) => Some(d),
        Err(RepsError::TooLarge(..)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let attempts_allowed = if z.is_some() {
        1
    } else {
        opts.max_attempts.max(1)
    };
    let mut last: Option<SolverError> = None;
    for attempt in 1..=attempts_allowed {
        let zv = match z {
            Some(z) => z.to_vec(),
            None => sample_z(weights.len(), &mut rng)?,
        };
        match attempt_solve(sys, weights, l, &zv, expected, opts) {
            Ok(orbits) => {
                return Ok(SolveResult {
                    z: zv,
                    orbits,
                    expected,
                    attempts: attempt,
                })
            }
            Err(e) if e.is_recoverable() && z.is_none() => last = Some(e),
            Err(e) if e.is_recoverable() => {
                return Err(SolverError::FixedPoints(Box::new(e)));
            }
            Err(e) => return Err(e),
        }
    }
    Err(SolverError::Exhausted {
        attempts: attempts_allowed,
        last: Box::new(last.expect("loop ran at least once")),
    })
}

fn attempt_solve(
    sys: &CartanData,
    weights: &[Weight],
    l: &[usize],
    z: &[Complex64],
    expected: Option<usize>,
    opts: &SolverOptions,
) -> Result<Vec<CriticalPoint<Complex64>>, SolverError> {
    let mp = MasterProblem::new(sys.clone(), weights.to_vec(), l.to_vec(), z.to_vec())?;
    let raw = solve_rec(sys, weights, l, z, opts)?;
    let mut reps: Vec<Vec<Complex64>> = Vec::new();
    for t in raw {
        let t = newton_refine(&mp, t, opts)?;
        if !reps.iter().any(|o| mp.same_orbit(o, &t, opts.orbit_tol)) {
            reps.push(t);
        }
    }
    if let Some(expected) = expected {
        if reps.len() != expected {
            return Err(SolverError::OrbitCount {
                found: reps.len(),
                expected,
            });
        }
    }
    reps.sort_by(|a, b| cmp_points(&mp.canonicalize(a), &mp.canonicalize(b)));
    reps.into_iter()
        .map(|t| mp.critical_point(t).map_err(Into::into))
        .collect()
}

fn cmp_points(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn sample_z(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>, SolverError> {
    const SEPARATION: f64 = 0.3;
    'outer: for _ in 0..200 {
        let mut pts = Vec::with_capacity(n);
        for _ in 0..n {
            let radius = rng.gen::<f64>().sqrt();
            let angle = rng.gen::<f64>() * std::f64::consts::TAU;
            pts.push(Complex64::from_polar(radius, angle));
        }
        for i in 0..n {
            for j in i + 1..n {
                if (pts[i] - pts[j]).norm() < SEPARATION {
                    continue 'outer;
                }
            }
        }
        return Ok(pts);
    }
    Err(SolverError::Sampling(n))
}

/// All critical points (not yet deduplicated) in the frame of `z`.
fn solve_rec(
    sys: &CartanData,
    weights: &[Weight],
    l: &[usize],
    z: &[Complex64],
    opts: &SolverOptions,
) -> Result<Vec<Vec<Complex64>>, SolverError> {
    let n = weights.len();
    let l_total: usize = l.iter().sum();
    if l_total == 0 {
        return Ok(vec![vec![]]);
    }
    if n <= 1 {
        // A single irreducible module has no singular vectors below its
        // highest weight.
        return Ok(Vec::new());
    }
    if n == 2 {
        return Ok(solve_two_points(sys, weights, l, z)?.into_iter().collect());
    }

    let (weights, z, peel_p) = arrange_peel(sys, weights, z)?;
    let zeta1 = z[0];
    let scale = z[n - 1] - zeta1;
    let y1: Vec<Complex64> = z[..n - 1].iter().map(|&zs| (zs - zeta1) / scale).collect();
    let total = weights
        .iter()
        .fold(sys.zero_weight(), |acc, w| acc + w.clone());
    let w_peel = sys.fundamental(peel_p - 1);

    let mut found = Vec::new();
    for l0 in delta_candidates(sys.rank(), peel_p) {
        if l0.iter().zip(l).any(|(&a, &b)| a > b) {
            continue;
        }
        let l1: Vec<usize> = l.iter().zip(&l0).map(|(&a, &b)| a - b).collect();
        // Weight of the cluster's singular vector, by conservation.
        let mu = total.clone() - w_peel.clone() - sys.alpha_of(l) + sys.alpha_of(&l0);
        if !sys.is_dominant_integral(&mu) {
            continue;
        }
        let seed = match two_point_seed(sys, &mu, peel_p, &l0) {
            Some(seed) => seed,
            None => continue,
        };
        let u0: Vec<Complex64> = seed.iter().map(Scalar::to_c64).collect();
        let upstairs = solve_rec(sys, &weights[..n - 1], &l1, &y1, opts)?;
        for u1 in upstairs {
            let t_norm = track_path(sys, &weights, l, &l0, &l1, &u0, &u1, &y1, opts)?;
            found.push(t_norm.iter().map(|&x| zeta1 + scale * x).collect());
        }
    }
    Ok(found)
}

/// Continues the clustered configuration from `eps0` to `eps = 1`, where the
/// marked points are `(y1, 1)`. Returns the critical point in that frame.
#[allow(clippy::too_many_arguments)]
fn track_path(
    sys: &CartanData,
    weights: &[Weight],
    l: &[usize],
    l0: &[usize],
    l1: &[usize],
    u0: &[Complex64],
    u1: &[Complex64],
    y1: &[Complex64],
    opts: &SolverOptions,
) -> Result<Vec<Complex64>, SolverError> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let spec = ClusterSpec {
        centers: vec![zero, one],
        internal_z: vec![y1.to_vec(), vec![zero]],
        internal_t: vec![u1.to_vec(), Vec::new()],
        internal_l: vec![l1.to_vec(), vec![0; sys.rank()]],
        base_t: u0.to_vec(),
        base_l: l0.to_vec(),
    };
    // The continuation parameter follows an arc bowed into the complex
    // plane: collisions between solution branches sit at isolated complex
    // parameter values, so the arc misses what a real segment can graze.
    // Both endpoints stay real.
    let steps = opts.continuation_steps.max(1);
    let eps_at = |k: usize| -> Complex64 {
        let modulus = opts.eps0.powf((steps - k) as f64 / steps as f64);
        let phase = opts.arc_phase * (std::f64::consts::PI * k as f64 / steps as f64).sin();
        Complex64::from_polar(modulus, phase)
    };

    let start = eps_at(0);
    let mp = MasterProblem::new(sys.clone(), weights.to_vec(), l.to_vec(), spec.z_at(start))?;
    let mut t = newton_refine(&mp, spec.t_at(start), opts)?;
    let mut eps_prev = start;
    for k in 1..=steps {
        let eps = eps_at(k);
        t = advance(sys, weights, l, &spec, opts, t, eps_prev, eps, 0)?;
        eps_prev = eps;
    }
    Ok(t)
}

/// One continuation step from `from` to `to`, bisected (geometrically) when
/// Newton falls out of the convergence basin or lands suspiciously far away,
/// which happens when a marked point sweeps close past a variable or two
/// solution branches come near each other.
#[allow(clippy::too_many_arguments)]
fn advance(
    sys: &CartanData,
    weights: &[Weight],
    l: &[usize],
    spec: &ClusterSpec,
    opts: &SolverOptions,
    t: Vec<Complex64>,
    from: Complex64,
    to: Complex64,
    depth: usize,
) -> Result<Vec<Complex64>, SolverError> {
    let step = || -> Result<Vec<Complex64>, SolverError> {
        let z = spec.z_at(to);
        let mp = MasterProblem::new(sys.clone(), weights.to_vec(), l.to_vec(), z.clone())?;
        let moved = newton_refine(&mp, t.clone(), opts)?;
        let motion = t
            .iter()
            .zip(&moved)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if motion > 0.5 * clearance(&t, &z) {
            return Err(SolverError::PathJump);
        }
        Ok(moved)
    };
    match step() {
        Ok(moved) => Ok(moved),
        Err(e @ (SolverError::Master(_) | SolverError::Reps(_))) => Err(e),
        Err(e) => {
            if depth >= 9 {
                return Err(e);
            }
            let mid = (from * to).sqrt();
            let t = advance(sys, weights, l, spec, opts, t, from, mid, depth + 1)?;
            advance(sys, weights, l, spec, opts, t, mid, to, depth + 1)
        }
    }
}

/// Smallest distance between two variables or between a variable and a
/// marked point; the scale on which a continuation step may credibly move.
fn clearance(t: &[Complex64], z: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..t.len() {
        for other in &t[i + 1..] {
            best = best.min((t[i] - other).norm());
        }
        for zs in z {
            best = best.min((t[i] - zs).norm());
        }
    }
    best
}

/// A configuration of marked points gathered into clusters, together with a
/// critical point split into a base part and per-cluster internal parts.
/// At scale `eps` cluster `p` occupies `centers[p] + eps * internal_z[p]` and
/// carries the `t` variables `centers[p] + eps * internal_t[p]`; the base
/// variables `base_t` stay fixed. Variables are color-blocked throughout,
/// with `base_l` and `internal_l` giving the block sizes.
#[derive(Clone, Debug)]
pub struct ClusterSpec {
    pub centers: Vec<Complex64>,
    pub internal_z: Vec<Vec<Complex64>>,
    pub internal_t: Vec<Vec<Complex64>>,
    pub internal_l: Vec<Vec<usize>>,
    pub base_t: Vec<Complex64>,
    pub base_l: Vec<usize>,
}

impl ClusterSpec {
    pub fn n_points(&self) -> usize {
        self.internal_z.iter().map(Vec::len).sum()
    }

    /// Color counts of the flat problem.
    pub fn flat_l(&self) -> Vec<usize> {
        let mut l = self.base_l.clone();
        for lp in &self.internal_l {
            for (acc, &c) in l.iter_mut().zip(lp) {
                *acc += c;
            }
        }
        l
    }

    pub fn z_at(&self, eps: Complex64) -> Vec<Complex64> {
        let mut z = Vec::with_capacity(self.n_points());
        for (center, local) in self.centers.iter().zip(&self.internal_z) {
            z.extend(local.iter().map(|&y| center + eps * y));
        }
        z
    }

    /// The flat `t` vector, color blocks ascending; within each color the
    /// base variables come first, then each cluster in order.
    pub fn t_at(&self, eps: Complex64) -> Vec<Complex64> {
        let rank = self.base_l.len();
        let mut t = Vec::new();
        for color in 0..rank {
            let offset: usize = self.base_l[..color].iter().sum();
            t.extend_from_slice(&self.base_t[offset..offset + self.base_l[color]]);
            for ((center, up), lp) in self
                .centers
                .iter()
                .zip(&self.internal_t)
                .zip(&self.internal_l)
            {
                let offset: usize = lp[..color].iter().sum();
                t.extend(up[offset..offset + lp[color]].iter().map(|&u| center + eps * u));
            }
        }
        t
    }
}

/// Damped Newton iteration on the gradient of `log Phi`. The Jacobian of the
/// residual is exactly the Hessian, which is symmetric. Convergence is
/// judged relative to [`MasterProblem::residual_scale`], the size of the
/// terms whose cancellation produces the residual.
pub fn newton_refine(
    mp: &MasterProblem<Complex64>,
    mut t: Vec<Complex64>,
    opts: &SolverOptions,
) -> Result<Vec<Complex64>, SolverError> {
    if t.is_empty() {
        return Ok(t);
    }
    let mut residual = mp.bethe_residual(&t)?;
    let mut norm = sup_norm(&residual);
    for _ in 0..opts.newton_max_iter {
        if norm <= opts.newton_tol * mp.residual_scale(&t)?.max(1.0) {
            return Ok(t);
        }
        let jacobian = mp.log_phi_hessian(&t)?;
        let rhs: Vec<Complex64> = residual.iter().map(|x| -x).collect();
        let delta = lu_solve(jacobian, rhs).ok_or(SolverError::SingularJacobian)?;
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..10 {
            let candidate: Vec<Complex64> = t
                .iter()
                .zip(&delta)
                .map(|(a, d)| a + step * d)
                .collect();
            // A candidate on a pole is treated like any other bad step.
            if let Ok(res) = mp.bethe_residual(&candidate) {
                let cand_norm = sup_norm(&res);
                if cand_norm < norm {
                    t = candidate;
                    residual = res;
                    norm = cand_norm;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            return Err(SolverError::NewtonStalled { residual: norm });
        }
    }
    if norm <= opts.newton_tol * mp.residual_scale(&t)?.max(1.0) {
        Ok(t)
    } else {
        Err(SolverError::NewtonStalled { residual: norm })
    }
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Moves a peelable factor to the last position, preferring `w_1`, then
/// `w_r`, then `w_2` in rank 3. Swapping whole (weight, point) pairs leaves
/// the critical set unchanged.
fn arrange_peel(
    sys: &CartanData,
    weights: &[Weight],
    z: &[Complex64],
) -> Result<(Vec<Weight>, Vec<Complex64>, usize), SolverError> {
    let r = sys.rank();
    let mut preferences = vec![1];
    if r > 1 {
        preferences.push(r);
    }
    if r == 3 {
        preferences.push(2);
    }
    for p in preferences {
        if let Some(idx) = weights
            .iter()
            .rposition(|w| fundamental_index(w) == Some(p))
        {
            let mut weights = weights.to_vec();
            let mut z = z.to_vec();
            let last = weights.len() - 1;
            weights.swap(idx, last);
            z.swap(idx, last);
            return Ok((weights, z, p));
        }
    }
    Err(SolverError::NoPeelableFactor)
}

/// `Some(p)` when `w` is the `p`-th fundamental weight (1-based).
fn fundamental_index(w: &Weight) -> Option<usize> {
    let ints = w.to_ints()?;
    let mut found = None;
    for (i, &c) in ints.iter().enumerate() {
        match c {
            0 => {}
            1 if found.is_none() => found = Some(i + 1),
            _ => return None,
        }
    }
    found
}

/// The color counts `l0` a peel of `w_p` can carry, zero included.
fn delta_candidates(r: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; r]];
    if p == 1 {
        for m in 1..=r {
            let mut l0 = vec![0; r];
            l0[..m].fill(1);
            out.push(l0);
        }
    } else if p == r {
        for m in 1..=r {
            let mut l0 = vec![0; r];
            l0[r - m..].fill(1);
            out.push(l0);
        }
    } else if r == 3 && p == 2 {
        out.extend(
            [
                [0, 1, 0],
                [1, 1, 0],
                [0, 1, 1],
                [1, 1, 1],
                [1, 2, 1],
            ]
            .iter()
            .map(|l0| l0.to_vec()),
        );
    }
    out
}

/// Both orderings of a two point problem, first seed wins. `Ok(None)` means
/// the singular weight space is zero dimensional.
fn solve_two_points(
    sys: &CartanData,
    weights: &[Weight],
    l: &[usize],
    z: &[Complex64],
) -> Result<Option<Vec<Complex64>>, SolverError> {
    let r = sys.rank();
    let mut any_supported = false;
    for (i, j) in [(0, 1), (1, 0)] {
        let p = match fundamental_index(&weights[j]) {
            Some(p) if p == 1 || p == r || (r == 3 && p == 2) => p,
            _ => continue,
        };
        any_supported = true;
        if let Some(seed) = two_point_seed(sys, &weights[i], p, l) {
            let t = seed
                .iter()
                .map(|x| z[i] + (z[j] - z[i]) * x.to_c64())
                .collect();
            return Ok(Some(t));
        }
    }
    if any_supported {
        Ok(None)
    } else {
        Err(SolverError::NoPeelableFactor)
    }
}

/// Exact critical point of the two point problem with `V_lambda` at 0 and
/// `V_{w_p}` at 1, for the color counts `l0`. Supported are `p = 1`, `p = r`
/// and, in rank 3, `p = 2`. Returns the variables ordered by color, or
/// `None` when no critical point exists (the singular weight space is zero)
/// or the shape of `l0` is not one a `w_p` factor can carry.
pub fn two_point_seed(
    sys: &CartanData,
    lambda: &Weight,
    p: usize,
    l0: &[usize],
) -> Option<Vec<QuadExt>> {
    if !sys.is_type_a() || !sys.is_dominant_integral(lambda) {
        return None;
    }
    let r = sys.rank();
    if p == 0 || p > r || l0.len() != r {
        return None;
    }
    let lam = lambda.to_ints()?;
    if l0.iter().all(|&c| c == 0) {
        return Some(Vec::new());
    }
    if p == 1 {
        let i = prefix_ones(l0)?;
        return seed_w1(&lam, i).map(into_quad);
    }
    if p == r {
        let m = suffix_ones(l0)?;
        return seed_wr(&lam, m).map(into_quad);
    }
    if r == 3 && p == 2 {
        return seed_sl4_w2(&lam, l0);
    }
    None
}

fn into_quad(t: Vec<BigRational>) -> Vec<QuadExt> {
    t.into_iter().map(QuadExt::rational).collect()
}

fn prefix_ones(l0: &[usize]) -> Option<usize> {
    let i = l0.iter().take_while(|&&c| c == 1).count();
    if i >= 1 && l0[i..].iter().all(|&c| c == 0) {
        Some(i)
    } else {
        None
    }
}

fn suffix_ones(l0: &[usize]) -> Option<usize> {
    let m = l0.iter().rev().take_while(|&&c| c == 1).count();
    if m >= 1 && l0[..l0.len() - m].iter().all(|&c| c == 0) {
        Some(m)
    } else {
        None
    }
}

/// Critical point of the two point problem `(V_lambda, V_{w_1})` at `(0, 1)`
/// with one variable of each color `1..=i`:
///
/// ```text
/// t_j = prod_{m=1}^{j} (S_m + i - m) / (S_m + i - m + 1),
/// S_m = lambda_m + ... + lambda_i.
/// ```
///
/// Defined exactly when `lambda_i >= 1`, which is when the singular weight
/// space of weight `lambda + w_1 - (alpha_1 + ... + alpha_i)` is nonzero.
pub fn seed_w1(lambda: &[i64], i: usize) -> Option<Vec<BigRational>> {
    if i == 0 || i > lambda.len() || lambda[i - 1] < 1 {
        return None;
    }
    let mut out = Vec::with_capacity(i);
    let mut acc = BigRational::one();
    for j in 1..=i {
        let s: i64 = lambda[j - 1..i].iter().sum();
        let num = s + i as i64 - j as i64;
        acc *= BigRational::new(num.into(), (num + 1).into());
        out.push(acc.clone());
    }
    Some(out)
}

/// Mirror image of [`seed_w1`] under the diagram automorphism: the critical
/// point of `(V_lambda, V_{w_r})` at `(0, 1)` with one variable of each of
/// the last `m` colors. Variables are returned by color, ascending.
pub fn seed_wr(lambda: &[i64], m: usize) -> Option<Vec<BigRational>> {
    let reversed: Vec<i64> = lambda.iter().rev().copied().collect();
    let mut t = seed_w1(&reversed, m)?;
    t.reverse();
    Some(t)
}

/// Critical point of the rank 3 two point problem `(V_lambda, V_{w_2})` at
/// `(0, 1)` for each admissible shape of `l0`. All shapes except
/// `l0 = (1, 2, 1)` reduce to [`seed_w1`] and [`seed_wr`], possibly in a
/// subsystem of simple roots; the last shape has two same-color variables
/// that are the roots of a rational quadratic, so the result may live in a
/// real quadratic extension.
pub fn seed_sl4_w2(lambda: &[i64], l0: &[usize]) -> Option<Vec<QuadExt>> {
    if lambda.len() != 3 || l0.len() != 3 {
        return None;
    }
    let (a, b, c) = (lambda[0], lambda[1], lambda[2]);
    match *l0 {
        [0, 1, 0] => {
            if b < 1 {
                return None;
            }
            Some(vec![QuadExt::rational(BigRational::new(
                b.into(),
                (b + 1).into(),
            ))])
        }
        // Variables of colors 1 and 2 never see lambda_3 or alpha_3, so the
        // problem restricts to the subsystem {alpha_1, alpha_2}.
        [1, 1, 0] => seed_wr(&[a, b], 2).map(into_quad),
        [0, 1, 1] => seed_w1(&[b, c], 2).map(into_quad),
        [1, 1, 1] => {
            if a < 1 || c < 1 {
                return None;
            }
            let sum = a + b + c;
            let outer = |lam: i64| {
                BigRational::new(
                    (lam * (sum + 2)).into(),
                    ((lam + 1) * (sum + 3)).into(),
                )
            };
            Some(into_quad(vec![
                outer(a),
                BigRational::new((sum + 2).into(), (sum + 3).into()),
                outer(c),
            ]))
        }
        [1, 2, 1] => {
            if b < 1 {
                return None;
            }
            let sum = a + b + c;
            let edge = |x: i64, y: i64| {
                BigRational::new(
                    ((x + y + 1) * (sum + 2)).into(),
                    ((x + y + 2) * (sum + 3)).into(),
                )
            };
            let t1 = edge(a, b);
            let t4 = edge(b, c);
            let denom = BigRational::from_integer(
                ((b + 1) * (a + b + 2) * (b + c + 2) * (sum + 3)).into(),
            );
            let e1 = BigRational::from_integer(2.into())
                - BigRational::from_integer(
                    ((a + 2 * b + c + 4)
                        * (a * c + 2 * a * b + 2 * b * c + 2 * b * b + 2 * a + 6 * b + 2 * c + 4))
                        .into(),
                ) / denom.clone();
            let e2 = BigRational::from_integer((b * (a + b + 1) * (b + c + 1) * (sum + 2)).into())
                / denom;
            let disc = e1.clone() * e1.clone() - BigRational::from_integer(4.into()) * e2;
            if disc.is_zero() {
                return None;
            }
            let root = match rational_sqrt(&disc) {
                Some(root) => QuadExt::rational(root),
                None => QuadExt::sqrt(disc),
            };
            let half = QuadExt::rational(BigRational::new(1.into(), 2.into()));
            let mid = QuadExt::rational(e1);
            let lo = (mid.clone() - root.clone()) * half.clone();
            let hi = (mid + root) * half;
            Some(vec![
                QuadExt::rational(t1),
                lo,
                hi,
                QuadExt::rational(t4),
            ])
        }
        _ => None,
    }
}

/// `sqrt(q)` when it is rational, `None` otherwise (including `q < 0`).
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let numer = q.numer();
    let denom = q.denom();
    let sn = numer.sqrt();
    if &(&sn * &sn) != numer {
        return None;
    }
    let sd = denom.sqrt();
    if &(&sd * &sd) != denom {
        return None;
    }
    Some(BigRational::new(sn, sd))
}
