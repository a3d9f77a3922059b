//! The four subcommands and their JSON reports.

use std::path::Path;

use bethevec::bethe::{verify_bethe, BetheReport, VerifyOptions};
use bethevec::multiplicity::{sing_dim, tensor_of_irreducibles};
use bethevec::schubert::{
    rational_roots, root_multiplicity, weights_to_ramification, Poly, PolynomialPlane,
    SchubertError,
};
use bethevec::solver::{solve_all, SolverError, SolverOptions};
use bethevec::{CartanData, CriticalPoint, MasterProblem, QuadExt, Weight};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{output, parse, CountArgs, ProblemArgs, SchubertArgs, SolveArgs, VerifyArgs};

/// Failures before a report exists. Bad input exits with code 2, a run that
/// could not finish with code 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Solver(m) => m,
        }
    }
}

/// A finished report. `passed: false` still prints the report but exits with
/// code 4.
pub struct Report {
    pub value: Value,
    pub passed: bool,
}

struct Problem {
    sys: CartanData,
    weights: Vec<Weight>,
    l: Vec<usize>,
    z: Option<Vec<Complex64>>,
    opts: SolverOptions,
}

fn problem(args: &ProblemArgs) -> Result<Problem, CliError> {
    json_format(&args.format)?;
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs wants at least one thread".into()));
    }
    let sys = parse::algebra(&args.algebra)?;
    let weights = parse::weights(&sys, &args.weights)?;
    let l = parse::color_counts(&args.l)?;
    if l.len() != sys.rank() {
        return Err(CliError::Usage(format!(
            "--l has {} entries, {} wants {}",
            l.len(),
            args.algebra,
            sys.rank()
        )));
    }
    let z = args.z.as_deref().map(parse::complex_list).transpose()?;
    if let Some(zs) = &z {
        if zs.len() != weights.len() {
            return Err(CliError::Usage(format!(
                "--z has {} points for {} weights",
                zs.len(),
                weights.len()
            )));
        }
    }
    let opts = SolverOptions {
        eps0: args.eps0,
        seed: args.seed.unwrap_or(0),
        ..SolverOptions::default()
    };
    Ok(Problem {
        sys,
        weights,
        l,
        z,
        opts,
    })
}

fn json_format(format: &str) -> Result<(), CliError> {
    if format == "json" {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--format `{format}` is not available, use json"
        )))
    }
}

fn solver_error(err: SolverError) -> CliError {
    fn is_usage(err: &SolverError) -> bool {
        match err {
            SolverError::Master(_) | SolverError::Reps(_) | SolverError::NotDominant(_) => true,
            SolverError::FixedPoints(inner) => is_usage(inner),
            _ => false,
        }
    }
    if is_usage(&err) {
        CliError::Usage(err.to_string())
    } else {
        CliError::Solver(err.to_string())
    }
}

fn map_orbits<V: Send>(
    jobs: usize,
    orbits: &[CriticalPoint<Complex64>],
    f: impl Fn(&CriticalPoint<Complex64>) -> V + Sync,
) -> Vec<V> {
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("worker pool");
        pool.install(|| orbits.par_iter().map(&f).collect())
    } else {
        orbits.iter().map(f).collect()
    }
}

fn tolerances(opts: &SolverOptions, verify_tol: Option<f64>) -> Value {
    let mut v = json!({
        "eps0": opts.eps0,
        "newton_tol": opts.newton_tol,
        "orbit_tol": opts.orbit_tol,
    });
    if let Some(tol) = verify_tol {
        v["verify_tol"] = json!(tol);
        v["degenerate_tol"] = json!(VerifyOptions::default().degenerate_tol);
    }
    v
}

pub fn solve(args: &SolveArgs) -> Result<Report, CliError> {
    let p = problem(&args.problem)?;
    let res = solve_all(&p.sys, &p.weights, &p.l, p.z.as_deref(), &p.opts).map_err(solver_error)?;
    let orbits = map_orbits(args.problem.jobs, &res.orbits, |cp| {
        json!({
            "t": output::complex_slice(&cp.canonical),
            "residual_norm": cp.residual_norm,
            "hessian_det": output::complex(cp.hessian_det),
        })
    });
    let value = json!({
        "schema": 1,
        "command": "solve",
        "algebra": args.problem.algebra,
        "weights": output::weight_slice(&p.weights),
        "l": p.l,
        "seed": args.problem.seed,
        "z": output::complex_slice(&res.z),
        "tolerances": tolerances(&p.opts, None),
        "expected_multiplicity": res.expected,
        "orbit_count": res.orbits.len(),
        "count_matches": res.expected.map(|e| e == res.orbits.len()),
        "attempts": res.attempts,
        "orbits": orbits,
    });
    Ok(Report {
        value,
        passed: true,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Report, CliError> {
    if let Some(name) = &args.z_exact {
        return verify_exact(args, name);
    }
    if args.t.is_some() {
        return Err(CliError::Usage("--t goes with --z-exact".into()));
    }
    let p = problem(&args.problem)?;
    let res = solve_all(&p.sys, &p.weights, &p.l, p.z.as_deref(), &p.opts).map_err(solver_error)?;
    let space =
        tensor_of_irreducibles(&p.sys, &p.weights).map_err(|e| CliError::Usage(e.to_string()))?;
    let mp = MasterProblem::new(p.sys.clone(), p.weights.clone(), p.l.clone(), res.z.clone())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let vopts = VerifyOptions::default();
    let rows = map_orbits(args.problem.jobs, &res.orbits, |cp| {
        verify_bethe(&space, &mp, &cp.t, &vopts)
            .map(|rep| orbit_verdict(cp, &rep, args.tol))
            .map_err(|e| CliError::Solver(e.to_string()))
    });
    let mut orbit_rows = Vec::with_capacity(rows.len());
    let mut all_passed = true;
    for row in rows {
        let (value, ok) = row?;
        all_passed &= ok;
        orbit_rows.push(value);
    }
    let value = json!({
        "schema": 1,
        "command": "verify",
        "mode": "float",
        "algebra": args.problem.algebra,
        "weights": output::weight_slice(&p.weights),
        "l": p.l,
        "seed": args.problem.seed,
        "z": output::complex_slice(&res.z),
        "tolerances": tolerances(&p.opts, Some(args.tol)),
        "expected_multiplicity": res.expected,
        "orbit_count": res.orbits.len(),
        "count_matches": res.expected.map(|e| e == res.orbits.len()),
        "attempts": res.attempts,
        "orbits": orbit_rows,
        "all_passed": all_passed,
    });
    Ok(Report {
        value,
        passed: all_passed,
    })
}

fn orbit_verdict(
    cp: &CriticalPoint<Complex64>,
    rep: &BetheReport<Complex64>,
    tol: f64,
) -> (Value, bool) {
    let ratio_gap = (!rep.degenerate).then(|| (rep.norm_sq / cp.hessian_det - 1.0).norm());
    let passed = ratio_gap.is_none_or(|gap| gap <= tol);
    let value = json!({
        "t": output::complex_slice(&cp.canonical),
        "residual_norm": cp.residual_norm,
        "norm_sq": output::complex(rep.norm_sq),
        "hessian_det": output::complex(cp.hessian_det),
        "ratio_gap": ratio_gap,
        "degenerate": rep.degenerate,
        "is_singular": rep.singular_defect <= tol,
        "singular_defect": rep.singular_defect,
        "eigenvalues": Value::Array(rep.eigenvalues.iter().map(|&c| output::complex(c)).collect()),
        "eigen_defect": rep.eigen_defect,
        "eigen_sum_defect": rep.eigen_sum_defect,
        "passed": passed,
    });
    (value, passed)
}

fn verify_exact(args: &VerifyArgs, name: &str) -> Result<Report, CliError> {
    if name != "cbrt-of-unity" {
        return Err(CliError::Usage(format!(
            "`{name}` is not an exact configuration, available: cbrt-of-unity"
        )));
    }
    let p = problem(&args.problem)?;
    if p.weights.len() != 3 {
        return Err(CliError::Usage(
            "cbrt-of-unity places three marked points, pass three weights".into(),
        ));
    }
    let t_token = args.t.as_ref().ok_or_else(|| {
        CliError::Usage("--z-exact wants --t with exact rational coordinates".into())
    })?;
    let t: Vec<QuadExt> = parse::rational_list(t_token)?
        .into_iter()
        .map(QuadExt::rational)
        .collect();
    let eta = QuadExt::cbrt_unity();
    let z = vec![
        QuadExt::rational(BigRational::one()),
        eta.clone(),
        eta.clone() * eta,
    ];
    let mp = MasterProblem::new(p.sys.clone(), p.weights.clone(), p.l.clone(), z.clone())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if t.len() != mp.l_total() {
        return Err(CliError::Usage(format!(
            "--t has {} coordinates, the problem wants {}",
            t.len(),
            mp.l_total()
        )));
    }
    let residual = mp
        .bethe_residual(&t)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let critical = residual.iter().all(|r| r.is_zero());
    let hessian_det = mp
        .hessian_det(&t)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let space =
        tensor_of_irreducibles(&p.sys, &p.weights).map_err(|e| CliError::Usage(e.to_string()))?;
    let rep = verify_bethe(&space, &mp, &t, &VerifyOptions::default())
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let identity_holds = rep.norm_sq == hessian_det;
    let passed = critical && identity_holds;
    let value = json!({
        "schema": 1,
        "command": "verify",
        "mode": "exact",
        "arithmetic": "exact",
        "algebra": args.problem.algebra,
        "weights": output::weight_slice(&p.weights),
        "l": p.l,
        "z": [output::quad(&z[0]), output::quad(&z[1]), output::quad(&z[2])],
        "t": Value::Array(t.iter().map(output::quad).collect()),
        "tolerances": {},
        "critical_point_exact": critical,
        "norm_sq": output::quad(&rep.norm_sq),
        "hessian_det": output::quad(&hessian_det),
        "identity_holds": identity_holds,
        "degenerate": rep.degenerate,
        "singular_defect": rep.singular_defect,
        "eigenvalues": Value::Array(rep.eigenvalues.iter().map(output::quad).collect()),
        "passed": passed,
    });
    Ok(Report { value, passed })
}

pub fn count(args: &CountArgs) -> Result<Report, CliError> {
    json_format(&args.format)?;
    let sys = parse::algebra(&args.algebra)?;
    let weights = parse::weights(&sys, &args.weights)?;
    let mu = parse::coordinate_weight(&sys, &args.mu)?;
    let multiplicity =
        sing_dim(&sys, &weights, &mu).map_err(|e| CliError::Usage(e.to_string()))?;
    let value = json!({
        "schema": 1,
        "command": "count",
        "algebra": args.algebra,
        "weights": output::weight_slice(&weights),
        "mu": output::weight(&mu),
        "arithmetic": "exact",
        "multiplicity": multiplicity,
    });
    Ok(Report {
        value,
        passed: true,
    })
}

pub fn schubert(args: &SchubertArgs) -> Result<Report, CliError> {
    json_format(&args.format)?;
    match (&args.plane, &args.from_weights) {
        (Some(path), None) => plane_report(args, path),
        (None, Some(token)) => weight_report(args, token),
        _ => Err(CliError::Usage(
            "pass exactly one of --plane or --from-weights".into(),
        )),
    }
}

fn plane_report(args: &SchubertArgs, path: &Path) -> Result<Report, CliError> {
    if args.algebra.is_some() || args.infinity.is_some() || args.l.is_some() {
        return Err(CliError::Usage(
            "--algebra, --infinity and --l go with --from-weights".into(),
        ));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut basis = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut coeffs = Vec::new();
        for tok in line.split_whitespace() {
            let c = parse::rational(tok)
                .map_err(|e| CliError::Usage(format!("line {}: {}", idx + 1, e.message())))?;
            coeffs.push(c);
        }
        basis.push(Poly::from_coeffs(coeffs));
    }
    let max_degree = basis.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let d = args.d.unwrap_or(max_degree);
    let plane = PolynomialPlane::new(basis, d).map_err(|e| CliError::Usage(e.to_string()))?;
    let w = plane.wronskian();
    let roots = rational_roots(&w);
    let roots_complete = roots.is_some();
    let mut points = roots.unwrap_or_default();
    if let Some(at) = &args.at {
        for q in parse::rational_list(at)? {
            if !points.iter().any(|(z, _)| *z == q) {
                let mult = root_multiplicity(&w, &q);
                points.push((q, mult));
            }
        }
        points.sort_by(|a, b| a.0.cmp(&b.0));
    }
    let mut finite = Vec::new();
    for (z, mult) in &points {
        let a = plane.ramification_at(z).map_err(internal)?;
        let codim: usize = a.iter().sum();
        finite.push(json!({
            "z": output::rational(z),
            "wronskian_multiplicity": mult,
            "a": a,
            "codim": codim,
            "codim_matches_multiplicity": codim == *mult,
            "base_point": plane.has_base_point_at(z).map_err(internal)?,
        }));
    }
    let a_inf = plane.ramification_at_infinity().map_err(internal)?;
    let value = json!({
        "schema": 1,
        "command": "schubert",
        "mode": "plane",
        "arithmetic": "exact",
        "dim": plane.dim(),
        "d": d,
        "wronskian": output::rational_slice(w.coeffs()),
        "wronskian_degree": w.degree(),
        "rational_roots_complete": roots_complete,
        "finite": finite,
        "infinity": infinity_row(&a_inf),
        "plucker_holds": plane.plucker_holds().map_err(internal)?,
    });
    Ok(Report {
        value,
        passed: true,
    })
}

fn weight_report(args: &SchubertArgs, token: &str) -> Result<Report, CliError> {
    if args.at.is_some() {
        return Err(CliError::Usage("--at goes with --plane".into()));
    }
    let algebra = args
        .algebra
        .as_ref()
        .ok_or_else(|| CliError::Usage("--from-weights wants --algebra".into()))?;
    let sys = parse::algebra(algebra)?;
    let weights = parse::weights(&sys, token)?;
    let lambda_inf = match (&args.infinity, &args.l) {
        (Some(tok), None) => parse::coordinate_weight(&sys, tok)?,
        (None, Some(tok)) => {
            let l = parse::color_counts(tok)?;
            if l.len() != sys.rank() {
                return Err(CliError::Usage(format!(
                    "--l has {} entries, {algebra} wants {}",
                    l.len(),
                    sys.rank()
                )));
            }
            let total = weights
                .iter()
                .fold(sys.zero_weight(), |acc, w| acc + w.clone());
            total - sys.alpha_of(&l)
        }
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --infinity or --l with --from-weights".into(),
            ))
        }
    };
    let d = match args.d {
        Some(d) => d,
        None => smallest_ambient(&sys, &weights, &lambda_inf)?,
    };
    let data = weights_to_ramification(&sys, &weights, &lambda_inf, d)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let points: Vec<Value> = weights
        .iter()
        .zip(&data.at_points)
        .map(|(w, a)| {
            json!({
                "weight": output::weight(w),
                "a": a,
                "codim": a.iter().sum::<usize>(),
            })
        })
        .collect();
    let r = sys.rank();
    let value = json!({
        "schema": 1,
        "command": "schubert",
        "mode": "from-weights",
        "arithmetic": "exact",
        "algebra": algebra,
        "d": d,
        "infinity_weight": output::weight(&lambda_inf),
        "points": points,
        "infinity": infinity_row(&data.at_infinity),
        "codim_sum": data.codim_sum(),
        "grassmannian_dim": (r + 1) * (d - r),
        "plucker_matches": data.satisfies_plucker(r, d),
    });
    Ok(Report {
        value,
        passed: true,
    })
}

fn infinity_row(a: &[usize]) -> Value {
    json!({ "a": a, "codim": a.iter().sum::<usize>() })
}

fn internal(err: SchubertError) -> CliError {
    CliError::Solver(err.to_string())
}

fn smallest_ambient(
    sys: &CartanData,
    weights: &[Weight],
    lambda_inf: &Weight,
) -> Result<usize, CliError> {
    for d in sys.rank().. {
        match weights_to_ramification(sys, weights, lambda_inf, d) {
            Ok(_) => return Ok(d),
            Err(SchubertError::AmbientDegreeTooSmall { .. }) => continue,
            Err(e) => return Err(CliError::Usage(e.to_string())),
        }
    }
    unreachable!("a large enough ambient degree always exists")
}
