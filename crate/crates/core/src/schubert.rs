//! Wronskians, ramification sequences and the Pluecker formula.
//!
//! A plane of polynomials `V` in `C_d[x]` meets the osculating flag at each
//! point `z` (and at infinity) in a unique Schubert cell, labeled by a
//! non-increasing sequence `a(z)`. At a finite point the label is read off
//! the distinct vanishing orders of an echelonized basis; at infinity off
//! the distinct degrees. The codimensions `|a(z)|` at the finite
//! ramification points add up with `|a(infinity)|` to the dimension of the
//! Grassmannian, and since `|a(z)|` equals the multiplicity of `z` as a root
//! of the Wronskian, the identity can be checked exactly as
//! `deg W + |a(infinity)| = (r+1)(d-r)`.
//!
//! The dictionary between dominant weights and ramification sequences lets
//! the same bookkeeping label the Schubert intersection problems whose
//! solutions the critical point count enumerates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lie::{CartanData, Weight};

#[derive(Debug, Error)]
pub enum SchubertError {
    #[error("a plane needs at least one basis polynomial")]
    EmptyBasis,
    #[error("basis polynomial {index} has degree {degree}, ambient bound is {d}")]
    DegreeTooLarge { index: usize, degree: usize, d: usize },
    #[error("ambient degree {d} too small for {count} independent polynomials")]
    AmbientTooSmall { d: usize, count: usize },
    #[error("basis polynomials are linearly dependent")]
    Dependent,
    #[error("weights must be dominant integral")]
    NotDominant,
    #[error("the weight at infinity does not differ from the total weight by a root lattice element")]
    NotInRootLattice,
    #[error("ambient degree {d} is too small for these weights")]
    AmbientDegreeTooSmall { d: usize },
}

/// A polynomial with exact rational coefficients, stored low to high with no
/// trailing zeros; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Order of vanishing at 0; `None` for the zero polynomial.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigRational::from_integer((k as i64 + 1).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c;
        }
        acc
    }

    /// `p(x + z)`, by Horner expansion.
    pub fn taylor_shift(&self, z: &BigRational) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (x + z) + c
            let mut next = vec![BigRational::zero(); acc.coeffs.len() + 1];
            for (k, a) in acc.coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] += a * z;
            }
            next[0] += c;
            acc = Poly::from_coeffs(next);
        }
        acc
    }

    /// Quotient by `(x - z)` when `z` is a root, `None` otherwise.
    pub fn divide_root(&self, z: &BigRational) -> Option<Poly> {
        if self.is_zero() {
            return None;
        }
        let mut quotient = vec![BigRational::zero(); self.coeffs.len() - 1];
        let mut carry = BigRational::zero();
        for k in (1..self.coeffs.len()).rev() {
            carry = self.coeff(k) + carry * z;
            quotient[k - 1] = carry.clone();
        }
        if self.coeff(0) + carry * z == BigRational::zero() {
            Some(Poly::from_coeffs(quotient))
        } else {
            None
        }
    }
}

/// All rational roots of `p` with multiplicities, in ascending order, by the
/// rational root theorem on the cleared-denominator form. `None` when the
/// outer coefficients are too large for divisor enumeration.
pub fn rational_roots(p: &Poly) -> Option<Vec<(BigRational, usize)>> {
    if p.is_zero() {
        return None;
    }
    let order = p.order().expect("nonzero polynomial");
    let mut out = Vec::new();
    if order > 0 {
        out.push((BigRational::zero(), order));
    }
    let reduced = Poly::from_coeffs(p.coeffs()[order..].to_vec());
    if reduced.degree() == Some(0) {
        return Some(out);
    }
    let mut common = BigInt::one();
    for c in reduced.coeffs() {
        common = common.lcm(c.denom());
    }
    let scale = BigRational::from_integer(common);
    let constant = (reduced.coeff(0) * scale.clone()).to_integer();
    let leading = (reduced.coeffs().last().unwrap() * scale).to_integer();
    let mut candidates = std::collections::BTreeSet::new();
    for num in divisors(&constant)? {
        for den in divisors(&leading)? {
            let q = BigRational::new(num.clone(), den);
            candidates.insert(-q.clone());
            candidates.insert(q);
        }
    }
    for cand in candidates {
        if reduced.eval(&cand).is_zero() {
            let mult = root_multiplicity(&reduced, &cand);
            out.push((cand, mult));
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Some(out)
}

/// Positive divisors of `n`, or `None` beyond the enumeration budget.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n: u64 = n.magnitude().try_into().ok()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(BigInt::from(d));
            out.push(BigInt::from(n / d));
        }
        d += 1;
    }
    Some(out)
}

/// Multiplicity of `z` as a root, by repeated exact division.
pub fn root_multiplicity(p: &Poly, z: &BigRational) -> usize {
    let mut p = p.clone();
    let mut mult = 0;
    while let Some(q) = p.divide_root(z) {
        p = q;
        mult += 1;
        if p.is_zero() {
            break;
        }
    }
    mult
}

/// Determinant of the derivative matrix `(d/dx)^i u_j` for `i = 0..=r`.
pub fn wronskian(polys: &[Poly]) -> Poly {
    let n = polys.len();
    let mut rows: Vec<Vec<Poly>> = vec![polys.to_vec()];
    for i in 1..n {
        let prev = &rows[i - 1];
        rows.push(prev.iter().map(Poly::derivative).collect());
    }
    poly_det(&rows, &(0..n).collect::<Vec<_>>())
}

fn poly_det(rows: &[Vec<Poly>], cols: &[usize]) -> Poly {
    let row = rows.len() - cols.len();
    if cols.is_empty() {
        return Poly::from_ints(&[1]);
    }
    let mut acc = Poly::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &rows[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&other| other != c)
            .collect();
        let minor = poly_det(rows, &rest);
        let term = entry.mul(&minor);
        acc = if k % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// An `(r+1)`-dimensional subspace of `C_d[x]`, presented by a basis.
#[derive(Clone, Debug)]
pub struct PolynomialPlane {
    basis: Vec<Poly>,
    d: usize,
}

impl PolynomialPlane {
    pub fn new(basis: Vec<Poly>, d: usize) -> Result<Self, SchubertError> {
        if basis.is_empty() {
            return Err(SchubertError::EmptyBasis);
        }
        if basis.len() > d + 1 {
            return Err(SchubertError::AmbientTooSmall {
                d,
                count: basis.len(),
            });
        }
        for (index, p) in basis.iter().enumerate() {
            match p.degree() {
                None => return Err(SchubertError::Dependent),
                Some(degree) if degree > d => {
                    return Err(SchubertError::DegreeTooLarge { index, degree, d })
                }
                _ => {}
            }
        }
        let plane = PolynomialPlane { basis, d };
        // Degree echelon succeeds exactly when the basis is independent.
        plane.distinct_degrees()?;
        Ok(plane)
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `r + 1` = dimension of the plane.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn wronskian(&self) -> Poly {
        wronskian(&self.basis)
    }

    /// The sequence `a(z)` at a finite point: with the distinct vanishing
    /// orders `O_1 > ... > O_{r+1}` of an echelonized basis at `z`,
    /// `a_i = O_i - (r + 1 - i)`.
    pub fn ramification_at(&self, z: &BigRational) -> Result<Vec<usize>, SchubertError> {
        let shifted: Vec<Poly> = self.basis.iter().map(|p| p.taylor_shift(z)).collect();
        let mut orders = echelon_positions(shifted, Poly::order)?;
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let count = orders.len();
        Ok(orders
            .into_iter()
            .enumerate()
            .map(|(idx, o)| o - (count - 1 - idx))
            .collect())
    }

    /// The sequence `a(infinity)`: with the distinct degrees
    /// `D_1 < ... < D_{r+1}` of an echelonized basis,
    /// `a_i = d - r + i - 1 - D_i`.
    pub fn ramification_at_infinity(&self) -> Result<Vec<usize>, SchubertError> {
        let degrees = self.distinct_degrees()?;
        let r = self.dim() - 1;
        Ok(degrees
            .into_iter()
            .enumerate()
            .map(|(idx, deg)| self.d - r + idx - deg)
            .collect())
    }

    /// Whether every polynomial of the plane vanishes at `z`.
    pub fn has_base_point_at(&self, z: &BigRational) -> Result<bool, SchubertError> {
        Ok(*self.ramification_at(z)?.last().expect("plane is nonempty") > 0)
    }

    /// The Pluecker identity, checked exactly: the Wronskian degree counts
    /// all finite codimensions with multiplicity, so
    /// `deg W + |a(infinity)| = (r+1)(d-r)`.
    pub fn plucker_holds(&self) -> Result<bool, SchubertError> {
        let w = self.wronskian();
        let deg = match w.degree() {
            Some(deg) => deg,
            None => return Err(SchubertError::Dependent),
        };
        let codim_inf: usize = self.ramification_at_infinity()?.iter().sum();
        let r = self.dim() - 1;
        Ok(deg + codim_inf == self.dim() * (self.d - r))
    }

    fn distinct_degrees(&self) -> Result<Vec<usize>, SchubertError> {
        let mut degrees = echelon_positions(self.basis.clone(), |p| p.degree())?;
        degrees.sort_unstable();
        Ok(degrees)
    }
}

/// Reduces `rows` until the positions selected by `pivot` (vanishing order
/// or degree) are pairwise distinct, eliminating with the coefficient at the
/// shared position. Fails when a row cancels completely.
fn echelon_positions(
    mut rows: Vec<Poly>,
    pivot: impl Fn(&Poly) -> Option<usize>,
) -> Result<Vec<usize>, SchubertError> {
    loop {
        let mut positions = Vec::with_capacity(rows.len());
        for row in &rows {
            positions.push(pivot(row).ok_or(SchubertError::Dependent)?);
        }
        let mut clash = None;
        'search: for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if positions[i] == positions[j] {
                    clash = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = clash else {
            return Ok(positions);
        };
        let factor = rows[j].coeff(positions[j]) / rows[i].coeff(positions[i]);
        rows[j] = rows[j].sub(&rows[i].scale(&factor));
    }
}

/// Ramification sequences at the marked points and at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationData {
    pub at_points: Vec<Vec<usize>>,
    pub at_infinity: Vec<usize>,
}

impl RamificationData {
    pub fn codim_sum(&self) -> usize {
        let finite: usize = self.at_points.iter().flatten().sum();
        finite + self.at_infinity.iter().sum::<usize>()
    }

    /// Whether the codimensions add up to `dim Gr(r+1, C_d[x])`.
    pub fn satisfies_plucker(&self, r: usize, d: usize) -> bool {
        self.codim_sum() == (r + 1) * (d - r)
    }
}

/// The dictionary from dominant weights to ramification sequences:
/// `a_i(z_s) = (Lambda_s, alpha_1 + ... + alpha_{r+1-i})` and
/// `a_i(infinity) = d - r - l_1 - (Lambda_inf, alpha_1 + ... + alpha_{i-1})`
/// with `l_1 = (sum_s Lambda_s - Lambda_inf, w_1)`.
pub fn weights_to_ramification(
    sys: &CartanData,
    weights: &[Weight],
    lambda_inf: &Weight,
    d: usize,
) -> Result<RamificationData, SchubertError> {
    let r = sys.rank();
    if !weights.iter().all(|w| sys.is_dominant_integral(w))
        || !sys.is_dominant_integral(lambda_inf)
    {
        return Err(SchubertError::NotDominant);
    }
    let total = weights
        .iter()
        .fold(sys.zero_weight(), |acc, w| acc + w.clone());
    let gap = total - lambda_inf.clone();
    let gap_coords = sys.root_coordinates(&gap);
    if gap_coords.iter().any(|c| !c.is_integer() || c.is_negative()) {
        return Err(SchubertError::NotInRootLattice);
    }
    let l1: i64 = gap_coords[0]
        .to_integer()
        .try_into()
        .map_err(|_| SchubertError::NotInRootLattice)?;

    let mut at_points = Vec::with_capacity(weights.len());
    for w in weights {
        let ints = w.to_ints().expect("dominant integral weight");
        let mut seq = Vec::with_capacity(r + 1);
        for i in 1..=r + 1 {
            let a: i64 = ints[..r + 1 - i].iter().sum();
            seq.push(a as usize);
        }
        at_points.push(seq);
    }

    let inf_ints = lambda_inf.to_ints().expect("dominant integral weight");
    let mut at_infinity = Vec::with_capacity(r + 1);
    for i in 1..=r + 1 {
        let pairing: i64 = inf_ints[..i - 1].iter().sum();
        let a = d as i64 - r as i64 - l1 - pairing;
        if a < 0 {
            return Err(SchubertError::AmbientDegreeTooSmall { d });
        }
        at_infinity.push(a as usize);
    }

    let bound = d.checked_sub(r).ok_or(SchubertError::AmbientDegreeTooSmall { d })?;
    let valid = |seq: &[usize]| {
        seq.windows(2).all(|w| w[0] >= w[1]) && seq.first().is_none_or(|&a| a <= bound)
    };
    if !at_points.iter().all(|seq| valid(seq)) || !valid(&at_infinity) {
        return Err(SchubertError::AmbientDegreeTooSmall { d });
    }
    Ok(RamificationData {
        at_points,
        at_infinity,
    })
}
